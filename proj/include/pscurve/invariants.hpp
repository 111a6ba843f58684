#pragma once

// Frame matrices M(x), M'(x) and the differential invariants built from them.

#include <optional>
#include <string>
#include <vector>

#include "pscurve/forms.hpp"
#include "pscurve/path.hpp"

namespace pscurve {

/// m has columns x, x', ..., x^(n-1); m_shift has columns x', ..., x^(n).
struct FrameMatrices {
    Matrix m;
    Matrix m_shift;
    double t = 0.0;
};

/// Requires jet.order() >= n.
FrameMatrices frame_matrices(const Jet& jet);

/// M(x)(t) from a jet of order >= n-1.
Matrix frame_matrix(const Jet& jet);

/// det M(x)(t). Requires jet.order() >= n-1.
Scalar det_m(const Jet& jet);

enum class FormKind { Euclidean, Pseudo };

/// M^T M (Euclidean) or M^T E_p M (pseudo); entry (i, j) is the form of
/// x^(i) and x^(j).
Matrix gram(const Jet& jet, const Signature& sig, FormKind form);

/// The form matching a signature: Euclidean for p == n.
inline FormKind natural_form(const Signature& sig) {
    return sig.euclidean() ? FormKind::Euclidean : FormKind::Pseudo;
}

/// 1e-9 * (1 + max|m_ij|^n): threshold below which |det m| counts as zero.
double singular_tolerance(const Matrix& m);

/// M(x)^-1 M'(x). Throws StrongRegularityError when |det M| <= tol
/// (default singular_tolerance(M)).
Matrix frenet_matrix(const Jet& jet, std::optional<double> tol = std::nullopt);

/// Generator invariants at one parameter, in a fixed order: the diagonal
/// Gram entries <x^(j-1), x^(j-1)> for j = 1..n (full groups) or j = 1..n-1
/// followed by det M(x) (special groups). Over C with 1 <= p <= n-1 the
/// determinant entry is i^(n-p) det M(x). Semidirect families use the same
/// functionals on the derivative path x'.
struct GeneratorSignature {
    double t = 0.0;
    std::vector<Scalar> values;
};

/// Signature values from a jet of the working path (x itself, or x' for the
/// semidirect families). Requires jet.order() >= n-1.
std::vector<Scalar> signature_values(const Jet& jet, const GroupTag& group);

GeneratorSignature generator_signature(const PathDef& path, const GroupTag& group, double t);

/// Column labels matching signature_values: "g1".."g{n-1}" then "det" or
/// "g{n}".
std::vector<std::string> signature_labels(const GroupTag& group);

struct RegularityReport {
    bool pass = true;
    std::vector<double> failing;       // grid points with |det M| <= tol or evaluation failure
    double min_abs_det = 0.0;
    double max_abs_det = 0.0;
    std::vector<std::string> notes;    // evaluation failures, verbatim
};

/// Strong regularity on a grid: |det M(x)(t)| > tol at every point. With no
/// explicit tol, each point uses singular_tolerance(M(x)(t)).
RegularityReport is_strongly_regular(const PathDef& path, const std::vector<double>& grid,
                                     std::optional<double> tol = std::nullopt);

}  // namespace pscurve

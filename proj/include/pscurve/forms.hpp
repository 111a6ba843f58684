#pragma once

// Bilinear forms, the signature matrices E_p and H, and membership tests for
// the (pseudo-)orthogonal groups.
//
// Over the complex field both forms are BILINEAR, not sesquilinear:
// (x, y) = sum x_i y_i with no conjugation. Eigen's dot() conjugates its first
// argument, so never use it for these forms.

#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace pscurve {

using Scalar = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

enum class Field { Real, Complex };

std::string_view to_string(Field field);
Field parse_field(std::string_view text);

/// Dimension n and index p of the form [x, y]. p == n is the Euclidean form.
class Signature {
public:
    /// Throws SignatureError unless n >= 2 and 1 <= p <= n.
    Signature(int n, int p);

    int n() const noexcept { return n_; }
    int p() const noexcept { return p_; }
    bool euclidean() const noexcept { return p_ == n_; }

    /// Throws SignatureError when p is outside 1..n-1.
    void require_pseudo() const;

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    int n_;
    int p_;
};

enum class Family { O, SO, EO, ESO };

std::string_view to_string(Family family);
Family parse_family(std::string_view text);

inline bool is_special(Family f) { return f == Family::SO || f == Family::ESO; }
inline bool has_translation(Family f) { return f == Family::EO || f == Family::ESO; }

/// A group G (or K^n x| G) fixed by family, signature and field.
struct GroupTag {
    Family family;
    Signature sig;
    Field field;

    std::string name() const;
};

/// diag(1,...,1,-1,...,-1) with p leading ones; identity for p == n.
Matrix e_p_matrix(const Signature& sig);

/// (x, y) = x_1 y_1 + ... + x_n y_n.
Scalar euclidean_form(const Vector& x, const Vector& y);

/// [x, y] = x^T E_p y. Requires 1 <= p <= n-1.
Scalar pseudo_form(const Vector& x, const Vector& y, const Signature& sig);

/// (x, y) when sig is Euclidean, [x, y] otherwise.
Scalar form(const Vector& x, const Vector& y, const Signature& sig);

/// diag(1,...,1, i,...,i) with p ones. H^T = H and H^2 = E_p, so
/// [x, y] = (Hx, Hy). Complex field only.
Matrix h_matrix(const Signature& sig, Field field);

/// Cofactor expansion for n <= 4, partial-pivot LU above.
Scalar determinant(const Matrix& m);

/// Max-norm of g^T E_p g - E_p, plus |det g - 1| for special families.
double membership_defect(const Matrix& g, const GroupTag& group);

/// Entrywise max |a_ij|.
double max_abs(const Matrix& m);
double max_abs(const Vector& v);

}  // namespace pscurve

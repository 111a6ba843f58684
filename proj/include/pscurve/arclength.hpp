#pragma once

// Pseudo-arc-length: l_x(c, d) = integral of |[x', x']|^(1/2), the path types
// L1..L4, the invariant interval I(x), the parameter p_x and its inverse q_x,
// jets of the invariant parametrization z = x o q_x, and curve equivalence.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pscurve/equivalence.hpp"
#include "pscurve/path.hpp"

namespace pscurve {

enum class PathType { L1, L2, L3, L4 };

std::string_view to_string(PathType t);

/// |[x'(t), x'(t)]|^(1/2); for complex paths the modulus of the form value.
double speed(const PathDef& path, double t);

/// Speed from a jet of order >= 1.
double speed(const Jet& jet, const Signature& sig);

struct NondegeneracyReport {
    bool pass = true;
    std::vector<double> failing;       // grid points with |[x', x']| <= floor
    std::vector<double> sign_changes;  // roots of [x', x'] located between grid points (real paths)
    double min_abs = 0.0;              // extrema of |[x', x']| over the grid
    double max_abs = 0.0;
    std::vector<std::string> notes;
};

/// Non-degeneracy on a grid: |[x', x']| > floor at every point and, for real
/// paths, no sign change of [x', x'] between neighbouring points.
NondegeneracyReport is_nondegenerate(const PathDef& path, const std::vector<double>& grid, double floor = 1e-12);

/// l_x(c, d) by adaptive Gauss-Kronrod (15 points) to absolute tolerance tol.
/// Requires a < c <= d < b. Throws QuadratureError on non-convergence.
double arc_integral(const PathDef& path, double c, double d, double tol = 1e-10);

struct TailDiagnostics {
    bool finite = false;
    double value = 0.0;          // tail integral from the endpoint to the anchor (inf if divergent)
    int steps = 0;               // tail pieces integrated
    double last_increment = 0.0;
    std::string reason;          // "cauchy", "ceiling", "growth", "overflow"
};

/// Type and invariant interval I(x) = (A, B).
struct TypedInterval {
    PathType ptype = PathType::L1;
    double a_inv = 0.0;   // A(x)
    double b_inv = 0.0;   // B(x)
    double a_I = 0.0;     // base point for L4 (also the anchor of every tail measurement)
    double anchor = 0.0;  // interior point where the two tails meet
    TailDiagnostics left;
    TailDiagnostics right;

    /// p_x(t) = offset + l_x(anchor, t) (signed).
    double offset() const;
};

struct ArcOptions {
    double qtol = 1e-10;                  // absolute quadrature tolerance
    double divergence_ceiling = 1e6;      // running tail sum above this means divergent
    int max_steps = 60;                   // tail pieces before giving up
    std::optional<double> a_I;            // override the L4 base point
};

/// Classify by the finiteness of the two tail integrals. Tails are probed by
/// integrating over geometrically shrinking (finite end) or growing
/// (infinite end) pieces: finite once a piece falls below qtol, infinite when
/// the running sum passes the ceiling or three successive pieces do not
/// shrink. Anything else throws IndeterminateTailError.
TypedInterval classify_type(const PathDef& path, const ArcOptions& opts = {});

/// Default base point: the midpoint of the interval after atan
/// compactification (0 on the whole line).
double default_base_point(const Interval& iv);

/// p_x(t): l(a, t) for L1/L2, -l(t, b) for L3, l(a_I, t) for L4.
double arc_param(const PathDef& path, const TypedInterval& typed, double t, double tol = 1e-12);

/// q_x(s): the t with |p_x(t) - s| <= tol * max(1, |s|), by bracketing and
/// safeguarded Newton. Throws DomainError when s is outside I(x) and
/// BracketError if no bracket is found.
double invert_param(const PathDef& path, const TypedInterval& typed, double s, double tol = 1e-12);

/// q_x at many parameters; s must be sorted ascending. Walks the curve once.
std::vector<double> invert_params(const PathDef& path, const TypedInterval& typed, const std::vector<double>& s,
                                  double tol = 1e-12);

/// Jet of z(s) = x(q_x(s)) up to `order`, by Taylor-series composition with
/// the inverse of p_x around q_x(s).
Jet reparam_jet(const PathDef& path, const TypedInterval& typed, double s, int order, double tol = 1e-12);

/// Same, with q_x(s) already known.
Jet reparam_jet_at(const PathDef& path, double s, double t, int order);

/// The invariant parametrization of a path, evaluated lazily.
class ReparamPath {
public:
    ReparamPath(PathDef source, const ArcOptions& opts = {});
    ReparamPath(PathDef source, TypedInterval typed);

    const PathDef& source() const { return source_; }
    const TypedInterval& typed() const { return typed_; }
    Interval interval() const { return Interval{typed_.a_inv, typed_.b_inv}; }

    Jet jet(double s, int order) const;
    std::vector<Jet> jets(const std::vector<double>& sorted_s, int order) const;

private:
    PathDef source_;
    TypedInterval typed_;
};

/// A strictly increasing reparametrization phi: J -> I.
struct MonotoneReparam {
    Expr phi;
    Interval domain;  // J
};

/// phi(r) = r on I itself.
MonotoneReparam identity_reparam(const Interval& target);

/// A random smooth increasing map onto `target`: affine plus a bounded sine
/// for finite or whole-line targets, exp-based for half-lines. Deterministic
/// per seed; phi' > 0 is checked on 1000 points.
MonotoneReparam random_reparam(const Interval& target, std::uint64_t seed);

/// x o phi on phi's domain.
PathDef compose(const PathDef& path, const MonotoneReparam& phi);

struct CurveOptions {
    double tol = 1e-8;        // relative tolerance of the identities and the witness
    ArcOptions arc;           // quadrature and tail settings
    int grid = 33;            // comparison points in I(x)
    int scan = 256;           // coarse s0 samples (L4)
    double nondegeneracy_floor = 1e-12;
};

struct CurveVerdict : EquivalenceVerdict {
    PathType type_x = PathType::L1;
    PathType type_y = PathType::L1;
    TypedInterval typed_x;
    TypedInterval typed_y;
    double s0 = 0.0;  // y1(s + s0) = h x1(s); zero unless L4
};

/// Equivalence of the oriented curves generated by x and y: classify both,
/// compare types and I(x), then compare generator signatures of the
/// invariant parametrizations (searching the shift s0 for L4) and rebuild the
/// witness from them.
CurveVerdict curves_equivalent(const PathDef& x, const PathDef& y, const GroupTag& group,
                               const CurveOptions& opts = {});

}  // namespace pscurve

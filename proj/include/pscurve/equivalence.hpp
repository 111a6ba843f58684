#pragma once

// Path-level G-equivalence: the invariant identities on a grid, plus explicit
// recovery and validation of the witness (g, u).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pscurve/forms.hpp"
#include "pscurve/path.hpp"

namespace pscurve {

/// (u, g) acting as x -> g x + u. u is present iff the family has
/// translations.
struct GroupElement {
    Matrix g;
    std::optional<Vector> u;

    Vector act(const Vector& x) const { return u ? Vector(g * x + *u) : Vector(g * x); }
};

/// h1 * h2 = (u1 + g1 u2, g1 g2).
GroupElement compose(const GroupElement& h1, const GroupElement& h2);
GroupElement inverse(const GroupElement& h);

struct Failure {
    double t;
    std::string identity;
    double defect;
};

struct EquivalenceVerdict {
    bool equivalent = false;
    std::optional<GroupElement> witness;
    /// Largest normalized residual over every identity and grid point.
    double max_defect = 0.0;
    std::vector<Failure> failures;

    /// The two halves of the decision, reported separately.
    bool identities_hold = false;
    bool witness_valid = false;
    double identity_defect = 0.0;
    double witness_defect = 0.0;
};

/// Default comparison grid: Chebyshev placement, 33 points.
std::vector<double> default_grid(const Interval& iv, int count = 33);

/// g = M(y)(t0) M(x)(t0)^-1. Throws StrongRegularityError if M(x)(t0) is
/// singular.
Matrix recover_linear(const PathDef& x, const PathDef& y, double t0);

struct Translation {
    Vector u;
    double spread = 0.0;  // max deviation of y(t) - g x(t) from its mean
};

Translation recover_translation(const PathDef& x, const PathDef& y, const Matrix& g, const std::vector<double>& grid);

/// Decide G-equivalence of two paths on a common interval.
///
/// O/SO families check Frenet equality M(x)^-1 M'(x) = M(y)^-1 M'(y), Gram
/// equality (M^T M or M^T E_p M) and, for SO, det M(x) = det M(y). EO/ESO run
/// the same checks on x', y'. In addition the witness is rebuilt at the grid
/// point where |det M| is largest and y = g x (+ u) is checked on the whole
/// grid. Residuals are divided by 1 + the largest participating magnitude;
/// the verdict needs both halves within tol.
///
/// Throws DomainError on interval or field mismatch and StrongRegularityError
/// (naming the path and t) when a working path is singular on the grid.
EquivalenceVerdict paths_equivalent(const PathDef& x, const PathDef& y, const GroupTag& group,
                                    const std::vector<double>& grid, double tol = 1e-8);

/// Pseudo-random group element, deterministic per seed: exp(E_p S) with S
/// skew (identity component of SO(n,p,K)), times diag(1,..,1,-1) for the O
/// families, plus u uniform in [-scale, scale]^n for EO/ESO.
GroupElement sample_group_element(const GroupTag& group, std::uint64_t seed, double scale = 1.0);

/// y_i = sum_j g_ij x_j + u_i as expressions; interval unchanged.
PathDef apply(const GroupElement& h, const PathDef& path);

}  // namespace pscurve

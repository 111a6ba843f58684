#pragma once

// Random admissible test paths with a known type.
//
// x(t) = C f(t), f_k(t) = sign(l_k) exp(l_k t) with distinct nonzero rates l_k.
// M(x) = C diag(f) V(l) with V Vandermonde, so x and x' are strongly regular
// everywhere as long as C is invertible. The last row of C is K (1, ..., 1)
// and the others are small, so every entry of C^T E_p C has the sign of the
// last coordinate's form weight; since every f_k' is positive, [x', x'] never
// vanishes. Over C the small rows get imaginary parts, which only perturb
// [x', x'] away from that dominant real value.
//
// Types come from the rates and the interval: all rates positive on a line
// or (a, inf) gives L2, all negative on a line or (-inf, b) gives L3, mixed
// rates on the line give L4, and a finite interval gives L1.

#include <cstdint>
#include <vector>

#include "pscurve/arclength.hpp"

namespace pscurve::testing {

struct RandomPath {
    PathDef path;
    PathType expected;
    std::vector<double> rates;
    int redraws = 0;  // candidates rejected by the regularity filter
};

/// Deterministic per seed. Candidates whose frames (of x and x') fail the
/// library's strong-regularity tolerance on the default grid are redrawn.
RandomPath random_path(const Signature& sig, Field field, PathType type, std::uint64_t seed);

/// Frames of the invariant parametrization (or of its derivative) pass the
/// strong-regularity tolerance on the curve comparison grid.
bool invariant_frames_regular(const PathDef& path, const TypedInterval& typed, bool affine, int count = 33);

/// Uniform points in the compactified coordinate of iv, strictly inside.
std::vector<double> random_points(const Interval& iv, int count, std::uint64_t seed, double margin = 0.05);

/// y with component `k` replaced by x_k + eps * t.
PathDef perturb(const PathDef& y, int k, double eps);

}  // namespace pscurve::testing

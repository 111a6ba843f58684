#pragma once

// Decision core shared by path- and curve-level equivalence.

#include <vector>

#include "pscurve/equivalence.hpp"

namespace pscurve::detail {

/// One comparison point. x and y are jets of the working paths (the paths
/// themselves, or their derivatives for EO/ESO) of order >= n. x_point and
/// y_point are the original positions, used only for the translation.
struct Sample {
    double t = 0.0;
    Jet x;
    Jet y;
    Vector x_point;
    Vector y_point;
};

enum class Criterion {
    /// Frenet matrix, full Gram matrix, det (special families).
    FrameIdentities,
    /// Generator signature entries (diagonal Gram, det).
    GeneratorSignature,
};

EquivalenceVerdict decide(const std::vector<Sample>& samples, const GroupTag& group, Criterion criterion, double tol);

}  // namespace pscurve::detail

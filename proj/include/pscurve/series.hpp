#pragma once

// Truncated Taylor series c_0 + c_1 h + ... + c_r h^r with c_k = f^(k)(t0)/k!.
// Used to push jets through the square root, the inverse-function relation and
// composition without numeric differentiation.

#include <vector>

#include "pscurve/forms.hpp"

namespace pscurve {

class Series {
public:
    Series() = default;
    explicit Series(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) {}

    /// Coefficients from derivative values d_k = f^(k)(t0).
    static Series from_derivatives(const std::vector<Scalar>& d);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Scalar>& coeffs() const { return c_; }
    Scalar operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
    Scalar& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }

    /// f^(k)(t0) = k! c_k.
    Scalar derivative(int k) const;

    friend Series operator*(const Series& a, const Series& b);
    friend Series operator+(const Series& a, const Series& b);

    /// Coefficient-wise conjugate: the series of conj(f) for real h.
    Series conj() const;

    /// f^alpha for f(t0) != 0, principal branch.
    Series pow(double alpha) const;

    /// Compositional inverse g with f(g(h)) = h. Requires c_0 = 0, c_1 != 0.
    Series revert() const;

private:
    std::vector<Scalar> c_;
};

/// z(h) = sum_j outer_j * inner(h)^j for vector-valued outer coefficients and
/// an inner series with zero constant term; truncated at inner.order().
std::vector<Vector> compose(const std::vector<Vector>& outer, const Series& inner);

}  // namespace pscurve

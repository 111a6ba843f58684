#include "pscurve/series.hpp"

#include <algorithm>

#include "pscurve/error.hpp"

namespace pscurve {

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int j = 2; j <= k; ++j) {
        f *= j;
    }
    return f;
}

}  // namespace

Series Series::from_derivatives(const std::vector<Scalar>& d) {
    std::vector<Scalar> c(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
        c[k] = d[k] / factorial(static_cast<int>(k));
    }
    return Series(std::move(c));
}

Scalar Series::derivative(int k) const { return (*this)[k] * factorial(k); }

Series operator*(const Series& a, const Series& b) {
    const int r = std::min(a.order(), b.order());
    std::vector<Scalar> c(static_cast<std::size_t>(r + 1), Scalar(0.0));
    for (int k = 0; k <= r; ++k) {
        for (int j = 0; j <= k; ++j) {
            c[static_cast<std::size_t>(k)] += a[j] * b[k - j];
        }
    }
    return Series(std::move(c));
}

Series operator+(const Series& a, const Series& b) {
    const int r = std::min(a.order(), b.order());
    std::vector<Scalar> c(static_cast<std::size_t>(r + 1));
    for (int k = 0; k <= r; ++k) {
        c[static_cast<std::size_t>(k)] = a[k] + b[k];
    }
    return Series(std::move(c));
}

Series Series::conj() const {
    std::vector<Scalar> c(c_.size());
    std::transform(c_.begin(), c_.end(), c.begin(), [](Scalar z) { return std::conj(z); });
    return Series(std::move(c));
}

Series Series::pow(double alpha) const {
    if (c_.empty() || c_[0] == Scalar(0.0)) {
        throw DomainError("series power needs a nonzero constant term");
    }
    // g = f^alpha satisfies f g' = alpha f' g, giving
    // g_k = 1/(k f_0) * sum_{j=1..k} (alpha j - (k - j)) f_j g_{k-j}.
    const int r = order();
    std::vector<Scalar> g(static_cast<std::size_t>(r + 1));
    g[0] = std::pow(c_[0], alpha);
    for (int k = 1; k <= r; ++k) {
        Scalar acc = 0.0;
        for (int j = 1; j <= k; ++j) {
            acc += (alpha * j - (k - j)) * c_[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(k - j)];
        }
        g[static_cast<std::size_t>(k)] = acc / (static_cast<double>(k) * c_[0]);
    }
    return Series(std::move(g));
}

Series Series::revert() const {
    if (order() < 1 || c_[0] != Scalar(0.0) || c_[1] == Scalar(0.0)) {
        throw DomainError("series reversion needs c0 = 0 and c1 != 0");
    }
    const int r = order();
    // Order-by-order: with g known through h^(m-1), the h^m coefficient of
    // f(g(h)) is c_1 g_m + (terms in g_1..g_{m-1}); it must vanish for m >= 2.
    std::vector<Scalar> g(static_cast<std::size_t>(r + 1), Scalar(0.0));
    g[1] = 1.0 / c_[1];
    for (int m = 2; m <= r; ++m) {
        Series partial(std::vector<Scalar>(g.begin(), g.begin() + m + 1));
        // powers of partial, truncated at m
        Series power = partial;
        Scalar coeff = 0.0;
        for (int j = 2; j <= m; ++j) {
            power = power * partial;
            coeff += c_[static_cast<std::size_t>(j)] * power[m];
        }
        g[static_cast<std::size_t>(m)] = -coeff / c_[1];
    }
    return Series(std::move(g));
}

std::vector<Vector> compose(const std::vector<Vector>& outer, const Series& inner) {
    if (inner.order() < 0 || inner[0] != Scalar(0.0)) {
        throw DomainError("composition needs an inner series with zero constant term");
    }
    const int r = inner.order();
    if (static_cast<int>(outer.size()) < r + 1) {
        throw DimensionError("outer series shorter than the requested order");
    }
    const Eigen::Index n = outer.front().size();
    std::vector<Vector> z(static_cast<std::size_t>(r + 1), Vector::Zero(n));
    z[0] = outer[0];
    std::vector<Scalar> one(static_cast<std::size_t>(r + 1), Scalar(0.0));
    one[0] = 1.0;
    Series power(std::move(one));
    for (int j = 1; j <= r; ++j) {
        power = power * inner;
        for (int k = j; k <= r; ++k) {
            z[static_cast<std::size_t>(k)] += power[k] * outer[static_cast<std::size_t>(j)];
        }
    }
    return z;
}

}  // namespace pscurve

#pragma once

// Paths: n coordinate expressions over an open interval, with cached symbolic
// derivatives and jet evaluation.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pscurve/expr.hpp"
#include "pscurve/forms.hpp"

namespace pscurve {

/// Open interval (a, b); either end may be infinite.
struct Interval {
    double a;
    double b;

    /// Throws DomainError unless a < b (NaN rejected).
    static Interval make(double a, double b);

    bool contains(double t) const { return a < t && t < b; }
    bool finite() const;

    friend bool operator==(const Interval&, const Interval&) = default;
};

std::string to_string(const Interval& iv);

/// Value and derivatives x(t), x'(t), ..., x^(r)(t) at one parameter.
struct Jet {
    double t = 0.0;
    std::vector<Vector> rows;

    int order() const { return static_cast<int>(rows.size()) - 1; }
    int dim() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }

    /// The jet of x' at the same t: rows shifted down by one.
    Jet derivative() const;
};

/// An I-path. Copies share the derivative cache; evaluation is thread-safe.
class PathDef {
public:
    PathDef(Signature sig, Field field, std::vector<Expr> components, Interval interval, std::string label = {});

    const Signature& sig() const { return sig_; }
    Field field() const { return field_; }
    int dim() const { return sig_.n(); }
    const std::vector<Expr>& components() const { return components_; }
    const Interval& interval() const { return interval_; }
    const std::string& label() const { return label_; }

    /// d^order/dt^order of component k, computed once and cached.
    Expr derivative(int component, int order) const;

    /// x'(t) as a path on the same interval.
    PathDef derivative_path() const;

    PathDef with_label(std::string label) const;

private:
    struct Cache;

    Signature sig_;
    Field field_;
    std::vector<Expr> components_;
    Interval interval_;
    std::string label_;
    std::shared_ptr<Cache> cache_;
};

/// Parse the line-oriented path file format:
///
///     # comment
///     field: real            (optional, default real)
///     n: 2
///     p: 1                   (optional, default n = Euclidean)
///     interval: (-inf, inf)
///     label: hyperbola       (optional)
///     x1 = cosh(t)
///     x2 = sinh(t)
///
/// Errors are ParseError with the offending line and column.
PathDef parse_path(std::string_view text);

/// Render `path` in the format parse_path reads.
std::string print_path(const PathDef& path);

/// Jet of order r at t. Throws DomainError when t is not strictly inside
/// the interval or a component cannot be evaluated (message names it).
Jet eval_jet(const PathDef& path, double t, int order);

/// x(t) only.
Vector eval_point(const PathDef& path, double t);

/// N strictly increasing points strictly inside the interval, uniform in a
/// compactified coordinate: identity for finite intervals, tanh for
/// infinite ends. `margin` (fraction of the compact range) keeps the points
/// off the endpoints.
std::vector<double> sample_grid(const Interval& iv, int count, double margin);

/// Same mapping, Chebyshev (first-kind) placement in the compact coordinate.
std::vector<double> chebyshev_grid(const Interval& iv, int count, double margin);

}  // namespace pscurve

#include "pscurve/path.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>

#include "pscurve/error.hpp"

namespace pscurve {

Interval Interval::make(double a, double b) {
    if (!(a < b)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "interval needs a < b, got (%.17g, %.17g)", a, b);
        throw DomainError(buf);
    }
    return Interval{a, b};
}

bool Interval::finite() const { return std::isfinite(a) && std::isfinite(b); }

namespace {

std::string endpoint_text(double v) {
    if (std::isinf(v)) {
        return v < 0 ? "-inf" : "inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string to_string(const Interval& iv) {
    return "(" + endpoint_text(iv.a) + ", " + endpoint_text(iv.b) + ")";
}

Jet Jet::derivative() const {
    Jet d;
    d.t = t;
    d.rows.assign(rows.begin() + 1, rows.end());
    return d;
}

// ---------------------------------------------------------------------------

struct PathDef::Cache {
    std::mutex mutex;
    // derivatives[k][r] = r-th derivative of component k
    std::vector<std::vector<Expr>> derivatives;
};

PathDef::PathDef(Signature sig, Field field, std::vector<Expr> components, Interval interval, std::string label)
    : sig_(sig),
      field_(field),
      components_(std::move(components)),
      interval_(Interval::make(interval.a, interval.b)),
      label_(std::move(label)),
      cache_(std::make_shared<Cache>()) {
    if (static_cast<int>(components_.size()) != sig_.n()) {
        throw DimensionError("path has " + std::to_string(components_.size()) + " components but n=" +
                             std::to_string(sig_.n()));
    }
    cache_->derivatives.reserve(components_.size());
    for (const Expr& c : components_) {
        cache_->derivatives.push_back({c});
    }
}

Expr PathDef::derivative(int component, int order) const {
    if (component < 0 || component >= dim() || order < 0) {
        throw DimensionError("no derivative " + std::to_string(order) + " of component " +
                             std::to_string(component + 1));
    }
    std::lock_guard lock(cache_->mutex);
    auto& chain = cache_->derivatives[static_cast<std::size_t>(component)];
    while (static_cast<int>(chain.size()) <= order) {
        chain.push_back(differentiate(chain.back()));
    }
    return chain[static_cast<std::size_t>(order)];
}

PathDef PathDef::derivative_path() const {
    std::vector<Expr> d;
    d.reserve(components_.size());
    for (int k = 0; k < dim(); ++k) {
        d.push_back(derivative(k, 1));
    }
    return PathDef(sig_, field_, std::move(d), interval_, label_.empty() ? label_ : label_ + "'");
}

PathDef PathDef::with_label(std::string label) const {
    PathDef copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

// ---------------------------------------------------------------------------
// Path files

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

struct Line {
    int number;
    std::string_view key;
    std::string_view value;
    int value_column;  // 1-based column where `value` starts
};

int parse_int(const Line& line) {
    int v = 0;
    const auto* first = line.value.data();
    const auto* last = first + line.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("expected an integer for '" + std::string(line.key) + "'", line.number,
                         line.value_column);
    }
    return v;
}

double parse_endpoint(std::string_view text, int line, int column) {
    const std::string_view s = trim(text);
    if (s == "inf" || s == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    Expr e;
    try {
        e = parse_expression(s, Field::Real, line);
    } catch (const ParseError& err) {
        throw ParseError("malformed interval endpoint '" + std::string(s) + "'", line, column);
    }
    if (!e.is_closed()) {
        throw ParseError("interval endpoint must be a constant", line, column);
    }
    return e.eval_real(0.0);
}

Interval parse_interval(const Line& line) {
    const std::string_view v = line.value;
    if (v.size() < 2 || v.front() != '(' || v.back() != ')') {
        throw ParseError("interval must look like (a, b)", line.number, line.value_column);
    }
    const std::string_view inner = v.substr(1, v.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos || inner.find(',', comma + 1) != std::string_view::npos) {
        throw ParseError("interval must have exactly two endpoints", line.number, line.value_column);
    }
    const double a = parse_endpoint(inner.substr(0, comma), line.number, line.value_column + 1);
    const double b =
        parse_endpoint(inner.substr(comma + 1), line.number, line.value_column + 2 + static_cast<int>(comma));
    if (!(a < b)) {
        throw ParseError("interval needs a < b", line.number, line.value_column);
    }
    return Interval{a, b};
}

}  // namespace

PathDef parse_path(std::string_view text) {
    std::vector<Line> headers;
    std::vector<Line> comps;

    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++number;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        if (trim(raw).empty()) {
            continue;
        }
        const auto sep = raw.find_first_of(":=");
        if (sep == std::string_view::npos) {
            const auto first = raw.find_first_not_of(" \t\r");
            throw ParseError("expected 'key: value' or 'x<k> = <expression>'", number,
                             static_cast<int>(first) + 1);
        }
        Line line;
        line.number = number;
        line.key = trim(raw.substr(0, sep));
        const std::string_view rest = raw.substr(sep + 1);
        const auto lead = rest.find_first_not_of(" \t\r");
        line.value = trim(rest);
        line.value_column = static_cast<int>(sep + 2 + (lead == std::string_view::npos ? 0 : lead));
        if (!line.key.empty() && line.key.front() == 'x' && line.key.size() > 1 &&
            line.key.find_first_not_of("0123456789", 1) == std::string_view::npos) {
            comps.push_back(line);
        } else {
            headers.push_back(line);
        }
    }

    Field field = Field::Real;
    std::optional<int> n;
    std::optional<int> p;
    std::optional<Interval> interval;
    std::string label;
    int n_line = 0;
    int p_line = 0;

    for (const Line& h : headers) {
        if (h.key == "field") {
            try {
                field = parse_field(h.value);
            } catch (const SignatureError& e) {
                throw ParseError(e.what(), h.number, h.value_column);
            }
        } else if (h.key == "n") {
            n = parse_int(h);
            n_line = h.number;
        } else if (h.key == "p") {
            p = parse_int(h);
            p_line = h.number;
        } else if (h.key == "interval") {
            interval = parse_interval(h);
        } else if (h.key == "label") {
            label = std::string(h.value);
        } else {
            throw ParseError("unknown header '" + std::string(h.key) + "'", h.number, 1);
        }
    }
    if (!n) {
        throw ParseError("missing header 'n'", 0, 0);
    }
    if (!interval) {
        throw ParseError("missing header 'interval'", 0, 0);
    }
    std::optional<Signature> sig;
    try {
        sig.emplace(*n, p.value_or(*n));
    } catch (const SignatureError& e) {
        throw ParseError(e.what(), p ? p_line : n_line, 1);
    }

    std::vector<std::optional<Expr>> exprs(static_cast<std::size_t>(*n));
    for (const Line& c : comps) {
        int k = 0;
        std::from_chars(c.key.data() + 1, c.key.data() + c.key.size(), k);
        if (k < 1 || k > *n) {
            throw ParseError("component " + std::string(c.key) + " exceeds n=" + std::to_string(*n), c.number, 1);
        }
        auto& slot = exprs[static_cast<std::size_t>(k - 1)];
        if (slot) {
            throw ParseError("duplicate component " + std::string(c.key), c.number, 1);
        }
        try {
            slot = parse_expression(c.value, field, c.number);
        } catch (const ParseError& e) {
            // Re-anchor the column from the expression to the line.
            throw ParseError(e.message(), c.number,
                             c.value_column + e.column() - 1);
        }
    }
    std::vector<Expr> components;
    for (std::size_t k = 0; k < exprs.size(); ++k) {
        if (!exprs[k]) {
            throw ParseError("missing component x" + std::to_string(k + 1), 0, 0);
        }
        components.push_back(*exprs[k]);
    }
    return PathDef(*sig, field, std::move(components), *interval, std::move(label));
}

std::string print_path(const PathDef& path) {
    std::string out;
    out += "field: " + std::string(to_string(path.field())) + "\n";
    out += "n: " + std::to_string(path.sig().n()) + "\n";
    out += "p: " + std::to_string(path.sig().p()) + "\n";
    out += "interval: " + to_string(path.interval()) + "\n";
    if (!path.label().empty()) {
        out += "label: " + path.label() + "\n";
    }
    for (int k = 0; k < path.dim(); ++k) {
        out += "x" + std::to_string(k + 1) + " = " + path.components()[static_cast<std::size_t>(k)].to_string() + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Scalar eval_component(const PathDef& path, const Expr& e, int k, double t) {
    try {
        if (path.field() == Field::Real) {
            return Scalar(e.eval_real(t), 0.0);
        }
        return e.eval_complex(t);
    } catch (const OverflowError& err) {
        throw OverflowError("component x" + std::to_string(k + 1) + ": " + err.what());
    } catch (const DomainError& err) {
        throw DomainError("component x" + std::to_string(k + 1) + ": " + err.what());
    }
}

void require_inside(const PathDef& path, double t) {
    if (!path.interval().contains(t)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", t);
        throw DomainError(std::string("t=") + buf + " is outside the path interval " + to_string(path.interval()));
    }
}

}  // namespace

Jet eval_jet(const PathDef& path, double t, int order) {
    if (order < 0) {
        throw DimensionError("jet order must be non-negative");
    }
    require_inside(path, t);
    Jet jet;
    jet.t = t;
    jet.rows.reserve(static_cast<std::size_t>(order) + 1);
    for (int r = 0; r <= order; ++r) {
        Vector row(path.dim());
        for (int k = 0; k < path.dim(); ++k) {
            row(k) = eval_component(path, path.derivative(k, r), k, t);
        }
        jet.rows.push_back(std::move(row));
    }
    return jet;
}

Vector eval_point(const PathDef& path, double t) {
    return eval_jet(path, t, 0).rows.front();
}

// ---------------------------------------------------------------------------
// Grids

namespace {

double from_compact(const Interval& iv, double u) {
    const bool lo_inf = std::isinf(iv.a);
    const bool hi_inf = std::isinf(iv.b);
    if (!lo_inf && !hi_inf) {
        return iv.a + (iv.b - iv.a) * u;
    }
    if (lo_inf && hi_inf) {
        return std::atanh(2.0 * u - 1.0);
    }
    if (hi_inf) {
        return iv.a + std::atanh(u);
    }
    return iv.b - std::atanh(1.0 - u);
}

std::vector<double> map_grid(const Interval& iv, int count, double margin, bool chebyshev) {
    if (count < 2) {
        throw DimensionError("grid needs at least 2 points");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    const bool inset = margin > 0.0 && margin < 0.5;
    for (int k = 0; k < count; ++k) {
        double frac;
        if (chebyshev) {
            frac = 0.5 * (1.0 - std::cos(std::numbers::pi * (k + 0.5) / count));
        } else {
            frac = inset ? static_cast<double>(k) / (count - 1) : static_cast<double>(k + 1) / (count + 1);
        }
        const double u = inset ? margin + (1.0 - 2.0 * margin) * frac : frac;
        grid.push_back(from_compact(iv, u));
    }
    return grid;
}

}  // namespace

std::vector<double> sample_grid(const Interval& iv, int count, double margin) {
    return map_grid(iv, count, margin, false);
}

std::vector<double> chebyshev_grid(const Interval& iv, int count, double margin) {
    return map_grid(iv, count, margin, true);
}

}  // namespace pscurve

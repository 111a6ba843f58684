#include "pscurve/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "pscurve/detail/decide.hpp"
#include "pscurve/error.hpp"
#include "pscurve/invariants.hpp"

namespace pscurve {

GroupElement compose(const GroupElement& h1, const GroupElement& h2) {
    GroupElement h;
    h.g = h1.g * h2.g;
    if (h1.u || h2.u) {
        const Eigen::Index n = h1.g.rows();
        const Vector u1 = h1.u.value_or(Vector::Zero(n));
        const Vector u2 = h2.u.value_or(Vector::Zero(n));
        h.u = u1 + h1.g * u2;
    }
    return h;
}

GroupElement inverse(const GroupElement& h) {
    GroupElement inv;
    inv.g = h.g.inverse();
    if (h.u) {
        inv.u = -(inv.g * *h.u);
    }
    return inv;
}

std::vector<double> default_grid(const Interval& iv, int count) {
    return chebyshev_grid(iv, count, 0.02);
}

Matrix recover_linear(const PathDef& x, const PathDef& y, double t0) {
    const int n = x.dim();
    if (y.dim() != n) {
        throw DimensionError("paths have different dimensions");
    }
    const Matrix mx = frame_matrix(eval_jet(x, t0, n - 1));
    const Matrix my = frame_matrix(eval_jet(y, t0, n - 1));
    const double abs_det = std::abs(determinant(mx));
    if (!(abs_det > singular_tolerance(mx))) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "M(x) is singular at t0=%.17g (|det|=%.3g)", t0, abs_det);
        throw StrongRegularityError(buf, t0, abs_det);
    }
    // g = my * mx^-1, i.e. solve g mx = my.
    return mx.transpose().partialPivLu().solve(my.transpose()).transpose();
}

Translation recover_translation(const PathDef& x, const PathDef& y, const Matrix& g, const std::vector<double>& grid) {
    const int n = x.dim();
    Translation tr;
    tr.u = Vector::Zero(n);
    if (grid.empty()) {
        return tr;
    }
    std::vector<Vector> diffs;
    diffs.reserve(grid.size());
    for (double t : grid) {
        diffs.push_back(eval_point(y, t) - g * eval_point(x, t));
        tr.u += diffs.back();
    }
    tr.u /= static_cast<double>(grid.size());
    for (const Vector& d : diffs) {
        tr.spread = std::max(tr.spread, max_abs(Vector(d - tr.u)));
    }
    return tr;
}

// ---------------------------------------------------------------------------
// Shared decision core

namespace detail {

namespace {

double rel(double diff, double scale) { return diff / (1.0 + scale); }

double rel_diff(const Matrix& a, const Matrix& b) {
    return rel(max_abs(Matrix(a - b)), std::max(max_abs(a), max_abs(b)));
}

double rel_diff(Scalar a, Scalar b) {
    return rel(std::abs(a - b), std::max(std::abs(a), std::abs(b)));
}

}  // namespace

EquivalenceVerdict decide(const std::vector<Sample>& samples, const GroupTag& group, Criterion criterion, double tol) {
    EquivalenceVerdict v;
    if (samples.empty()) {
        throw DimensionError("equivalence test needs at least one grid point");
    }
    const Signature& sig = group.sig;
    const int n = sig.n();
    const bool special = is_special(group.family);
    const bool affine = has_translation(group.family);
    const FormKind fk = natural_form(sig);

    auto record = [&](double t, const std::string& name, double defect, double& bucket) {
        bucket = std::max(bucket, defect);
        if (!(defect <= tol)) {
            v.failures.push_back({t, name, defect});
        }
    };

    // Invariant identities.
    for (const Sample& s : samples) {
        if (criterion == Criterion::FrameIdentities) {
            record(s.t, "frenet", rel_diff(frenet_matrix(s.x), frenet_matrix(s.y)), v.identity_defect);
            record(s.t, "gram", rel_diff(gram(s.x, sig, fk), gram(s.y, sig, fk)), v.identity_defect);
            if (special) {
                record(s.t, "det", rel_diff(det_m(s.x), det_m(s.y)), v.identity_defect);
            }
        } else {
            const auto sx = signature_values(s.x, group);
            const auto sy = signature_values(s.y, group);
            const auto labels = signature_labels(group);
            for (std::size_t k = 0; k < sx.size(); ++k) {
                record(s.t, "signature:" + labels[k], rel_diff(sx[k], sy[k]), v.identity_defect);
            }
        }
    }
    v.identities_hold = v.identity_defect <= tol;

    // Witness at the best-conditioned grid point.
    std::size_t best = 0;
    double best_det = -1.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double d = std::abs(det_m(samples[i].x));
        if (d > best_det) {
            best_det = d;
            best = i;
        }
    }
    const Sample& s0 = samples[best];
    const Matrix mx = frame_matrix(s0.x);
    const Matrix my = frame_matrix(s0.y);
    if (!(best_det > singular_tolerance(mx))) {
        throw StrongRegularityError("no grid point with a nonsingular frame", s0.t, best_det);
    }
    GroupElement w;
    w.g = mx.transpose().partialPivLu().solve(my.transpose()).transpose();

    record(s0.t, "membership", membership_defect(w.g, group), v.witness_defect);
    for (const Sample& s : samples) {
        const Matrix fx = frame_matrix(s.x);
        const Matrix fy = frame_matrix(s.y);
        record(s.t, "witness", rel_diff(Matrix(w.g * fx), fy), v.witness_defect);
    }
    if (affine) {
        Vector u = Vector::Zero(n);
        for (const Sample& s : samples) {
            u += s.y_point - w.g * s.x_point;
        }
        u /= static_cast<double>(samples.size());
        for (const Sample& s : samples) {
            const Vector gx = w.g * s.x_point + u;
            const double scale = std::max(max_abs(gx), max_abs(s.y_point));
            record(s.t, "translation", rel(max_abs(Vector(s.y_point - gx)), scale), v.witness_defect);
        }
        w.u = u;
    }
    v.witness_valid = v.witness_defect <= tol;
    v.max_defect = std::max(v.identity_defect, v.witness_defect);
    v.equivalent = v.identities_hold && v.witness_valid;
    v.witness = std::move(w);
    return v;
}

}  // namespace detail

namespace {

void require_regular(const Jet& jet, const std::string& who) {
    const Matrix m = frame_matrix(jet);
    const double d = std::abs(determinant(m));
    if (!(d > singular_tolerance(m))) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "path %s is not strongly regular at t=%.17g (|det M|=%.3g)", who.c_str(),
                      jet.t, d);
        throw StrongRegularityError(buf, jet.t, d);
    }
}

std::string name_of(const PathDef& p, const char* fallback, bool derivative) {
    std::string base = p.label().empty() ? fallback : p.label();
    return derivative ? base + "'" : base;
}

}  // namespace

EquivalenceVerdict paths_equivalent(const PathDef& x, const PathDef& y, const GroupTag& group,
                                    const std::vector<double>& grid, double tol) {
    if (x.sig() != group.sig || y.sig() != group.sig) {
        throw SignatureError("path signatures do not match the group " + group.name());
    }
    if (x.field() != y.field()) {
        throw DomainError("paths are over different fields");
    }
    if (!(x.interval() == y.interval())) {
        throw DomainError("paths live on different intervals " + to_string(x.interval()) + " and " +
                          to_string(y.interval()));
    }
    const int n = group.sig.n();
    const bool affine = has_translation(group.family);
    const PathDef xw = affine ? x.derivative_path() : x;
    const PathDef yw = affine ? y.derivative_path() : y;
    const std::string xname = name_of(x, "x", affine);
    const std::string yname = name_of(y, "y", affine);

    std::vector<detail::Sample> samples;
    samples.reserve(grid.size());
    for (double t : grid) {
        detail::Sample s;
        s.t = t;
        s.x = eval_jet(xw, t, n);
        s.y = eval_jet(yw, t, n);
        require_regular(s.x, xname);
        require_regular(s.y, yname);
        if (affine) {
            s.x_point = eval_point(x, t);
            s.y_point = eval_point(y, t);
        }
        samples.push_back(std::move(s));
    }
    return detail::decide(samples, group, detail::Criterion::FrameIdentities, tol);
}

// ---------------------------------------------------------------------------
// Sampling and action

GroupElement sample_group_element(const GroupTag& group, std::uint64_t seed, double scale) {
    const Signature& sig = group.sig;
    const int n = sig.n();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto draw = [&]() -> Scalar {
        if (group.field == Field::Real) {
            return {0.75 * unit(rng), 0.0};
        }
        const double re = 0.5 * unit(rng);
        const double im = 0.5 * unit(rng);
        return {re, im};
    };

    Matrix skew = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Scalar s = draw();
            skew(i, j) = s;
            skew(j, i) = -s;
        }
    }
    const Matrix a = e_p_matrix(sig) * skew;
    GroupElement h;
    h.g = a.exp();
    if (!is_special(group.family)) {
        h.g.col(n - 1) *= -1.0;  // right-multiply by diag(1,...,1,-1)
    }
    if (has_translation(group.family)) {
        Vector u(n);
        for (int i = 0; i < n; ++i) {
            const double re = scale * unit(rng);
            const double im = group.field == Field::Complex ? scale * unit(rng) : 0.0;
            u(i) = Scalar(re, im);
        }
        h.u = u;
    }
    return h;
}

PathDef apply(const GroupElement& h, const PathDef& path) {
    const int n = path.dim();
    if (h.g.rows() != n || h.g.cols() != n || (h.u && h.u->size() != n)) {
        throw DimensionError("group element does not match the path dimension");
    }
    if (path.field() == Field::Real) {
        const bool complex_g = (h.g.imag().array() != 0.0).any();
        const bool complex_u = h.u && (h.u->imag().array() != 0.0).any();
        if (complex_g || complex_u) {
            throw SignatureError("complex group element applied to a real path");
        }
    }
    std::vector<Expr> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Expr acc;
        for (int j = 0; j < n; ++j) {
            acc = acc + Expr::constant(h.g(i, j)) * path.components()[static_cast<std::size_t>(j)];
        }
        if (h.u) {
            acc = acc + Expr::constant((*h.u)(i));
        }
        out.push_back(acc);
    }
    return PathDef(path.sig(), path.field(), std::move(out), path.interval(), path.label());
}

}  // namespace pscurve

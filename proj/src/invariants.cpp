#include "pscurve/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pscurve/error.hpp"

namespace pscurve {

namespace {

void require_order(const Jet& jet, int order, const char* what) {
    if (jet.order() < order) {
        throw DimensionError(std::string(what) + " needs a jet of order " + std::to_string(order) + ", got " +
                             std::to_string(jet.order()));
    }
}

Matrix columns(const Jet& jet, int first, int n) {
    Matrix m(n, n);
    for (int j = 0; j < n; ++j) {
        m.col(j) = jet.rows[static_cast<std::size_t>(first + j)];
    }
    return m;
}

}  // namespace

FrameMatrices frame_matrices(const Jet& jet) {
    const int n = jet.dim();
    require_order(jet, n, "frame_matrices");
    return FrameMatrices{columns(jet, 0, n), columns(jet, 1, n), jet.t};
}

Matrix frame_matrix(const Jet& jet) {
    const int n = jet.dim();
    require_order(jet, n - 1, "frame_matrix");
    return columns(jet, 0, n);
}

Scalar det_m(const Jet& jet) { return determinant(frame_matrix(jet)); }

Matrix gram(const Jet& jet, const Signature& sig, FormKind form) {
    const Matrix m = frame_matrix(jet);
    if (m.rows() != sig.n()) {
        throw DimensionError("jet dimension does not match the signature");
    }
    if (form == FormKind::Euclidean) {
        return m.transpose() * m;
    }
    sig.require_pseudo();
    return m.transpose() * e_p_matrix(sig) * m;
}

double singular_tolerance(const Matrix& m) {
    return 1e-9 * (1.0 + std::pow(max_abs(m), static_cast<double>(m.rows())));
}

Matrix frenet_matrix(const Jet& jet, std::optional<double> tol) {
    const FrameMatrices f = frame_matrices(jet);
    const double abs_det = std::abs(determinant(f.m));
    const double threshold = tol.value_or(singular_tolerance(f.m));
    if (!(abs_det > threshold)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "M(x) is singular at t=%.17g (|det|=%.3g)", jet.t, abs_det);
        throw StrongRegularityError(buf, jet.t, abs_det);
    }
    return f.m.partialPivLu().solve(f.m_shift);
}

std::vector<Scalar> signature_values(const Jet& jet, const GroupTag& group) {
    const Signature& sig = group.sig;
    const int n = sig.n();
    if (jet.dim() != n) {
        throw DimensionError("jet dimension does not match the group");
    }
    require_order(jet, n - 1, "generator signature");
    const bool special = is_special(group.family);
    const int gram_count = special ? n - 1 : n;

    std::vector<Scalar> values;
    values.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < gram_count; ++j) {
        const Vector& v = jet.rows[static_cast<std::size_t>(j)];
        values.push_back(form(v, v, sig));
    }
    if (special) {
        Scalar det = det_m(jet);
        if (group.field == Field::Complex && !sig.euclidean()) {
            // i^(n-p)
            static const Scalar kUnitPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            det *= kUnitPowers[(n - sig.p()) % 4];
        }
        values.push_back(det);
    }
    return values;
}

GeneratorSignature generator_signature(const PathDef& path, const GroupTag& group, double t) {
    if (path.sig() != group.sig) {
        throw SignatureError("path signature does not match the group");
    }
    const int n = group.sig.n();
    if (has_translation(group.family)) {
        const PathDef d = path.derivative_path();
        return {t, signature_values(eval_jet(d, t, n - 1), group)};
    }
    return {t, signature_values(eval_jet(path, t, n - 1), group)};
}

std::vector<std::string> signature_labels(const GroupTag& group) {
    const int n = group.sig.n();
    const bool special = is_special(group.family);
    std::vector<std::string> labels;
    for (int j = 1; j <= (special ? n - 1 : n); ++j) {
        labels.push_back("g" + std::to_string(j));
    }
    if (special) {
        labels.emplace_back("det");
    }
    return labels;
}

RegularityReport is_strongly_regular(const PathDef& path, const std::vector<double>& grid, std::optional<double> tol) {
    RegularityReport report;
    report.min_abs_det = std::numeric_limits<double>::infinity();
    report.max_abs_det = 0.0;
    const int n = path.dim();
    for (double t : grid) {
        try {
            const Matrix m = frame_matrix(eval_jet(path, t, n - 1));
            const double d = std::abs(determinant(m));
            report.min_abs_det = std::min(report.min_abs_det, d);
            report.max_abs_det = std::max(report.max_abs_det, d);
            if (!(d > tol.value_or(singular_tolerance(m)))) {
                report.pass = false;
                report.failing.push_back(t);
            }
        } catch (const Error& e) {
            report.pass = false;
            report.failing.push_back(t);
            report.notes.emplace_back(e.what());
        }
    }
    if (grid.empty() || report.min_abs_det == std::numeric_limits<double>::infinity()) {
        report.min_abs_det = 0.0;
    }
    return report;
}

}  // namespace pscurve

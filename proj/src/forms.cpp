#include "pscurve/forms.hpp"

#include "pscurve/error.hpp"

#include <limits>

namespace pscurve {

std::string_view to_string(Field field) {
    return field == Field::Real ? "real" : "complex";
}

Field parse_field(std::string_view text) {
    if (text == "real") {
        return Field::Real;
    }
    if (text == "complex") {
        return Field::Complex;
    }
    throw SignatureError("unknown field '" + std::string(text) + "' (expected real or complex)");
}

Signature::Signature(int n, int p) : n_(n), p_(p) {
    if (n < 2) {
        throw SignatureError("dimension n must be at least 2, got " + std::to_string(n));
    }
    if (p < 1 || p > n) {
        throw SignatureError("index p must satisfy 1 <= p <= n, got p=" + std::to_string(p) +
                             " for n=" + std::to_string(n));
    }
}

void Signature::require_pseudo() const {
    if (p_ < 1 || p_ > n_ - 1) {
        throw SignatureError("pseudo-Euclidean form needs 1 <= p <= n-1, got p=" + std::to_string(p_) +
                             " for n=" + std::to_string(n_));
    }
}

std::string_view to_string(Family family) {
    switch (family) {
        case Family::O: return "o";
        case Family::SO: return "so";
        case Family::EO: return "eo";
        case Family::ESO: return "eso";
    }
    return "?";
}

Family parse_family(std::string_view text) {
    if (text == "o") return Family::O;
    if (text == "so") return Family::SO;
    if (text == "eo") return Family::EO;
    if (text == "eso") return Family::ESO;
    throw SignatureError("unknown group family '" + std::string(text) + "' (expected o, so, eo or eso)");
}

std::string GroupTag::name() const {
    std::string base = is_special(family) ? "SO" : "O";
    std::string args = std::to_string(sig.n());
    if (!sig.euclidean()) {
        args += "," + std::to_string(sig.p());
    }
    args += field == Field::Real ? ",R" : ",C";
    std::string g = base + "(" + args + ")";
    if (has_translation(family)) {
        return std::string(field == Field::Real ? "R" : "C") + "^" + std::to_string(sig.n()) + " x| " + g;
    }
    return g;
}

Matrix e_p_matrix(const Signature& sig) {
    Matrix e = Matrix::Zero(sig.n(), sig.n());
    for (int i = 0; i < sig.n(); ++i) {
        e(i, i) = i < sig.p() ? 1.0 : -1.0;
    }
    return e;
}

Scalar euclidean_form(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) {
        throw DimensionError("form arguments have lengths " + std::to_string(x.size()) + " and " +
                             std::to_string(y.size()));
    }
    // transpose() * y, not x.dot(y): no conjugation.
    return (x.transpose() * y)(0, 0);
}

Scalar pseudo_form(const Vector& x, const Vector& y, const Signature& sig) {
    sig.require_pseudo();
    if (x.size() != sig.n() || y.size() != sig.n()) {
        throw DimensionError("form arguments must have length n=" + std::to_string(sig.n()));
    }
    Scalar acc = 0.0;
    for (int i = 0; i < sig.n(); ++i) {
        const Scalar term = x(i) * y(i);
        acc += i < sig.p() ? term : -term;
    }
    return acc;
}

Scalar form(const Vector& x, const Vector& y, const Signature& sig) {
    if (sig.euclidean()) {
        if (x.size() != sig.n()) {
            throw DimensionError("form arguments must have length n=" + std::to_string(sig.n()));
        }
        return euclidean_form(x, y);
    }
    return pseudo_form(x, y, sig);
}

Matrix h_matrix(const Signature& sig, Field field) {
    if (field != Field::Complex) {
        throw SignatureError("H-matrix exists only over the complex field");
    }
    sig.require_pseudo();
    Matrix h = Matrix::Zero(sig.n(), sig.n());
    for (int k = 0; k < sig.n(); ++k) {
        h(k, k) = k < sig.p() ? Scalar(1.0, 0.0) : Scalar(0.0, 1.0);
    }
    return h;
}

namespace {

Scalar det2(const Matrix& m, int r0, int r1, int c0, int c1) {
    return m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
}

Scalar det3(const Matrix& m) {
    return m(0, 0) * det2(m, 1, 2, 1, 2) - m(0, 1) * det2(m, 1, 2, 0, 2) + m(0, 2) * det2(m, 1, 2, 0, 1);
}

Scalar det4(const Matrix& m) {
    // Laplace expansion along the first two rows.
    const Scalar s0 = det2(m, 0, 1, 0, 1);
    const Scalar s1 = det2(m, 0, 1, 0, 2);
    const Scalar s2 = det2(m, 0, 1, 0, 3);
    const Scalar s3 = det2(m, 0, 1, 1, 2);
    const Scalar s4 = det2(m, 0, 1, 1, 3);
    const Scalar s5 = det2(m, 0, 1, 2, 3);
    const Scalar c5 = det2(m, 2, 3, 2, 3);
    const Scalar c4 = det2(m, 2, 3, 1, 3);
    const Scalar c3 = det2(m, 2, 3, 1, 2);
    const Scalar c2 = det2(m, 2, 3, 0, 3);
    const Scalar c1 = det2(m, 2, 3, 0, 2);
    const Scalar c0 = det2(m, 2, 3, 0, 1);
    return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
}

}  // namespace

Scalar determinant(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("determinant of a non-square matrix");
    }
    switch (m.rows()) {
        case 0: return 1.0;
        case 1: return m(0, 0);
        case 2: return det2(m, 0, 1, 0, 1);
        case 3: return det3(m);
        case 4: return det4(m);
        default: return m.partialPivLu().determinant();
    }
}

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs(const Vector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

double membership_defect(const Matrix& g, const GroupTag& group) {
    const int n = group.sig.n();
    if (g.rows() != n || g.cols() != n) {
        // Not even the right shape: as far from the group as we can report.
        return std::numeric_limits<double>::infinity();
    }
    const Matrix e = e_p_matrix(group.sig);
    double defect = max_abs(Matrix(g.transpose() * e * g - e));
    if (is_special(group.family)) {
        defect += std::abs(determinant(g) - 1.0);
    }
    return defect;
}

}  // namespace pscurve

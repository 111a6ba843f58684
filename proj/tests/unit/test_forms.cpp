#include <complex>
#include <random>

#include <doctest.h>

#include "common.hpp"
#include "pscurve/equivalence.hpp"
#include "pscurve/error.hpp"
#include "pscurve/forms.hpp"

using namespace pscurve;

namespace {

const Scalar I{0.0, 1.0};

Vector vec(std::initializer_list<Scalar> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (Scalar s : v) {
        out(k++) = s;
    }
    return out;
}

Vector random_vector(int n, std::mt19937_64& rng, bool complex) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Vector v(n);
    for (int k = 0; k < n; ++k) {
        v(k) = Scalar(u(rng), complex ? u(rng) : 0.0);
    }
    return v;
}

}  // namespace

TEST_CASE("signature bounds") {
    CHECK_THROWS_AS(Signature(1, 1), SignatureError);
    CHECK_THROWS_AS(Signature(3, 0), SignatureError);
    CHECK_THROWS_AS(Signature(3, 4), SignatureError);
    CHECK_NOTHROW(Signature(3, 2).require_pseudo());
    CHECK_THROWS_AS(Signature(3, 3).require_pseudo(), SignatureError);
    CHECK(Signature(3, 3).euclidean());
}

TEST_CASE("e_p_matrix examples") {
    CHECK(e_p_matrix(Signature(2, 1)).isApprox(vec({1, -1}).asDiagonal().toDenseMatrix()));
    CHECK(e_p_matrix(Signature(3, 3)).isIdentity());
    CHECK(e_p_matrix(Signature(4, 2)).isApprox(vec({1, 1, -1, -1}).asDiagonal().toDenseMatrix()));
}

TEST_CASE("e_p squared is the identity") {
    for (int n = 2; n <= 6; ++n) {
        for (int p = 1; p <= n; ++p) {
            const Matrix e = e_p_matrix(Signature(n, p));
            CHECK((e * e).isIdentity(0.0));
        }
    }
}

TEST_CASE("euclidean_form examples") {
    CHECK(euclidean_form(vec({1, 0}), vec({0, 1})) == Scalar(0.0));
    CHECK(std::abs(euclidean_form(vec({I, 1}), vec({I, 1}))) == doctest::Approx(0.0));
    for (double t : {-1.3, 0.2, 2.9}) {
        const Vector v = vec({std::cos(t), std::sin(t)});
        CHECK(euclidean_form(v, v).real() == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("forms do not conjugate") {
    const Vector x = vec({I, 0});
    CHECK(euclidean_form(x, x) == Scalar(-1.0));
    CHECK(pseudo_form(x, x, Signature(2, 1)) == Scalar(-1.0));
}

TEST_CASE("pseudo_form examples") {
    const Signature s21(2, 1);
    for (double t : {-2.0, 0.0, 0.7, 3.1}) {
        const Vector v = vec({std::cosh(t), std::sinh(t)});
        CHECK(pseudo_form(v, v, s21).real() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(pseudo_form(vec({1, 1}), vec({1, 1}), s21) == Scalar(0.0));
    CHECK(pseudo_form(vec({1, 2, 3}), vec({1, 2, 3}), Signature(3, 2)) == Scalar(-4.0));
    CHECK_THROWS_AS(pseudo_form(vec({1, 2}), vec({1, 2}), Signature(2, 2)), SignatureError);
    CHECK_THROWS_AS(pseudo_form(vec({1, 2}), vec({1, 2, 3}), Signature(2, 1)), DimensionError);
}

TEST_CASE("pseudo_form is symmetric and bilinear") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Signature sig(4, 1 + trial % 3);
        const Vector x = random_vector(4, rng, true);
        const Vector y = random_vector(4, rng, true);
        const Vector z = random_vector(4, rng, true);
        const Scalar alpha(u(rng), u(rng));
        CHECK(std::abs(pseudo_form(x, y, sig) - pseudo_form(y, x, sig)) < 1e-12);
        const Scalar lhs = pseudo_form(x, Vector(alpha * y + z), sig);
        const Scalar rhs = alpha * pseudo_form(x, y, sig) + pseudo_form(x, z, sig);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("h_matrix examples") {
    const Matrix h = h_matrix(Signature(2, 1), Field::Complex);
    CHECK(h(0, 0) == Scalar(1.0));
    CHECK(h(1, 1) == I);
    CHECK(h(0, 1) == Scalar(0.0));

    const Signature s32(3, 2);
    const Matrix h32 = h_matrix(s32, Field::Complex);
    CHECK(max_abs(Matrix(h32 * h32 - e_p_matrix(s32))) < 1e-15);

    const Matrix inv = e_p_matrix(Signature(2, 1)) * h;
    CHECK(max_abs(Matrix(inv - h.inverse())) < 1e-15);
    CHECK(inv(1, 1) == -I);

    CHECK_THROWS_AS(h_matrix(Signature(2, 1), Field::Real), SignatureError);
}

TEST_CASE("pseudo form through H equals the euclidean form") {
    std::mt19937_64 rng(11);
    for (auto [n, p] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{3, 2}, std::pair{5, 3}}) {
        const Signature sig(n, p);
        const Matrix h = h_matrix(sig, Field::Complex);
        for (int trial = 0; trial < 25; ++trial) {
            const Vector x = random_vector(n, rng, true);
            const Vector y = random_vector(n, rng, true);
            const Scalar a = pseudo_form(x, y, sig);
            const Scalar b = euclidean_form(Vector(h * x), Vector(h * y));
            CHECK(std::abs(a - b) < 1e-12);
        }
    }
}

TEST_CASE("determinant agrees with LU") {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 7; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            Matrix m(n, n);
            for (int i = 0; i < n; ++i) {
                m.col(i) = random_vector(n, rng, trial % 2 == 1);
            }
            const Scalar oracle = m.partialPivLu().determinant();
            CHECK(std::abs(determinant(m) - oracle) <= 1e-12 * (1.0 + std::abs(oracle)));
        }
    }
}

TEST_CASE("membership_defect examples") {
    const GroupTag o21{Family::O, Signature(2, 1), Field::Real};
    const GroupTag so21{Family::SO, Signature(2, 1), Field::Real};
    CHECK(membership_defect(Matrix::Identity(2, 2), o21) == 0.0);
    CHECK(membership_defect(Matrix::Identity(3, 3), GroupTag{Family::ESO, Signature(3, 3), Field::Complex}) == 0.0);
    CHECK(membership_defect(unit::boost(0.7), o21) <= 1e-12);
    CHECK(membership_defect(vec({1, -1}).asDiagonal().toDenseMatrix(), o21) == 0.0);
    CHECK(membership_defect(vec({1, -1}).asDiagonal().toDenseMatrix(), so21) == doctest::Approx(2.0));
}

TEST_CASE("group closure on sampled elements") {
    for (Field field : {Field::Real, Field::Complex}) {
        for (Family fam : {Family::O, Family::SO}) {
            for (auto [n, p] : {std::pair{2, 1}, std::pair{3, 3}, std::pair{3, 2}, std::pair{4, 2}}) {
                const GroupTag group{fam, Signature(n, p), field};
                for (std::uint64_t seed = 0; seed < 10; ++seed) {
                    const Matrix g1 = sample_group_element(group, seed, 1.0).g;
                    const Matrix g2 = sample_group_element(group, seed + 100, 1.0).g;
                    REQUIRE(membership_defect(g1, group) <= 1e-9 / 4);
                    REQUIRE(membership_defect(g2, group) <= 1e-9 / 4);
                    CHECK(membership_defect(Matrix(g1 * g2), group) <= 1e-9);
                }
            }
        }
    }
}

TEST_CASE("names round-trip") {
    for (Family f : {Family::O, Family::SO, Family::EO, Family::ESO}) {
        CHECK(parse_family(to_string(f)) == f);
    }
    for (Field f : {Field::Real, Field::Complex}) {
        CHECK(parse_field(to_string(f)) == f);
    }
}

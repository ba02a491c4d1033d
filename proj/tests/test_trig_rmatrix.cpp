#include <catch2/catch.hpp>

#include "qkzr/trig_rmatrix.hpp"

using namespace qkzr;

TEST_CASE("vector R-matrix block action", "[trig]") {
    const cplx q{0.6, 0.0};
    const cplx z{0.43, 0.27};
    const OperatorVV r = rmat_trig(z, 1, q);

    // Highest-weight normalization and weight-zero structure.
    CHECK(r.at(0, 0, 0, 0) == cplx{1.0, 0.0});
    CHECK(r.weight_zero_violation() == 0.0);

    // Independent 4x4 assembly of the rank-one matrix.
    const cplx xi = (1.0 - z) / (q - z / q);
    const cplx eta = (q - 1.0 / q) / (q - z / q);
    CHECK(std::abs(r.at(0, 1, 0, 1) - xi) < 1e-15);
    CHECK(std::abs(r.at(1, 0, 0, 1) - z * eta) < 1e-15);
    CHECK(std::abs(r.at(0, 1, 1, 0) - eta) < 1e-15);
    CHECK(std::abs(r.at(1, 0, 1, 0) - xi) < 1e-15);
    CHECK(std::abs(r.at(1, 1, 1, 1) - 1.0) < 1e-15);

    // z = 1 acts as the flip on the pair blocks.
    const OperatorVV r1 = rmat_trig(cplx{1.0, 0.0}, 2, q);
    CHECK(r1.at(0, 1, 0, 1) == cplx{0.0, 0.0});
    CHECK(r1.at(1, 0, 0, 1) == cplx{1.0, 0.0});

    CHECK_THROWS_AS(rmat_trig(q * q, 1, q), PoleHit);
}

TEST_CASE("normalizing scalar rho and the T-matrix determinant", "[trig]") {
    const cplx q{0.58, 0.03};
    for (int n : {1, 2, 4}) CHECK(std::abs(rho_scalar(cplx{0.0, 0.0}, n, q) - 1.0) < 1e-16);

    const cplx z{0.37, -0.22};
    const cplx q4 = q * q * q * q;
    const cplx rho2 = (1.0 - z) * (1.0 - q4 * z) / ((1.0 - q * q * z) * (1.0 - q * q * z));
    CHECK(std::abs(rho_scalar(z, 1, q) - rho2) < 1e-15);

    for (int m = 1; m <= 6; ++m) {
        const cplx closed = det_T_closed(m, z, q);
        const cplx brute = t_matrix(m, z, q).determinant();
        CHECK(std::abs(closed - brute) < 1e-12 * std::abs(closed));
    }
    // rho_{n+1} = det T_{n+1} / det T_n.
    for (int n : {1, 2, 3})
        CHECK(std::abs(rho_scalar(z, n, q) -
                       det_T_closed(n + 1, z, q) / det_T_closed(n, z, q)) < 1e-14);
}

TEST_CASE("Yang-Baxter and unitarity residuals", "[trig]") {
    const cplx q{0.6, 0.0};
    CHECK(check_qybe(cplx{0.4, 0.1}, cplx{0.7, -0.2}, 1, q) < 1e-13);
    CHECK(check_qybe(cplx{1.3, 0.4}, cplx{0.5, 0.25}, 3, q) < 1e-12);
    CHECK(check_qybe(cplx{1.0, 0.0}, cplx{1.0, 0.0}, 2, q) == 0.0);

    CHECK(check_unitarity(cplx{1.0, 0.0}, 2, q) == 0.0);
    CHECK(check_unitarity(cplx{0.45, 0.3}, 3, q) < 1e-13);
    CHECK(check_unitarity(cplx{1e-3, 2e-4}, 1, q) < 1e-13);
    CHECK_THROWS_AS(check_unitarity(cplx{0.0, 0.0}, 1, q), ZeroArgument);
}

TEST_CASE("singular systems trip the condition guard", "[trig]") {
    ComplexMatrix m(2);
    m.at(0, 0) = m.at(0, 1) = m.at(1, 0) = m.at(1, 1) = cplx{1.0, 0.0};
    CHECK_THROWS_AS(m.inverse(), IllConditioned);
}

TEST_CASE("crossing relation", "[trig]") {
    const cplx q{0.6, 0.0};
    const cplx z{0.37, 0.21};
    CHECK(check_crossing(z, 1, q) < 1e-13);
    CHECK(check_crossing(z, 2, q) < 1e-13);
    // The highest-weight entry of the relation recovers the closed form.
    for (int n : {1, 2, 3})
        CHECK(std::abs(rho_from_crossing(z, n, q) - rho_scalar(z, n, q)) < 1e-13);
}

TEST_CASE("infinite-product normalization f", "[trig]") {
    const cplx q{0.6, 0.0};
    const TruncationPolicy pol;
    for (int n : {1, 2}) {
        const cplx f0 = f_scalar(cplx{0.0, 0.0}, n, q, pol).value;
        CHECK(std::abs(f0 - cpower(q, cplx(n, 0.0) / cplx(n + 1, 0.0))) < 1e-15);

        const cplx z{0.4, 0.3};
        const SpecialValue v1 = f_scalar(z, n, q, pol);
        const SpecialValue v2 = f_scalar(z, n, q, pol.doubled());
        CHECK(std::abs(v1.value - v2.value) <
              pol.doubling_tolerance() * std::max(1.0, std::abs(v1.value)));

        cplx step{1.0, 0.0};
        for (int i = 0; i <= n; ++i) step *= q * q;
        const cplx lhs = g_scalar(z, n, q, pol).value / g_scalar(step * z, n, q, pol).value;
        CHECK(std::abs(lhs - rho_scalar(z, n, q)) < 1e-14);
    }
}

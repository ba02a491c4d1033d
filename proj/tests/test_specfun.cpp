#include <catch2/catch.hpp>

#include "qkzr/specfun.hpp"

using namespace qkzr;

namespace {

// Independent route for theta_1: the lattice sum
//   -sum_j exp(i pi (j+1/2)^2 tau + 2 pi i (j+1/2)(u + 1/2)),
// truncated symmetrically.  The library computes the product form, so the
// two must agree without sharing any code path.
cplx theta1_sum_oracle(cplx u, cplx tau) {
    cplx s{0.0, 0.0};
    for (int j = -40; j <= 40; ++j) {
        const cplx half{j + 0.5, 0.0};
        s += std::exp(i_pi * half * half * tau + two_pi_i * half * (u + 0.5));
    }
    return -s;
}

// Fixed-size brute force for the elliptic gamma double product.
cplx egamma_brute(cplx u, cplx zeta, cplx sigma, int terms = 80) {
    const cplx A = std::exp(two_pi_i * zeta);
    const cplx B = std::exp(two_pi_i * sigma);
    const cplx U = std::exp(two_pi_i * u);
    cplx v{1.0, 0.0};
    for (int j = 0; j < terms; ++j)
        for (int l = 0; l < terms; ++l) {
            const cplx num = 1.0 - std::pow(A, j + 1) * std::pow(B, l + 1) / U;
            const cplx den = 1.0 - std::pow(A, j) * std::pow(B, l) * U;
            v *= num / den;
        }
    return v;
}

}  // namespace

TEST_CASE("finite q-pochhammer matches a direct loop", "[specfun]") {
    const cplx a{0.4, 0.3}, q{0.7, -0.1};
    cplx expected{1.0, 0.0};
    for (int j = 0; j < 5; ++j) expected *= (1.0 - a * std::pow(q, j));
    CHECK(std::abs(qpochhammer(a, q, 5).value - expected) < 1e-14);
    CHECK(qpochhammer(a, q, 0).value == cplx{1.0, 0.0});
    CHECK(std::abs(qpochhammer(cplx{1.0, 0.0}, q, 3).value) == 0.0);
}

TEST_CASE("infinite q-pochhammer satisfies the doubling contract", "[specfun]") {
    const TruncationPolicy pol;
    const cplx a{0.9, 0.2}, q{0.82, 0.0};
    const SpecialValue v1 = qpochhammer(a, q, infinite, pol);
    const SpecialValue v2 = qpochhammer(a, q, infinite, pol.doubled());
    CHECK(std::abs(v1.value - v2.value) <=
          pol.doubling_tolerance() * std::max(1.0, std::abs(v1.value)));
    CHECK(v1.est_error < pol.tail_tol);
    CHECK(v1.terms_used > 0);
    CHECK_THROWS_AS(qpochhammer(a, cplx{1.1, 0.0}, infinite), NonConvergent);
}

TEST_CASE("triple product theta and its quasi-periodicity", "[specfun]") {
    const cplx q{0.55, 0.04};
    CHECK(std::abs(theta(cplx{1.0, 0.0}, q).value) == 0.0);
    const cplx z{0.7, 0.45};
    const cplx t0 = theta(z, q).value;
    CHECK(std::abs(z * theta(q * z, q).value + t0) < 1e-13);
    CHECK(std::abs(theta(q * z, q).value - theta(1.0 / z, q).value) < 1e-13);
    CHECK(std::abs(z * t0 + q * theta(z / q, q).value) < 1e-13);
    CHECK_THROWS_AS(theta(cplx{0.0, 0.0}, q), ZeroArgument);
    CHECK_THROWS_AS(theta(z, cplx{1.0, 0.2}), NonConvergent);
}

TEST_CASE("theta_1 product form agrees with the lattice sum", "[specfun]") {
    const cplx tau{0.13, 0.21};
    for (cplx u : {cplx{0.27, 0.05}, cplx{-0.31, -0.12}, cplx{0.05, 0.3}}) {
        const cplx prod = theta1(u, tau).value;
        const cplx sum = theta1_sum_oracle(u, tau);
        CHECK(std::abs(prod - sum) < 1e-12 * std::max(1.0, std::abs(sum)));
    }
    CHECK(std::abs(theta1(cplx{0.0, 0.0}, tau).value) < 1e-15);
    const cplx u{0.23, 0.11};
    CHECK(std::abs(theta1(-u, tau).value + theta1(u, tau).value) < 1e-13);
    CHECK_THROWS_AS(theta1(u, cplx{0.3, -0.1}), NonConvergent);
}

TEST_CASE("theta bridge between multiplicative and additive pictures", "[specfun]") {
    const cplx tau{0.09, 0.23}, u{0.31, -0.08};
    const cplx q = std::exp(two_pi_i * tau);
    const cplx z = std::exp(-two_pi_i * u);
    const cplx lhs = theta(z, q).value;
    const cplx rhs = cplx{0.0, 1.0} * cpower(q, -0.125) * cpower(z, 0.5) * theta1(u, tau).value;
    CHECK(std::abs(lhs - rhs) < 1e-13 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("q-gamma special values and functional equations", "[specfun]") {
    const cplx q{0.6, 0.02};
    CHECK(std::abs(qgamma(cplx{1.0, 0.0}, q).value - 1.0) < 1e-14);
    const cplx a{0.37, 0.21};
    const cplx lhs = qgamma(a + 1.0, q).value;
    const cplx rhs = (1.0 - cpower(q, a)) / (1.0 - q) * qgamma(a, q).value;
    CHECK(std::abs(lhs - rhs) < 1e-13);
    const cplx cq = (1.0 - q) * std::pow(qpochhammer(q, q, infinite).value, 3);
    const cplx refl = qgamma(a, q).value * qgamma(1.0 - a, q).value * theta(cpower(q, a), q).value;
    CHECK(std::abs(refl - cq) < 1e-13);
    CHECK_THROWS_AS(qgamma(cplx{0.0, 0.0}, q), PoleHit);
    CHECK_THROWS_AS(qgamma(cplx{-2.0, 0.0}, q), PoleHit);
}

TEST_CASE("elliptic gamma double product", "[specfun]") {
    const cplx zeta{0.12, 0.31}, sigma{-0.07, 0.26}, u{0.21, 0.04};
    const SpecialValue v = egamma(u, zeta, sigma);
    CHECK(std::abs(v.value - egamma_brute(u, zeta, sigma)) < 1e-12);
    CHECK(std::abs(v.value - egamma(u, sigma, zeta).value) < 1e-13);
    const SpecialValue v2 = egamma(u, zeta, sigma, TruncationPolicy().doubled());
    CHECK(std::abs(v.value - v2.value) <= 1e-15 * std::max(1.0, std::abs(v.value)));
    CHECK_THROWS_AS(egamma(u, cplx{0.2, -0.1}, sigma), NonConvergent);
}

TEST_CASE("heine series basics and equation residual", "[specfun]") {
    const cplx p{0.5, 0.0};
    const cplx r{0.3, 0.05}, s{-0.4, 0.1}, t{0.7, -0.02};
    CHECK(qhyper_2phi1(r, s, t, p, cplx{0.0, 0.0}).value == cplx{1.0, 0.0});
    // Vanishing numerator parameter truncates the series to 1 for any z.
    CHECK(std::abs(qhyper_2phi1(cplx{0.0, 0.0}, s, t, p, cplx{0.8, 0.1}).value - 1.0) < 1e-15);
    const cplx z{0.3, 0.2};
    const cplx f0 = qhyper_2phi1(r, s, t, p, z).value;
    const cplx f1 = qhyper_2phi1(r, s, t, p, p * z).value;
    const cplx f2 = qhyper_2phi1(r, s, t, p, p * p * z).value;
    const cplx res = (cpower(p, r + s) * z - cpower(p, t - 1.0)) * f2 +
                     (-(cpower(p, r) + cpower(p, s)) * z + cpower(p, t - 1.0) + 1.0) * f1 +
                     (z - 1.0) * f0;
    CHECK(std::abs(res) < 1e-14);
    CHECK_THROWS_AS(qhyper_2phi1(r, s, t, p, cplx{1.2, 0.0}), NonConvergent);
    CHECK_THROWS_AS(qhyper_2phi1(r, s, cplx{0.0, 0.0}, p, z), PoleHit);
}

TEST_CASE("fixed-branch power", "[specfun]") {
    const cplx z{-0.4, 0.7};
    CHECK(std::abs(cpower(z, cplx{1.0, 0.0}) - z) < 1e-15);
    CHECK(cpower(z, cplx{0.0, 0.0}) == cplx{1.0, 0.0});
    const cplx a{0.3, -0.2}, b{-1.1, 0.4};
    CHECK(std::abs(cpower(z, a) * cpower(z, b) - cpower(z, a + b)) < 1e-14);
    CHECK_THROWS_AS(cpower(cplx{0.0, 0.0}, a), ZeroArgument);
}

TEST_CASE("policies validate their fields", "[specfun]") {
    CHECK_THROWS_AS(TruncationPolicy(0, 1e-12), ConfigInvalid);
    CHECK_THROWS_AS(TruncationPolicy(10, 0.0), ConfigInvalid);
}

TEST_CASE("policy exhaustion is reported, not silently truncated", "[specfun]") {
    const TruncationPolicy tight(8, 1e-16);
    CHECK_THROWS_AS(qpochhammer(cplx{0.9, 0.0}, cplx{0.9, 0.0}, infinite, tight),
                    PolicyExhausted);
}

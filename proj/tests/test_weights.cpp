#include <catch2/catch.hpp>

#include "qkzr/weights.hpp"

using namespace qkzr;

namespace {
// Fundamental weight omega_i in ambient coordinates, built independently:
// (n+1-i)/(n+1) on the first i coordinates, -i/(n+1) on the rest.
Weight omega(int i, int n) {
    Weight w(n + 1);
    for (int k = 0; k <= n; ++k)
        w[k] = (k < i) ? cplx{double(n + 1 - i) / (n + 1), 0.0}
                       : cplx{-double(i) / (n + 1), 0.0};
    return w;
}
}  // namespace

TEST_CASE("basis weights in ambient coordinates", "[weights]") {
    for (int n : {1, 2, 3}) {
        const Weight mu0 = weight_mu(0, n);
        const Weight w1 = omega(1, n);
        for (int k = 0; k <= n; ++k) CHECK(std::abs(mu0[k] - w1[k]) < 1e-15);

        Weight sum(n + 1);
        for (int m = 0; m <= n; ++m) sum += weight_mu(m, n);
        for (int k = 0; k <= n; ++k) CHECK(std::abs(sum[k]) < 1e-15);

        for (int m = 0; m <= n; ++m)
            CHECK(std::abs(inner(weight_mu(m, n), weight_mu(m, n)) - cplx(double(n) / (n + 1), 0))
                  < 1e-15);
        for (int m = 0; m <= n; ++m)
            for (int l = 0; l <= n; ++l) {
                if (m == l) continue;
                CHECK(std::abs(inner(weight_mu(m, n), weight_mu(l, n)) +
                               cplx(1.0 / (n + 1), 0.0)) < 1e-15);
                const Weight d = weight_mu(m, n) - weight_mu(l, n);
                CHECK(std::abs(inner(d, d) - cplx{2.0, 0.0}) < 1e-14);
                const Weight s = weight_mu(m, n) + weight_mu(l, n);
                CHECK(std::abs(inner(s, d)) < 1e-15);
            }
    }
    CHECK_THROWS_AS(weight_mu(3, 2), IndexOutOfRange);
}

TEST_CASE("rho coordinates and pairings", "[weights]") {
    const Weight r1 = rho_weight(1);
    CHECK(r1[0] == cplx{0.5, 0.0});
    CHECK(r1[1] == cplx{-0.5, 0.0});
    for (int n : {1, 2, 3}) {
        const Weight r = rho_weight(n);
        for (int m = 0; m <= n; ++m)
            for (int l = m + 1; l <= n; ++l)
                CHECK(std::abs(inner(r, weight_mu(m, n) - weight_mu(l, n)) -
                               cplx(double(l - m), 0.0)) < 1e-14);
    }
}

TEST_CASE("pair exponent varpi", "[weights]") {
    const ModelParams mp(1, {0.6, 0.0}, {-0.7, 0.0});
    const Weight lam(std::vector<cplx>{{0.42, 0.05}, {-0.17, 0.02}});
    CHECK(std::abs(varpi(lam, 0, 1, mp) + varpi(lam, 1, 0, mp)) < 1e-16);
    // Closed form for rank one: (lambda_1 - lambda_0 - 1) / (2 kappa).
    const cplx expect = (lam[1] - lam[0] - 1.0) / (2.0 * mp.kappa);
    CHECK(std::abs(varpi(lam, 0, 1, mp) - expect) < 1e-15);
    // Invariance under constant coordinate shifts.
    Weight shifted = lam;
    for (int i = 0; i < 2; ++i) shifted[i] += cplx{3.7, -1.2};
    CHECK(std::abs(varpi(lam, 0, 1, mp) - varpi(shifted, 0, 1, mp)) < 1e-14);

    CHECK_THROWS_AS(varpi(lam, 1, 1, mp), IndexOutOfRange);

    const ModelParams mp3(3, {0.6, 0.0}, {-1.8, 0.0});
    Weight lam3(4);
    for (int i = 0; i < 4; ++i) lam3[i] = cplx{0.1 * i * i - 0.2 * i, 0.01};
    // A pair with equal coordinates reduces to the rho pairing.
    Weight eq = lam3;
    eq[1] = eq[2];
    const cplx vp = varpi(eq, 1, 2, mp3);
    CHECK(std::abs(vp - cplx{-1.0, 0.0} / (2.0 * mp3.kappa)) < 1e-15);
}

TEST_CASE("conformal weights", "[weights]") {
    const ModelParams mp(2, {0.55, 0.0}, {-1.2, 0.0});
    Weight zero(3);
    CHECK(std::abs(delta_conformal(zero, mp)) < 1e-16);

    Weight lam(std::vector<cplx>{{0.4, 0.01}, {-0.1, 0.03}, {0.2, -0.02}});
    for (int m = 0; m <= 1; ++m)
        for (int l = m + 1; l <= 2; ++l)
            for (int j : {m, l}) {
                const PairDeltas d = pair_deltas(lam, m, l, j, mp);
                const Weight mm = weight_mu(m, 2), ml = weight_mu(l, 2);
                const cplx ref =
                    inner(2.0 * lam - (mm + ml) + 2.0 * rho_weight(2), mm + ml) /
                    (2.0 * mp.kappa);
                CHECK(std::abs(d.delta - ref) < 1e-14);
                // -(delta1 - delta2)/2 = (+-) varpi + <mu_m, mu_l>/(2 kappa),
                // plus sign when the inner step is l.
                const cplx sign = (j == l) ? cplx{1.0, 0.0} : cplx{-1.0, 0.0};
                const cplx rhs = sign * varpi(lam, m, l, mp) +
                                 inner(mm, ml) / (2.0 * mp.kappa);
                CHECK(std::abs(-0.5 * (d.delta1 - d.delta2) - rhs) < 1e-14);
            }
    CHECK_THROWS_AS(inner(Weight(2), Weight(3)), LengthMismatch);
}

TEST_CASE("model parameter region and derived scalars", "[weights]") {
    const ModelParams mp(1, {0.6, 0.0}, {-1.7, 0.0});
    CHECK(std::abs(mp.p() - cpower(mp.q, -2.0 * mp.kappa)) < 1e-16);
    CHECK(std::abs(mp.tau() + mp.kappa * std::log(mp.q) / i_pi) < 1e-15);
    CHECK(std::abs(mp.gamma() + mp.tau() / mp.kappa) < 1e-15);
    CHECK(std::abs(mp.level() - (mp.kappa - 2.0)) < 1e-16);
    CHECK_THROWS_AS(ModelParams(1, {1.5, 0.0}, {-1.0, 0.0}), RegionViolation);
    // kappa > 0 with |q| < 1 pushes |p| above one.
    CHECK_THROWS_AS(ModelParams(1, {0.6, 0.0}, {1.0, 0.0}), RegionViolation);
    CHECK_THROWS_AS(ModelParams(1, {0.6, 0.0}, {0.0, 0.0}), ZeroKappa);
}

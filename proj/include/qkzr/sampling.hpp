// Deterministic sampling for the verification suites: a counter-seeded
// splitmix64 stream per sample, box/annulus draws, and genericity predicates
// used to reject draws that land too close to poles or resonances.

#pragma once

#include <cstdint>

#include "qkzr/specfun.hpp"
#include "qkzr/weights.hpp"

namespace qkzr {

// splitmix64; one independent stream per (seed, stream) pair so sample k of
// a run is reproducible regardless of evaluation order.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(seed + 0x9E3779B97F4A7C15ULL * (stream + 1)) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool coin() { return (next_u64() & 1u) != 0; }

    cplx box(double re_lo, double re_hi, double im_lo, double im_hi) {
        const double re = uniform(re_lo, re_hi);
        const double im = uniform(im_lo, im_hi);
        return {re, im};
    }

    // Modulus in (r_lo, r_hi), argument kept a margin away from the real
    // axis so that p-chains do not graze the recurrence singularities.
    cplx annulus(double r_lo, double r_hi, double arg_margin = 0.15) {
        const double r = uniform(r_lo, r_hi);
        double a = uniform(arg_margin, pi - arg_margin);
        if (coin()) a = -a;
        return {r * std::cos(a), r * std::sin(a)};
    }

  private:
    std::uint64_t state_;
};

// Distance of x from the nearest integer.
inline double dist_to_integers(double x) {
    const double f = x - std::round(x);
    return std::abs(f);
}

// Reject weights whose pair exponents 2 varpi sit near the integer
// resonances of the gamma factors or grow past the safe magnitude window.
inline bool lambda_is_generic(const Weight& lambda, const ModelParams& params,
                              double margin = 0.05, double max_re = 2.6) {
    const cplx ik = 1.0 / params.kappa;
    for (int m = 0; m <= params.n; ++m)
        for (int l = m + 1; l <= params.n; ++l) {
            const cplx vp2 = 2.0 * varpi(lambda, m, l, params);
            const double re = vp2.real();
            if (std::abs(re) > max_re) return false;
            if (std::abs(vp2.imag()) > 0.4) return false;
            if (dist_to_integers(re) < margin) return false;
            if (dist_to_integers(re + ik.real()) < margin) return false;
            if (dist_to_integers(re - ik.real()) < margin) return false;
        }
    return true;
}

// Weight draw: coordinates in a small complex box, rejected until generic.
inline Weight draw_generic_lambda(Rng& rng, const ModelParams& params, int max_attempts = 200) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Weight w(params.dim());
        for (int i = 0; i < params.dim(); ++i) w[i] = rng.box(-0.45, 0.45, -0.035, 0.035);
        if (lambda_is_generic(w, params)) return w;
    }
    throw NonGeneric("draw_generic_lambda: rejection budget exhausted");
}

// Spectral-variable draw for the closed-form entry functions: keeps the
// exponential coordinate z = e^{-2 pi i u} inside a moderate annulus and off
// the real-z axis.
inline cplx draw_u(Rng& rng, double re_max = 0.42, double im_max = 0.12) {
    const double re = rng.coin() ? rng.uniform(0.04, re_max) : -rng.uniform(0.04, re_max);
    const double im = rng.uniform(-im_max, im_max);
    return {re, im};
}

// |q^2 / p|: the growth factor of the series arguments under one backward
// p-shift; the solution-residual windows scale with it.
inline double qkz_arg_growth(const ModelParams& params) {
    return std::abs(params.q * params.q / params.p());
}

// Default kappa for a given rank: keeps every pair exponent 2 varpi inside
// the generic window, stays in the |p| < 1 region, and keeps 1/kappa away
// from the integer resonances of the gamma factors.
inline cplx default_kappa(int n) { return {-(0.65 + 0.52 * n), 0.0}; }

}  // namespace qkzr

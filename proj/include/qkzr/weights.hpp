// Weight combinatorics for sl_{n+1} in the (n+1)-coordinate ambient picture:
// basis weights mu_m of the vector representation, the Weyl vector rho, the
// plain-dot-product bilinear form, and the derived scalars kappa, p, tau,
// gamma, varpi and the conformal weights Delta.

#pragma once

#include <vector>

#include "qkzr/core.hpp"

namespace qkzr {

// Parameter bundle (n, q, kappa). p, tau, gamma are always recomputed from
// (q, kappa); the constructor enforces the region |q| < 1, |p| < 1.
struct ModelParams {
    int n = 1;
    cplx q{0.6, 0.0};
    cplx kappa{-0.6, 0.0};

    ModelParams() = default;
    ModelParams(int rank, cplx q_, cplx kappa_) : n(rank), q(q_), kappa(kappa_) {
        if (n < 1) throw ConfigInvalid("ModelParams: rank must be >= 1");
        if (std::abs(kappa) < pole_tol) throw ZeroKappa("ModelParams: kappa = 0");
        if (std::abs(q) >= 1.0) throw RegionViolation("ModelParams: |q| >= 1");
        if (std::abs(p()) >= 1.0) throw RegionViolation("ModelParams: |p| >= 1");
    }

    int dim() const { return n + 1; }

    cplx p() const { return cpower(q, -2.0 * kappa); }      // q^{-2 kappa}
    cplx tau() const { return std::log(p()) / two_pi_i; }   // log p / (2 pi i)
    cplx gamma() const { return std::log(q) / i_pi; }       // log q / (pi i)
    cplx level() const { return kappa - cplx(n + 1, 0.0); } // k = kappa - h^vee
};

struct Weight {
    std::vector<cplx> coords;

    Weight() = default;
    explicit Weight(std::vector<cplx> c) : coords(std::move(c)) {}
    explicit Weight(int dim) : coords(dim, cplx{0.0, 0.0}) {}

    int dim() const { return static_cast<int>(coords.size()); }
    cplx operator[](int i) const { return coords[static_cast<size_t>(i)]; }
    cplx& operator[](int i) { return coords[static_cast<size_t>(i)]; }

    Weight& operator+=(const Weight& o) {
        if (dim() != o.dim()) throw LengthMismatch("Weight +=: dimension mismatch");
        for (int i = 0; i < dim(); ++i) coords[i] += o.coords[i];
        return *this;
    }
    Weight& operator-=(const Weight& o) {
        if (dim() != o.dim()) throw LengthMismatch("Weight -=: dimension mismatch");
        for (int i = 0; i < dim(); ++i) coords[i] -= o.coords[i];
        return *this;
    }
    Weight& operator*=(cplx c) {
        for (auto& x : coords) x *= c;
        return *this;
    }
    friend Weight operator+(Weight a, const Weight& b) { return a += b; }
    friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
    friend Weight operator*(cplx c, Weight a) { return a *= c; }
};

// Bilinear (not conjugated) coordinate dot product.
inline cplx inner(const Weight& a, const Weight& b) {
    if (a.dim() != b.dim()) throw LengthMismatch("inner: dimension mismatch");
    cplx s{0.0, 0.0};
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

// Weight of the basis vector v_m: (-1,...,-1, n, -1,...,-1)/(n+1),
// distinguished coordinate at position m.
inline Weight weight_mu(int m, int n) {
    if (m < 0 || m > n) throw IndexOutOfRange("weight_mu: m out of range");
    Weight w(n + 1);
    const double inv = 1.0 / (n + 1);
    for (int i = 0; i <= n; ++i) w[i] = cplx{-inv, 0.0};
    w[m] = cplx{n * inv, 0.0};
    return w;
}

// rho = (n/2)(1,...,1) - (0,1,...,n); coordinates are half-integers.
inline Weight rho_weight(int n) {
    if (n < 1) throw ConfigInvalid("rho_weight: rank must be >= 1");
    Weight w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = cplx{0.5 * n - i, 0.0};
    return w;
}

// Coordinate difference (lambda+rho)_a - (lambda+rho)_b; equals
// <lambda+rho, mu_a - mu_b>.
inline cplx shifted_diff(const Weight& lambda, int a, int b, int n) {
    if (a < 0 || a > n || b < 0 || b > n) throw IndexOutOfRange("shifted_diff: index out of range");
    if (lambda.dim() != n + 1) throw LengthMismatch("shifted_diff: weight dimension mismatch");
    const Weight r = rho_weight(n);
    return (lambda[a] + r[a]) - (lambda[b] + r[b]);
}

// varpi = <lambda+rho, mu_l - mu_m> / (2 kappa); antisymmetric in (m, l).
inline cplx varpi(const Weight& lambda, int m, int l, const ModelParams& params) {
    if (m == l) throw IndexOutOfRange("varpi: m == l");
    const Weight r = rho_weight(params.n);
    const Weight diff = weight_mu(l, params.n) - weight_mu(m, params.n);
    return inner(lambda + r, diff) / (2.0 * params.kappa);
}

// Delta_k(lambda) = <lambda, lambda + 2 rho> / (2 kappa)
inline cplx delta_conformal(const Weight& lambda, const ModelParams& params) {
    if (std::abs(params.kappa) < pole_tol) throw ZeroKappa("delta_conformal: kappa = 0");
    const Weight r = rho_weight(params.n);
    return inner(lambda, lambda + 2.0 * r) / (2.0 * params.kappa);
}

// Conformal-weight data of the two-step intertwiner with inner step j and
// weight-space pair (m, l):
//   delta1 = Delta_k(lambda - mu_j) - Delta_k(lambda - mu_m - mu_l)
//   delta2 = Delta_k(lambda)        - Delta_k(lambda - mu_j)
struct PairDeltas {
    cplx delta1, delta2;
    cplx delta;  // delta1 + delta2
    cplx varpi;
};

inline PairDeltas pair_deltas(const Weight& lambda, int m, int l, int j,
                              const ModelParams& params) {
    if (j != m && j != l) throw IndexOutOfRange("pair_deltas: j must be m or l");
    const Weight mm = weight_mu(m, params.n);
    const Weight ml = weight_mu(l, params.n);
    const Weight mj = weight_mu(j, params.n);
    PairDeltas d;
    d.delta1 = delta_conformal(lambda - mj, params) - delta_conformal(lambda - mm - ml, params);
    d.delta2 = delta_conformal(lambda, params) - delta_conformal(lambda - mj, params);
    d.delta = d.delta1 + d.delta2;
    d.varpi = (m == l) ? cplx{0.0, 0.0} : varpi(lambda, m, l, params);
    return d;
}

}  // namespace qkzr

// The elliptic dynamical R-matrix built from ratios of first theta
// functions, acting on V tensor V with the dynamical parameter entering
// through coordinate differences.

#pragma once

#include "qkzr/matrix.hpp"
#include "qkzr/specfun.hpp"
#include "qkzr/weights.hpp"

namespace qkzr {

namespace detail {
inline cplx theta1_checked(cplx u, cplx tau, const TruncationPolicy& policy) {
    const cplx v = theta1(u, tau, policy).value;
    if (std::abs(v) < pole_tol) throw PoleHit("theta1 vanishes at the evaluation point");
    return v;
}
}  // namespace detail

// alpha(u, lam) = th1(lam+gamma) th1(u) / (th1(lam) th1(u-gamma))
inline cplx felder_alpha(cplx u, cplx lam, cplx gamma, cplx tau,
                         const TruncationPolicy& policy = {}) {
    const cplx num = theta1(lam + gamma, tau, policy).value * theta1(u, tau, policy).value;
    return num / (detail::theta1_checked(lam, tau, policy) *
                  detail::theta1_checked(u - gamma, tau, policy));
}

// beta(u, lam) = th1(gamma) th1(u-lam) / (th1(lam) th1(u-gamma))
inline cplx felder_beta(cplx u, cplx lam, cplx gamma, cplx tau,
                        const TruncationPolicy& policy = {}) {
    const cplx num = theta1(gamma, tau, policy).value * theta1(u - lam, tau, policy).value;
    return num / (detail::theta1_checked(lam, tau, policy) *
                  detail::theta1_checked(u - gamma, tau, policy));
}

// R^{ell}(u, lambda): 1 on v_m tensor v_m, alpha(u, lambda_m - lambda_l) on
// E_mm ox E_ll and beta(u, lambda_m - lambda_l) on E_lm ox E_ml for m != l.
inline OperatorVV felder_rmatrix(cplx u, const Weight& lambda, cplx gamma, cplx tau, int n,
                                 const TruncationPolicy& policy = {}) {
    if (tau.imag() <= 0.0) throw NonConvergent("felder_rmatrix: Im tau <= 0");
    if (lambda.dim() != n + 1) throw LengthMismatch("felder_rmatrix: weight dimension mismatch");
    OperatorVV op(n);
    for (int m = 0; m <= n; ++m) op.at(m, m, m, m) = 1.0;
    for (int m = 0; m <= n; ++m)
        for (int l = 0; l <= n; ++l) {
            if (m == l) continue;
            const cplx lml = lambda[m] - lambda[l];
            op.at(m, l, m, l) = felder_alpha(u, lml, gamma, tau, policy);
            op.at(l, m, m, l) = felder_beta(u, lml, gamma, tau, policy);
        }
    return op;
}

}  // namespace qkzr

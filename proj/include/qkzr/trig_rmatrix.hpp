// The trigonometric R-matrix on V(x) tensor V(y) for the vector
// representation, its normalizing scalars rho_{n+1}(z) and f_{n+1}(z), and
// the Yang-Baxter / unitarity / crossing residual checks.

#pragma once

#include "qkzr/matrix.hpp"
#include "qkzr/specfun.hpp"
#include "qkzr/weights.hpp"

namespace qkzr {

// xi(z) = (1-z)/(q - q^{-1} z),  eta(z) = (q - q^{-1})/(q - q^{-1} z)
inline cplx xi_coeff(cplx z, cplx q) {
    const cplx den = q - z / q;
    if (std::abs(den) < pole_tol) throw PoleHit("xi: z = q^2");
    return (1.0 - z) / den;
}

inline cplx eta_coeff(cplx z, cplx q) {
    const cplx den = q - z / q;
    if (std::abs(den) < pole_tol) throw PoleHit("eta: z = q^2");
    return (q - 1.0 / q) / den;
}

// R(z): identity on v_m tensor v_m; on the pair block {v_m tensor v_l,
// v_l tensor v_m} (m < l) the 2x2 action with coefficients xi, eta, z eta.
inline OperatorVV rmat_trig(cplx z, int n, cplx q) {
    const cplx xi = xi_coeff(z, q);
    const cplx eta = eta_coeff(z, q);
    OperatorVV op(n);
    for (int m = 0; m <= n; ++m) op.at(m, m, m, m) = 1.0;
    for (int m = 0; m <= n; ++m)
        for (int l = m + 1; l <= n; ++l) {
            op.at(m, l, m, l) = xi;
            op.at(l, m, m, l) = z * eta;
            op.at(m, l, l, m) = eta;
            op.at(l, m, l, m) = xi;
        }
    return op;
}

// Entry function of the T-matrix: p(z) = (1 - q^2)/(1 - q^2 z)
inline cplx p_entry(cplx z, cplx q) {
    const cplx den = 1.0 - q * q * z;
    if (std::abs(den) < pole_tol) throw PoleHit("p_entry: z = q^{-2}");
    return (1.0 - q * q) / den;
}

// det T_m = (1 - q^{2m} z)(1 - z)^{m-1} / (1 - q^2 z)^m
inline cplx det_T_closed(int m, cplx z, cplx q) {
    if (m < 1) throw ConfigInvalid("det_T_closed: m must be >= 1");
    const cplx den = 1.0 - q * q * z;
    if (std::abs(den) < pole_tol) throw PoleHit("det_T_closed: z = q^{-2}");
    cplx q2m = 1.0;
    for (int i = 0; i < m; ++i) q2m *= q * q;
    cplx num = 1.0 - q2m * z;
    for (int i = 0; i < m - 1; ++i) num *= (1.0 - z);
    cplx denm = 1.0;
    for (int i = 0; i < m; ++i) denm *= den;
    return num / denm;
}

// The explicit (m x m) T-matrix: 1 on the diagonal, z p(z) above, p(z) below.
inline ComplexMatrix t_matrix(int m, cplx z, cplx q) {
    const cplx pz = p_entry(z, q);
    ComplexMatrix t(m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) t.at(r, c) = (r == c) ? cplx{1.0, 0.0} : (c > r ? z * pz : pz);
    return t;
}

// rho_{n+1}(z) = (1 - z)(1 - z q^{2(n+1)}) / ((1 - z q^2)(1 - z q^{2n}))
inline cplx rho_scalar(cplx z, int n, cplx q) {
    cplx q2n = 1.0;
    for (int i = 0; i < n; ++i) q2n *= q * q;
    const cplx den1 = 1.0 - z * q * q;
    const cplx den2 = 1.0 - z * q2n;
    if (std::abs(den1) < pole_tol || std::abs(den2) < pole_tol)
        throw PoleHit("rho_scalar: pole in the rational factor");
    return (1.0 - z) * (1.0 - z * q2n * q * q) / (den1 * den2);
}

// g(z) = prod_{j>=0} rho_{n+1}(q^{2j(n+1)} z)
inline SpecialValue g_scalar(cplx z, int n, cplx q, const TruncationPolicy& policy = {}) {
    if (std::abs(q) >= 1.0) throw NonConvergent("g_scalar: |q| >= 1");
    cplx step = 1.0;
    for (int i = 0; i < n + 1; ++i) step *= q * q;  // q^{2(n+1)}
    SpecialValue out;
    out.value = 1.0;
    cplx w = z;
    for (int j = 0; j < policy.max_terms; ++j) {
        const cplx factor = rho_scalar(w, n, q);
        const double dev = std::abs(factor - 1.0);
        if (dev < policy.tail_tol) {
            out.est_error = dev;
            return note_truncation(out);
        }
        out.value *= factor;
        w *= step;
        ++out.terms_used;
    }
    throw PolicyExhausted("g_scalar: tail did not reach tail_tol");
}

// f_{n+1}(z) = q^{n/(n+1)} g(z), principal branch for the prefactor.
inline SpecialValue f_scalar(cplx z, int n, cplx q, const TruncationPolicy& policy = {}) {
    SpecialValue out = g_scalar(z, n, q, policy);
    const cplx pref = cpower(q, cplx(n, 0.0) / cplx(n + 1, 0.0));
    out.value *= pref;
    out.est_error *= std::abs(pref);
    return note_truncation(out);
}

// Sup-norm of R12(z) R13(zw) R23(w) - R23(w) R13(zw) R12(z) on V^{otimes 3}.
inline double check_qybe(cplx z, cplx w, int n, cplx q) {
    auto fixed = [&](cplx arg) {
        return std::function<OperatorVV(int)>([=](int) { return rmat_trig(arg, n, q); });
    };
    const ComplexMatrix r12 = embed_two_site(n, 1, 2, fixed(z), false);
    const ComplexMatrix r13 = embed_two_site(n, 1, 3, fixed(z * w), false);
    const ComplexMatrix r23 = embed_two_site(n, 2, 3, fixed(w), false);
    const ComplexMatrix lhs = r12 * (r13 * r23);
    const ComplexMatrix rhs = r23 * (r13 * r12);
    return (lhs - rhs).sup_norm();
}

// Sup-norm of P R(z) P R(z^{-1}) - Id.
inline double check_unitarity(cplx z, int n, cplx q) {
    if (z == cplx{0.0, 0.0}) throw ZeroArgument("check_unitarity: z = 0");
    const OperatorVV lhs =
        rmat_trig(z, n, q).flip_conjugate() * rmat_trig(1.0 / z, n, q);
    return (lhs - OperatorVV::identity(n)).sup_norm();
}

// Diagonal operator q^{2 rho} acting as q^{2 <rho, mu_i>} on v_i, placed on
// the first tensor factor.
inline OperatorVV q2rho_slot1(int n, cplx q, bool inverse_power) {
    const Weight r = rho_weight(n);
    OperatorVV op(n);
    for (int i = 0; i <= n; ++i) {
        const cplx e = 2.0 * inner(r, weight_mu(i, n));
        const cplx f = cpower(q, inverse_power ? -e : e);
        for (int j = 0; j <= n; ++j) op.at(i, j, i, j) = f;
    }
    return op;
}

// Double dual (((R(z)^{-1})^{t1})^{-1})^{t1}.
inline OperatorVV crossing_double_dual(cplx z, int n, cplx q, double cond_guard = 1e12) {
    const OperatorVV r = rmat_trig(z, n, q);
    return r.inverse(cond_guard).partial_transpose_1().inverse(cond_guard).partial_transpose_1();
}

// rho recovered from the crossing relation: the v_0 tensor v_0 entry of the
// double dual is 1/rho(z).
inline cplx rho_from_crossing(cplx z, int n, cplx q) {
    const cplx e = crossing_double_dual(z, n, q).at(0, 0, 0, 0);
    if (std::abs(e) < pole_tol) throw PoleHit("rho_from_crossing: degenerate entry");
    return 1.0 / e;
}

// Full-matrix residual of the crossing relation
//   rho(z) (((R(z)^{-1})^{t1})^{-1})^{t1}
//     = (q^{2 rho} ox 1) R(q^{2(n+1)} z) (q^{-2 rho} ox 1).
// The argument shift is multiplication by q^{2(n+1)}, matching the step of
// the infinite product defining f_{n+1}.
inline double check_crossing(cplx z, int n, cplx q) {
    OperatorVV lhs = crossing_double_dual(z, n, q);
    lhs *= rho_scalar(z, n, q);
    cplx shift = 1.0;
    for (int i = 0; i < n + 1; ++i) shift *= q * q;
    const OperatorVV rhs =
        q2rho_slot1(n, q, false) * rmat_trig(shift * z, n, q) * q2rho_slot1(n, q, true);
    return (lhs - rhs).sup_norm();
}

}  // namespace qkzr

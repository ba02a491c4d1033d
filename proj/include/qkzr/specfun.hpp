// q-series and elliptic special functions in complex double precision:
// q-Pochhammer symbols, the triple-product theta Theta(z;q), the first
// theta function theta_1(u;tau), the q-gamma function, the elliptic gamma
// function (double product), and Heine's 2phi1 series.
//
// All infinite products/series are truncated under a TruncationPolicy and
// return a SpecialValue carrying the tail estimate.

#pragma once

#include <algorithm>

#include "qkzr/core.hpp"

namespace qkzr {

struct infinite_t {};
inline constexpr infinite_t infinite{};

// prod_{j=0}^{order-1} (1 - a q^j)
inline SpecialValue qpochhammer(cplx a, cplx q, int order,
                                const TruncationPolicy& policy = {}) {
    if (order < 0) throw ConfigInvalid("qpochhammer: negative order");
    SpecialValue out;
    out.value = 1.0;
    cplx aq = a;
    for (int j = 0; j < order; ++j) {
        out.value *= (1.0 - aq);
        aq *= q;
        ++out.terms_used;
        if (out.terms_used > policy.max_terms)
            throw PolicyExhausted("qpochhammer: finite order exceeds max_terms");
    }
    return out;
}

// prod_{j>=0} (1 - a q^j), |q| < 1, truncated once |a q^j| < tail_tol.
inline SpecialValue qpochhammer(cplx a, cplx q, infinite_t,
                                const TruncationPolicy& policy = {}) {
    if (std::abs(q) >= 1.0)
        throw NonConvergent("qpochhammer: |q| >= 1 with infinite order");
    SpecialValue out;
    out.value = 1.0;
    cplx aq = a;
    for (int j = 0; j < policy.max_terms; ++j) {
        if (std::abs(aq) < policy.tail_tol) {
            out.est_error = std::abs(aq);
            return note_truncation(out);
        }
        out.value *= (1.0 - aq);
        aq *= q;
        ++out.terms_used;
    }
    throw PolicyExhausted("qpochhammer: tail did not reach tail_tol");
}

// Theta(z;q) = prod_{j>=0} (1 - z q^j)(1 - z^{-1} q^{j+1})(1 - q^{j+1})
inline SpecialValue theta(cplx z, cplx q, const TruncationPolicy& policy = {}) {
    if (z == cplx{0.0, 0.0}) throw ZeroArgument("theta: z = 0");
    if (std::abs(q) >= 1.0) throw NonConvergent("theta: |q| >= 1");
    const cplx zinv = 1.0 / z;
    SpecialValue out;
    out.value = 1.0;
    cplx zq = z;          // z q^j
    cplx ziq = zinv * q;  // z^{-1} q^{j+1}
    cplx qq = q;          // q^{j+1}
    for (int j = 0; j < policy.max_terms; ++j) {
        const double dev = std::max({std::abs(zq), std::abs(ziq), std::abs(qq)});
        if (dev < policy.tail_tol) {
            out.est_error = dev;
            return note_truncation(out);
        }
        out.value *= (1.0 - zq) * (1.0 - ziq) * (1.0 - qq);
        zq *= q;
        ziq *= q;
        qq *= q;
        ++out.terms_used;
    }
    throw PolicyExhausted("theta: tail did not reach tail_tol");
}

// theta_1(u;tau) through its product form,
//   -i e^{i pi tau / 4} e^{i pi u} Theta(e^{-2 pi i u}; e^{2 pi i tau}),
// valid for Im tau > 0. The prefactor exponentials are taken directly from
// (u, tau), not through a root of the nome.
inline SpecialValue theta1(cplx u, cplx tau, const TruncationPolicy& policy = {}) {
    if (tau.imag() <= 0.0) throw NonConvergent("theta1: Im tau <= 0");
    const cplx nome = std::exp(two_pi_i * tau);
    const cplx z = std::exp(-two_pi_i * u);
    SpecialValue out = theta(z, nome, policy);
    const cplx pref = cplx{0.0, -1.0} * std::exp(i_pi * tau / 4.0) * std::exp(i_pi * u);
    out.value *= pref;
    out.est_error *= std::abs(pref);
    return note_truncation(out);
}

// Gamma_q(a) = (1-q)^{1-a} prod_{j>=0} (1 - q^{j+1}) / (1 - q^{j+a})
inline SpecialValue qgamma(cplx a, cplx q, const TruncationPolicy& policy = {}) {
    if (std::abs(q) >= 1.0) throw NonConvergent("qgamma: |q| >= 1");
    SpecialValue out;
    out.value = cpower(1.0 - q, 1.0 - a);
    cplx qn = q;             // q^{j+1}
    cplx qa = cpower(q, a);  // q^{j+a}
    for (int j = 0; j < policy.max_terms; ++j) {
        const double dev = std::max(std::abs(qn), std::abs(qa));
        if (dev < policy.tail_tol) {
            out.est_error = dev;
            return note_truncation(out);
        }
        const cplx den = 1.0 - qa;
        if (std::abs(den) < pole_tol)
            throw PoleHit("qgamma: pole at a = " + std::to_string(-j));
        out.value *= (1.0 - qn) / den;
        qn *= q;
        qa *= q;
        ++out.terms_used;
    }
    throw PolicyExhausted("qgamma: tail did not reach tail_tol");
}

// Elliptic gamma function
//   Gamma_e(u,zeta,sigma) = prod_{j,l>=0}
//     (1 - e^{2 pi i((j+1)zeta + (l+1)sigma - u)}) / (1 - e^{2 pi i(j zeta + l sigma + u)})
// Both index directions need Im zeta > 0 and Im sigma > 0.
inline SpecialValue egamma(cplx u, cplx zeta, cplx sigma,
                           const TruncationPolicy& policy = {}) {
    if (zeta.imag() <= 0.0 || sigma.imag() <= 0.0)
        throw NonConvergent("egamma: needs Im zeta > 0 and Im sigma > 0");
    const cplx A = std::exp(two_pi_i * zeta);   // |A| < 1
    const cplx B = std::exp(two_pi_i * sigma);  // |B| < 1
    const cplx U = std::exp(two_pi_i * u);
    const cplx Uinv = 1.0 / U;

    SpecialValue out;
    out.value = 1.0;
    cplx Aj_num = A;  // A^{j+1}
    cplx Aj_den = 1.0;  // A^j
    for (int j = 0; j < policy.max_terms; ++j) {
        // Outer truncation: row deviation bounded by the l = 0 column.
        const double row_dev =
            std::max(std::abs(Aj_num * B * Uinv), std::abs(Aj_den * U));
        if (row_dev < policy.tail_tol) {
            out.est_error = std::max(out.est_error, row_dev);
            return note_truncation(out);
        }
        cplx num_f = Aj_num * B * Uinv;  // A^{j+1} B^{l+1} / U
        cplx den_f = Aj_den * U;         // A^j B^l U
        bool row_done = false;
        for (int l = 0; l < policy.max_terms; ++l) {
            const double dev = std::max(std::abs(num_f), std::abs(den_f));
            if (dev < policy.tail_tol) {
                out.est_error = std::max(out.est_error, dev);
                row_done = true;
                break;
            }
            const cplx den = 1.0 - den_f;
            if (std::abs(den) < pole_tol) throw PoleHit("egamma: denominator factor vanished");
            out.value *= (1.0 - num_f) / den;
            num_f *= B;
            den_f *= B;
            ++out.terms_used;
        }
        if (!row_done) throw PolicyExhausted("egamma: inner tail did not reach tail_tol");
        Aj_num *= A;
        Aj_den *= A;
    }
    throw PolicyExhausted("egamma: outer tail did not reach tail_tol");
}

// Heine's series with explicit numerator/denominator parameters,
//   2phi1(ar, as; at; p, z) = sum_n  (ar;p)_n (as;p)_n / ((at;p)_n (p;p)_n) z^n
// for |z| < 1. Used internally; the exponent form below is the public entry.
inline SpecialValue qhyper_2phi1_params(cplx ar, cplx as, cplx at, cplx p, cplx z,
                                        const TruncationPolicy& policy = {}) {
    if (std::abs(p) >= 1.0) throw NonConvergent("2phi1: |p| >= 1");
    if (std::abs(z) >= 1.0)
        throw NonConvergent("2phi1: |z| >= 1, use the analytic continuation");
    SpecialValue out;
    cplx term = 1.0;
    out.value = term;
    out.terms_used = 1;
    cplx rn = ar, sn = as, tn = at, pn = p;  // ar p^n, as p^n, at p^n, p^{n+1}
    for (int nterm = 0; nterm < policy.max_terms; ++nterm) {
        const cplx den = (1.0 - tn) * (1.0 - pn);
        if (std::abs(1.0 - tn) < pole_tol)
            throw PoleHit("2phi1: denominator parameter hit a pole");
        term *= (1.0 - rn) * (1.0 - sn) / den * z;
        rn *= p;
        sn *= p;
        tn *= p;
        pn *= p;
        if (std::abs(term) < policy.tail_tol) {
            out.est_error = std::abs(term);
            return note_truncation(out);
        }
        out.value += term;
        ++out.terms_used;
    }
    throw PolicyExhausted("2phi1: series did not reach tail_tol");
}

// 2phi1(p^r, p^s, p^t; p, z) with exponent inputs, all base-p powers on the
// fixed branch.
inline SpecialValue qhyper_2phi1(cplx r, cplx s, cplx t, cplx p, cplx z,
                                 const TruncationPolicy& policy = {}) {
    return qhyper_2phi1_params(cpower(p, r), cpower(p, s), cpower(p, t), p, z, policy);
}

}  // namespace qkzr

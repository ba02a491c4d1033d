// The exchange R-matrix on V tensor V obtained from the connection data of
// the weight-space q-difference systems: connection coefficients, the
// twisted unitary exchange matrix (three computational routes), the sigma
// coefficients, the scalar chi with its elliptic-gamma factorization, and
// the assembled operator in both its theta-function and product forms.

#pragma once

#include "qkzr/felder.hpp"
#include "qkzr/qkz.hpp"

namespace qkzr {

// ---------------------------------------------------------------------------
// Connection coefficients
// ---------------------------------------------------------------------------

// Quasimeromorphic solutions around z = infinity:
//   g1(z) = z^{-r} 2phi1(p^r, p^{r-t+1}, p^{r-s+1}; p, p^{t+1-r-s}/z)
//   g2(z) = z^{-s} 2phi1(p^{s-t+1}, p^s, p^{s-r+1}; p, p^{t+1-r-s}/z)
inline cplx g1_solution(cplx r, cplx s, cplx t, cplx p, cplx z,
                        const TruncationPolicy& policy = {}) {
    const cplx arg = cpower(p, t + 1.0 - r - s) / z;
    return cpower(z, -r) * qhyper_2phi1(r, r - t + 1.0, r - s + 1.0, p, arg, policy).value;
}

inline cplx g2_solution(cplx r, cplx s, cplx t, cplx p, cplx z,
                        const TruncationPolicy& policy = {}) {
    const cplx arg = cpower(p, t + 1.0 - r - s) / z;
    return cpower(z, -s) * qhyper_2phi1(s - t + 1.0, s, s - r + 1.0, p, arg, policy).value;
}

// Lambda(z) = Gp(t) Gp(s-r) / (Gp(s) Gp(t-r)) * Theta(z p^r; p)/Theta(z; p) * z^r
// Omega is the same with r and s interchanged.
inline std::pair<cplx, cplx> connection_coeffs(cplx r, cplx s, cplx t, cplx p, cplx z,
                                               const TruncationPolicy& policy = {}) {
    if (z == cplx{0.0, 0.0}) throw ZeroArgument("connection_coeffs: z = 0");
    const cplx gt = qgamma(t, p, policy).value;
    const cplx thz = theta(z, p, policy).value;
    if (std::abs(thz) < pole_tol) throw PoleHit("connection_coeffs: Theta(z;p) vanishes");
    auto coeff = [&](cplx r1, cplx s1) {
        // qgamma rejects true poles factor by factor; legitimately tiny
        // values at strongly negative arguments pass through.
        const cplx num = gt * qgamma(s1 - r1, p, policy).value;
        const cplx den = qgamma(s1, p, policy).value * qgamma(t - r1, p, policy).value;
        return num / den * theta(z * cpower(p, r1), p, policy).value / thz * cpower(z, r1);
    };
    return {coeff(r, s), coeff(s, r)};
}

// ---------------------------------------------------------------------------
// sigma coefficients
// ---------------------------------------------------------------------------

// sigma_{a,b} for an ordered pair: for a > b the closed form
//   q Gp(1 + 2vp + 1/k)/Gp(1 + 2vp) * Gp(-2vp)/Gp(-2vp + 1/k)
// with vp = varpi(lambda, b, a); the swapped order is the reciprocal.
inline cplx sigma_coeff(const Weight& lambda, int a, int b, const ModelParams& params,
                        const TruncationPolicy& policy = {}) {
    if (a == b) throw IndexOutOfRange("sigma_coeff: equal indices");
    const cplx p = params.p();
    const cplx ik = 1.0 / params.kappa;
    auto closed = [&](cplx vp2) {  // vp2 = 2 varpi
        const cplx num =
            qgamma(1.0 + vp2 + ik, p, policy).value * qgamma(-vp2, p, policy).value;
        const cplx den =
            qgamma(1.0 + vp2, p, policy).value * qgamma(-vp2 + ik, p, policy).value;
        return params.q * num / den;
    };
    if (a > b) return closed(2.0 * varpi(lambda, b, a, params));
    return 1.0 / closed(2.0 * varpi(lambda, a, b, params));
}

// ---------------------------------------------------------------------------
// Entry functions on a weight-space pair
// ---------------------------------------------------------------------------

// All scalar entry data for the pair (m, l), m < l.  alpha_ml multiplies
// E_mm ox E_ll, beta_ml multiplies E_lm ox E_ml, and so on; sigma_lm is the
// closed-form sigma for the (l, m) order.
struct ExchangeEntryData {
    int m = 0, l = 1;
    cplx alpha_ml, alpha_lm, beta_ml, beta_lm;
    cplx sigma_lm;
    cplx varpi;
};

enum class EntryForm { gamma_theta, theta_only, theta1_ratio };

// Entries as functions of z (gamma_theta, theta_only) or of u with
// z = e^{-2 pi i u} (theta1_ratio).
inline ExchangeEntryData exchange_entries(cplx u, const Weight& lambda, int m, int l,
                                          const ModelParams& params, EntryForm form,
                                          const TruncationPolicy& policy = {}) {
    if (m >= l) throw IndexOutOfRange("exchange_entries: requires m < l");
    const cplx p = params.p();
    const cplx q = params.q;
    const cplx ik = 1.0 / params.kappa;
    const cplx z = std::exp(-two_pi_i * u);

    ExchangeEntryData e;
    e.m = m;
    e.l = l;
    e.varpi = varpi(lambda, m, l, params);
    e.sigma_lm = sigma_coeff(lambda, l, m, params, policy);
    const cplx vp2 = 2.0 * e.varpi;

    const CorrelationSeries cs{e.varpi, params, policy};
    const cplx eps = cs.epsilon();
    const cplx ec1 = cs.eps_check1();
    const cplx ec2 = cs.eps_check2();

    auto Gp = [&](cplx x) { return qgamma(x, p, policy).value; };
    auto Th = [&](cplx w) { return theta(w, p, policy).value; };

    switch (form) {
        case EntryForm::gamma_theta: {
            const cplx thden = Th(z * q * q);
            if (std::abs(thden) < pole_tol) throw PoleHit("exchange_entries: Theta(z q^2)");
            e.alpha_ml = Gp(1.0 + vp2) * Gp(1.0 + vp2) /
                         (Gp(vp2 + 1.0 + ik) * Gp(vp2 + 1.0 - ik)) * Th(z) / thden * ec2;
            e.alpha_lm = Gp(1.0 - vp2) * Gp(-1.0 - vp2) /
                         (Gp(-vp2 + ik) * Gp(-vp2 - ik)) * Th(z * p) / thden * ec1 * z / eps;
            e.beta_ml = Gp(1.0 + vp2) * Gp(-1.0 - vp2) / (Gp(ik) * Gp(-ik)) *
                        Th(z * cpower(p, 1.0 + vp2)) / thden * ec2 * z / eps;
            e.beta_lm = Gp(1.0 - vp2) * Gp(1.0 + vp2) / (Gp(1.0 + ik) * Gp(1.0 - ik)) *
                        Th(z * cpower(p, -vp2)) / thden * ec1;
            break;
        }
        case EntryForm::theta_only: {
            const cplx thden = Th(z * q * q);
            const cplx thvp = Th(cpower(p, -vp2));
            if (std::abs(thden) < pole_tol || std::abs(thvp) < pole_tol)
                throw PoleHit("exchange_entries: theta denominator");
            e.beta_ml = -cpower(p, -vp2) * Th(q * q) / thvp * Th(z * cpower(p, vp2)) / thden;
            e.beta_lm = Th(q * q) / thvp * Th(z * cpower(p, -vp2)) / thden;
            e.alpha_ml =
                (1.0 / e.sigma_lm) * q * q * Th(cpower(p, -vp2) / (q * q)) / thvp * Th(z) / thden;
            e.alpha_lm = e.sigma_lm * Th(cpower(p, -vp2) * q * q) / thvp * Th(z) / thden;
            break;
        }
        case EntryForm::theta1_ratio: {
            const cplx tau = params.tau();
            const cplx gam = params.gamma();  // -tau/kappa
            // Dynamical arguments gamma (lambda+rho)_{a,b} = -+ 2 varpi tau.
            const cplx arg_ml = gam * shifted_diff(lambda, m, l, params.n);
            const cplx arg_lm = gam * shifted_diff(lambda, l, m, params.n);
            e.alpha_ml = (1.0 / e.sigma_lm) * felder_alpha(u, arg_ml, gam, tau, policy);
            e.alpha_lm = e.sigma_lm * felder_alpha(u, arg_lm, gam, tau, policy);
            e.beta_ml = felder_beta(u, arg_ml, gam, tau, policy);
            e.beta_lm = felder_beta(u, arg_lm, gam, tau, policy);
            break;
        }
    }
    return e;
}

// ---------------------------------------------------------------------------
// The twisted unitary exchange matrix on a pair block
// ---------------------------------------------------------------------------

// 2x2 matrix on the basis {v_m ox v_l, v_l ox v_m}; columns are images.
struct Bcheck2x2 {
    cplx a11, a12, a21, a22;
};

inline cplx h_ratio(cplx z, const ModelParams& params, const TruncationPolicy& policy) {
    return h_scalar(z, params, policy).value / h_scalar(1.0 / z, params, policy).value;
}

// Closed form of the twisted exchange matrix.
inline Bcheck2x2 bcheck_matrix(cplx z, const Weight& lambda, int m, int l,
                               const ModelParams& params,
                               const TruncationPolicy& policy = {}) {
    const ExchangeEntryData e =
        exchange_entries(std::log(z) / (-two_pi_i), lambda, m, l, params,
                         EntryForm::gamma_theta, policy);
    const cplx hr = h_ratio(z, params, policy);
    // Column 1 is the image of v_m ox v_l: (beta_lm, alpha_lm); column 2 the
    // image of v_l ox v_m: (alpha_ml, beta_ml).
    Bcheck2x2 b;
    b.a11 = hr * e.beta_lm;
    b.a21 = hr * e.alpha_lm;
    b.a12 = hr * e.alpha_ml;
    b.a22 = hr * e.beta_ml;
    return b;
}

// Scalar action on the one-dimensional weight space V_{m,m}.
inline cplx bcheck_scalar(cplx z, const ModelParams& params,
                          const TruncationPolicy& policy = {}) {
    return h_ratio(z, params, policy);
}

// Same matrix assembled from the connection coefficients of the two
// parameter sets, powers left uncancelled.
inline Bcheck2x2 bcheck_via_connection(cplx z, const Weight& lambda, int m, int l,
                                       const ModelParams& params,
                                       const TruncationPolicy& policy = {}) {
    const cplx p = params.p();
    const cplx ik = 1.0 / params.kappa;
    const cplx vp = varpi(lambda, m, l, params);
    const cplx vp2 = 2.0 * vp;
    const CorrelationSeries cs{vp, params, policy};
    const cplx eps = cs.epsilon();
    const cplx ec1 = cs.eps_check1();
    const cplx ec2 = cs.eps_check2();
    const cplx w = cpower(p, -ik) * z;
    const cplx hr = h_ratio(z, params, policy);

    const auto [lam1, om1] =
        connection_coeffs(1.0 + ik, ik - vp2, 1.0 - vp2, p, w, policy);
    const auto [lam2, om2] =
        connection_coeffs(ik, 1.0 + vp2 + ik, vp2 + 1.0, p, w, policy);

    Bcheck2x2 b;
    b.a11 = hr * ec1 * om1 * cpower(w, vp2 - ik);
    b.a21 = hr * ec1 * lam1 * cpower(w, -1.0 - ik) * z / eps;
    b.a12 = hr * ec2 * lam2 * cpower(w, -ik);
    b.a22 = hr * ec2 * om2 * cpower(w, -1.0 - vp2 - ik) * z / eps;
    return b;
}

// Same matrix recovered numerically: solve the 2x2 linear system expressing
// the intertwined expectation values through the direct ones.
inline Bcheck2x2 bcheck_via_series(cplx z, const Weight& lambda, int m, int l,
                                   const ModelParams& params,
                                   const TruncationPolicy& policy = {}) {
    const CorrelationSeries cs{varpi(lambda, m, l, params), params, policy};
    const cplx hr = h_ratio(z, params, policy);
    ComplexMatrix J(2);
    J.at(0, 0) = cs.j1(1, z);
    J.at(0, 1) = cs.j1(2, z);
    J.at(1, 0) = cs.j2(1, z);
    J.at(1, 1) = cs.j2(2, z);
    const ComplexMatrix Jinv = J.inverse();
    Bcheck2x2 b;
    for (int i = 1; i <= 2; ++i) {
        const std::vector<cplx> rhs{hr * cs.j1_check(i, z), hr * cs.j2_check(i, z)};
        const std::vector<cplx> col = Jinv.apply(rhs);
        if (i == 1) {
            b.a11 = col[0];
            b.a21 = col[1];
        } else {
            b.a12 = col[0];
            b.a22 = col[1];
        }
    }
    return b;
}

// ---------------------------------------------------------------------------
// chi: product route and elliptic-gamma route
// ---------------------------------------------------------------------------

struct ChiValue {
    cplx product_route;  // f(1/z) h(z)/h(1/z)
    cplx egamma_route;   // q^{n/(n+1)} times four elliptic gamma factors
    double difference = 0.0;
    int terms_used = 0;
    double est_error = 0.0;
};

inline SpecialValue chi_product(cplx u, const ModelParams& params,
                                const TruncationPolicy& policy = {}) {
    const cplx z = std::exp(-two_pi_i * u);
    SpecialValue f = f_scalar(1.0 / z, params.n, params.q, policy);
    SpecialValue hz = h_scalar(z, params, policy);
    SpecialValue hzi = h_scalar(1.0 / z, params, policy);
    SpecialValue out;
    out.value = f.value * hz.value / hzi.value;
    out.terms_used = f.terms_used + hz.terms_used + hzi.terms_used;
    out.est_error = std::max({f.est_error, hz.est_error, hzi.est_error});
    return out;
}

inline SpecialValue chi_egamma(cplx u, const ModelParams& params,
                               const TruncationPolicy& policy = {}) {
    const cplx tau = params.tau();
    const cplx gam = params.gamma();
    const cplx zeta = cplx(params.n + 1, 0.0) * gam;
    SpecialValue p1 = egamma(-u + tau, zeta, tau, policy);
    SpecialValue p2 = egamma(u, zeta, tau, policy);
    SpecialValue p3 = egamma(-u + tau + gam, zeta, tau, policy);
    SpecialValue p4 = egamma(u + gam, zeta, tau, policy);
    SpecialValue out;
    out.value = cpower(params.q, cplx(params.n, 0.0) / cplx(params.n + 1, 0.0)) * p1.value *
                p4.value / (p2.value * p3.value);
    out.terms_used = p1.terms_used + p2.terms_used + p3.terms_used + p4.terms_used;
    out.est_error = std::max({p1.est_error, p2.est_error, p3.est_error, p4.est_error});
    return out;
}

inline ChiValue chi(cplx u, const ModelParams& params, const TruncationPolicy& policy = {}) {
    const SpecialValue a = chi_product(u, params, policy);
    const SpecialValue b = chi_egamma(u, params, policy);
    ChiValue out;
    out.product_route = a.value;
    out.egamma_route = b.value;
    out.difference = std::abs(a.value - b.value);
    out.terms_used = a.terms_used + b.terms_used;
    out.est_error = std::max(a.est_error, b.est_error);
    return out;
}

// ---------------------------------------------------------------------------
// The assembled exchange operator
// ---------------------------------------------------------------------------

// Closed form: chi(u) times the theta1-ratio entries with dynamical argument
// gamma (lambda+rho)_{a,b} and the sigma factors on the alpha entries.
inline OperatorVV exchange_rmatrix(cplx u, const Weight& lambda, const ModelParams& params,
                                   const TruncationPolicy& policy = {}) {
    if (lambda.dim() != params.dim())
        throw LengthMismatch("exchange_rmatrix: weight dimension mismatch");
    const int n = params.n;
    const cplx chi_v = chi_egamma(u, params, policy).value;
    OperatorVV op(n);
    for (int m = 0; m <= n; ++m) op.at(m, m, m, m) = chi_v;
    for (int m = 0; m <= n; ++m)
        for (int l = m + 1; l <= n; ++l) {
            const ExchangeEntryData e =
                exchange_entries(u, lambda, m, l, params, EntryForm::theta1_ratio, policy);
            op.at(m, l, m, l) = chi_v * e.alpha_ml;
            op.at(l, m, l, m) = chi_v * e.alpha_lm;
            op.at(l, m, m, l) = chi_v * e.beta_ml;
            op.at(m, l, l, m) = chi_v * e.beta_lm;
        }
    return op;
}

// Product form: f(1/z) h(z)/h(1/z) times the gamma/theta entries, natively a
// function of z = e^{-2 pi i u}.
inline OperatorVV exchange_rmatrix_monodromy(cplx u, const Weight& lambda,
                                             const ModelParams& params,
                                             const TruncationPolicy& policy = {}) {
    if (lambda.dim() != params.dim())
        throw LengthMismatch("exchange_rmatrix_monodromy: weight dimension mismatch");
    const int n = params.n;
    const cplx z = std::exp(-two_pi_i * u);
    const cplx scale = f_scalar(1.0 / z, n, params.q, policy).value *
                       h_ratio(z, params, policy);
    OperatorVV op(n);
    for (int m = 0; m <= n; ++m) op.at(m, m, m, m) = scale;
    for (int m = 0; m <= n; ++m)
        for (int l = m + 1; l <= n; ++l) {
            const ExchangeEntryData e =
                exchange_entries(u, lambda, m, l, params, EntryForm::gamma_theta, policy);
            op.at(m, l, m, l) = scale * e.alpha_ml;
            op.at(l, m, l, m) = scale * e.alpha_lm;
            op.at(l, m, m, l) = scale * e.beta_ml;
            op.at(m, l, l, m) = scale * e.beta_lm;
        }
    return op;
}

// Unitary normalization B(z, lambda) = R_k / f(1/z) in the product form.
inline OperatorVV unitary_exchange(cplx z, const Weight& lambda, const ModelParams& params,
                                   const TruncationPolicy& policy = {}) {
    const int n = params.n;
    const cplx hr = h_ratio(z, params, policy);
    OperatorVV op(n);
    for (int m = 0; m <= n; ++m) op.at(m, m, m, m) = hr;
    const cplx u = std::log(z) / (-two_pi_i);
    for (int m = 0; m <= n; ++m)
        for (int l = m + 1; l <= n; ++l) {
            const ExchangeEntryData e =
                exchange_entries(u, lambda, m, l, params, EntryForm::gamma_theta, policy);
            op.at(m, l, m, l) = hr * e.alpha_ml;
            op.at(l, m, l, m) = hr * e.alpha_lm;
            op.at(l, m, m, l) = hr * e.beta_ml;
            op.at(m, l, l, m) = hr * e.beta_lm;
        }
    return op;
}

// Residual of B^{21}(z, lambda) B(z^{-1}, lambda) = 1.
inline double check_unitary_exchange(cplx z, const Weight& lambda, const ModelParams& params,
                                     const TruncationPolicy& policy = {}) {
    const OperatorVV lhs = unitary_exchange(z, lambda, params, policy).flip_conjugate() *
                           unitary_exchange(1.0 / z, lambda, params, policy);
    return (lhs - OperatorVV::identity(params.n)).sup_norm();
}

}  // namespace qkzr

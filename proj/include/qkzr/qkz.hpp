// Solutions of the modified q-difference system on the weight spaces V_{m,l}:
// reduction of the second-order equation to Heine form, analytic continuation
// of 2phi1 by the recurrence, the scalar h(z) and G(x,y), and the fusion /
// intertwined solution families with their residual checks.

#pragma once

#include <array>
#include <utility>

#include "qkzr/specfun.hpp"
#include "qkzr/trig_rmatrix.hpp"
#include "qkzr/weights.hpp"

namespace qkzr {

// ---------------------------------------------------------------------------
// Second-order difference equation  (A0 z + B0) f(p^2 z) + (A1 z + B1) f(p z)
//                                   + (A2 z + B2) f(z) = 0
// ---------------------------------------------------------------------------

struct DifferenceSystemData {
    cplx A0, A1, A2, B0, B1, B2;

    struct Branch {
        cplx u, r, s, t;
    };
    std::array<Branch, 2> branches{};
};

namespace detail {
// Roots of a X^2 + b X + c = 0; throws when the quadratic degenerates.
inline std::pair<cplx, cplx> quadratic_roots(cplx a, cplx b, cplx c) {
    if (std::abs(a) < pole_tol)
        throw DegenerateCoefficients("quadratic_roots: leading coefficient vanished");
    const cplx disc = std::sqrt(b * b - 4.0 * a * c);
    // Pick the sign that avoids cancellation in the first root.
    const cplx bp = (std::real(std::conj(b) * disc) >= 0.0) ? b + disc : b - disc;
    if (std::abs(bp) < pole_tol)
        throw DegenerateCoefficients("quadratic_roots: double root");
    const cplx x1 = -bp / (2.0 * a);
    const cplx x2 = c / (a * x1);
    return {x1, x2};
}
}  // namespace detail

// Exponent data (u, r, s, t) of the two solutions f(z) = z^u g(z), g regular
// at 0 with g(0) = 1, in terms of
//   p^{2u} B0 + p^u B1 + B2 = 0,   p^{2u} A0/A2 = p^{r+s},
//   p^u A1/A2 = -(p^r + p^s),      p^{2u} B0/B2 = p^{t-1}.
// Exponents are principal-branch representatives, determined modulo
// 2 pi i / log p.
inline DifferenceSystemData reduce_2nd_order(cplx A0, cplx A1, cplx A2, cplx B0,
                                             cplx B1, cplx B2, cplx p) {
    if (std::abs(A2) < pole_tol || std::abs(B2) < pole_tol || std::abs(B0) < pole_tol)
        throw DegenerateCoefficients("reduce_2nd_order: A2, B2, B0 must be nonzero");
    DifferenceSystemData d{A0, A1, A2, B0, B1, B2, {}};
    const cplx logp = std::log(p);
    auto [x1, x2] = detail::quadratic_roots(B0, B1, B2);
    const std::array<cplx, 2> xs{x1, x2};
    for (int k = 0; k < 2; ++k) {
        const cplx X = xs[static_cast<size_t>(k)];
        DifferenceSystemData::Branch br;
        br.u = std::log(X) / logp;
        const cplx prs = X * X * A0 / A2;        // p^{r+s}
        const cplx prps = -X * A1 / A2;          // p^r + p^s
        auto [y1, y2] = detail::quadratic_roots(cplx{1.0, 0.0}, -prps, prs);
        br.r = std::log(y1) / logp;
        br.s = std::log(y2) / logp;
        br.t = 1.0 + std::log(X * X * B0 / B2) / logp;
        d.branches[static_cast<size_t>(k)] = br;
    }
    return d;
}

// Residuals of the four defining relations for one exponent record.
inline double reduce_relations_residual(const DifferenceSystemData& d,
                                        const DifferenceSystemData::Branch& br, cplx p) {
    const cplx pu = cpower(p, br.u);
    double res = std::abs(pu * pu * d.B0 + pu * d.B1 + d.B2);
    res = std::max(res, std::abs(pu * pu * d.A0 / d.A2 - cpower(p, br.r + br.s)));
    res = std::max(res, std::abs(pu * d.A1 / d.A2 + cpower(p, br.r) + cpower(p, br.s)));
    res = std::max(res, std::abs(pu * pu * d.B0 / d.B2 - cpower(p, br.t - 1.0)));
    return res;
}

// ---------------------------------------------------------------------------
// Analytic continuation of 2phi1 outside the unit disc
// ---------------------------------------------------------------------------

// Heine's equation used as a three-term recurrence in z:
//   (p^{r+s} z - p^{t-1}) f(p^2 z) + (-(p^r+p^s) z + p^{t-1} + 1) f(p z)
//   + (z - 1) f(z) = 0.
// Seeds the series deep inside the disc and walks the chain z, p z, p^2 z
// back out, solving for f(z) at each step.
inline SpecialValue continue_2phi1(cplx r, cplx s, cplx t, cplx p, cplx z,
                                   const TruncationPolicy& policy = {},
                                   double seed_radius = 0.5) {
    if (std::abs(p) >= 1.0) throw NonConvergent("continue_2phi1: |p| >= 1");
    if (std::abs(z) <= seed_radius) return qhyper_2phi1(r, s, t, p, z, policy);

    const double absp = std::abs(p);
    int steps = static_cast<int>(std::ceil(std::log(seed_radius / std::abs(z)) / std::log(absp)));
    if (steps < 1) steps = 1;
    if (steps > policy.max_terms)
        throw NonConvergent("continue_2phi1: chain too long for the policy");

    // Chain points p^i z must stay away from the recurrence singularity z = 1.
    cplx w = z;
    for (int i = 0; i < steps; ++i) {
        if (std::abs(w - 1.0) < pole_tol)
            throw ChainBlocked("continue_2phi1: chain point at the singular coefficient");
        w *= p;
    }

    const cplx prs = cpower(p, r + s);
    const cplx prps = cpower(p, r) + cpower(p, s);
    const cplx pt1 = cpower(p, t - 1.0);

    cplx pz = 1.0;
    for (int i = 0; i < steps; ++i) pz *= p;  // p^{steps}
    SpecialValue seed1 = qhyper_2phi1(r, s, t, p, pz * z, policy);        // f(p^steps z)
    SpecialValue seed2 = qhyper_2phi1(r, s, t, p, pz * p * z, policy);    // f(p^{steps+1} z)

    SpecialValue out;
    out.terms_used = seed1.terms_used + seed2.terms_used;
    out.est_error = std::max(seed1.est_error, seed2.est_error);
    cplx f_pw = seed1.value;   // f(p w)
    cplx f_p2w = seed2.value;  // f(p^2 w)
    for (int i = steps - 1; i >= 0; --i) {
        cplx wi = z;
        for (int k = 0; k < i; ++k) wi *= p;
        const cplx fw =
            -((prs * wi - pt1) * f_p2w + (-(prps)*wi + pt1 + 1.0) * f_pw) / (wi - 1.0);
        f_p2w = f_pw;
        f_pw = fw;
        ++out.terms_used;
    }
    out.value = f_pw;
    return note_truncation(out);
}

// ---------------------------------------------------------------------------
// The scalar h(z) and the solution G(x,y) of the f-shift equations
// ---------------------------------------------------------------------------

// h(z) = prod_{l>=0} g(p^{l+1} z)^{-1}
inline SpecialValue h_scalar(cplx z, const ModelParams& params,
                             const TruncationPolicy& policy = {}) {
    const cplx p = params.p();
    SpecialValue out;
    out.value = 1.0;
    cplx w = p * z;
    for (int l = 0; l < policy.max_terms; ++l) {
        const SpecialValue gv = g_scalar(w, params.n, params.q, policy);
        out.terms_used += gv.terms_used;
        out.est_error = std::max(out.est_error, gv.est_error);
        const double dev = std::abs(gv.value - 1.0);
        if (dev < policy.tail_tol) {
            out.est_error = std::max(out.est_error, dev);
            return note_truncation(out);
        }
        out.value /= gv.value;
        w *= p;
    }
    throw PolicyExhausted("h_scalar: tail did not reach tail_tol");
}

// G(x,y) = (x/y)^{n/(2 kappa (n+1))} h(y/x)
inline cplx g_shift_scalar(cplx x, cplx y, const ModelParams& params,
                           const TruncationPolicy& policy = {}) {
    const cplx expo = cplx(params.n, 0.0) / (2.0 * params.kappa * cplx(params.n + 1, 0.0));
    return cpower(x / y, expo) * h_scalar(y / x, params, policy).value;
}

// ---------------------------------------------------------------------------
// Expectation-value series on V_{m,l}
// ---------------------------------------------------------------------------

// The four power-stripped component series J_i^{(b)} and their intertwined
// counterparts, all functions of z = x/y.  Everything depends on the pair
// (m,l) only through varpi.
struct CorrelationSeries {
    cplx vp;  // varpi
    ModelParams params;
    TruncationPolicy policy;

    cplx ik() const { return 1.0 / params.kappa; }
    cplx epsilon() const {
        const cplx q = params.q;
        const cplx den = 1.0 - cpower(params.p(), -(2.0 * vp + 1.0));
        if (std::abs(den) < pole_tol) throw NonGeneric("epsilon: 2 varpi + 1 degenerate");
        return (q - 1.0 / q) / den;
    }
    cplx eps_check1() const {
        const cplx q = params.q;
        const cplx den = cpower(params.p(), -2.0 * vp) - 1.0;
        if (std::abs(den) < pole_tol) throw NonGeneric("eps_check1: 2 varpi degenerate");
        return q * (q - 1.0 / q) / den;
    }
    cplx eps_check2() const { return params.q; }

    // Series in 1/z (expansions around z = infinity).
    cplx j1(int branch, cplx z) const {
        const cplx p = params.p();
        const cplx arg = cpower(p, 1.0 - ik()) / z;
        if (branch == 1)
            return qhyper_2phi1(ik(), ik() - 2.0 * vp, -2.0 * vp, p, arg, policy).value;
        return epsilon() / z *
               qhyper_2phi1(1.0 + ik(), 1.0 + 2.0 * vp + ik(), 2.0 * (vp + 1.0), p, arg, policy)
                   .value;
    }
    cplx j2(int branch, cplx z) const {
        const cplx p = params.p();
        const cplx q = params.q;
        const cplx pref = (branch == 1) ? cpower(p, -0.5 * ik())
                                        : cpower(p, -2.0 * vp - 0.5 * ik());
        return (pref * (q - z / q) * j1(branch, p * z) - (1.0 - z) * j1(branch, z)) /
               (q - 1.0 / q);
    }

    // Series in z (expansions around z = 0), with the epsilon-check factors.
    cplx j1_check(int branch, cplx z) const {
        const cplx p = params.p();
        const cplx arg = cpower(p, -ik()) * z;
        if (branch == 1)
            return eps_check1() *
                   qhyper_2phi1(1.0 + ik(), ik() - 2.0 * vp, 1.0 - 2.0 * vp, p, arg, policy)
                       .value;
        return eps_check2() *
               qhyper_2phi1(ik(), 1.0 + 2.0 * vp + ik(), 2.0 * vp + 1.0, p, arg, policy).value;
    }
    cplx j2_check(int branch, cplx z) const {
        const cplx p = params.p();
        const cplx q = params.q;
        const cplx pref = (branch == 1) ? cpower(p, -2.0 * vp + 0.5 * ik())
                                        : cpower(p, 0.5 * ik());
        return (pref * (q - z / q) * j1_check(branch, p * z) - (1.0 - z) * j1_check(branch, z)) /
               (q - 1.0 / q);
    }
};

// ---------------------------------------------------------------------------
// Solution records
// ---------------------------------------------------------------------------

enum class SolutionKind { fusion, intertwined };

// A solution of the two q-difference equations on V_{m,l}, evaluable at a
// point (a, b) of its own argument convention: fusion solutions take
// (a, b) = (x, y), intertwined ones (a, b) = (y, x).  eval() returns the
// expectation-normalized solution, eval_modified() the same solution without
// the scalar G factor.
class QkzSolution {
  public:
    struct Value {
        cplx c1{0.0, 0.0};  // component on v_m tensor v_l (or v_m tensor v_m)
        cplx c2{0.0, 0.0};  // component on v_l tensor v_m
    };

    SolutionKind kind;
    int m, l, branch;  // branch 1 starts from v_m tensor v_l, branch 2 from v_l tensor v_m
    Weight lambda;
    ModelParams params;
    TruncationPolicy policy;
    PairDeltas deltas;

    bool one_dimensional() const { return m == l; }

    cplx vp() const { return deltas.varpi; }
    cplx ik() const { return 1.0 / params.kappa; }

    CorrelationSeries series() const { return CorrelationSeries{vp(), params, policy}; }

    // psi_1 and the derived psi_2 for the fusion family (series in y/x).
    cplx psi1(cplx z) const {
        const cplx p = params.p();
        const cplx arg = cpower(p, 1.0 - ik()) / z;
        if (branch == 1)
            return cpower(z, vp() - 0.5 * ik()) *
                   qhyper_2phi1(ik(), ik() - 2.0 * vp(), -2.0 * vp(), p, arg, policy).value;
        return series().epsilon() * cpower(z, -vp() - 0.5 * ik()) / z *
               qhyper_2phi1(1.0 + ik(), 1.0 + 2.0 * vp() + ik(), 2.0 * (vp() + 1.0), p, arg,
                            policy)
                   .value;
    }
    cplx psi2(cplx z) const {
        const cplx q = params.q;
        return (cpower(params.p(), -vp()) * (q - z / q) * psi1(params.p() * z) -
                (1.0 - z) * psi1(z)) /
               (q - 1.0 / q);
    }

    // psi-dot: solutions expanded around x/y = 0, used by the intertwined family.
    cplx psidot1(cplx z) const {
        const cplx p = params.p();
        const cplx arg = cpower(p, -ik()) * z;
        if (branch == 1)
            return cpower(z, -vp() + 0.5 * ik()) *
                   qhyper_2phi1(1.0 + ik(), ik() - 2.0 * vp(), 1.0 - 2.0 * vp(), p, arg, policy)
                       .value;
        return cpower(z, vp() + 0.5 * ik()) *
               qhyper_2phi1(ik(), 1.0 + 2.0 * vp() + ik(), 2.0 * vp() + 1.0, p, arg, policy)
                   .value;
    }
    cplx psidot2(cplx z) const {
        const cplx q = params.q;
        return (cpower(params.p(), -vp()) * (q - z / q) * psidot1(params.p() * z) -
                (1.0 - z) * psidot1(z)) /
               (q - 1.0 / q);
    }

    // Intertwined components as functions of the internal variable z = x/y:
    // the flip composed with the R-matrix block applied to the psi-dot vector.
    Value check_components(cplx z) const {
        const cplx d1 = psidot1(z);
        const cplx d2 = psidot2(z);
        Value v;
        v.c1 = z * eta_coeff(z, params.q) * d1 + xi_coeff(z, params.q) * d2;
        v.c2 = xi_coeff(z, params.q) * d1 + eta_coeff(z, params.q) * d2;
        return v;
    }

    Value eval_modified(cplx a, cplx b) const {
        const cplx pre = cpower(a * b, -0.5 * deltas.delta);
        Value v;
        if (kind == SolutionKind::fusion) {
            if (one_dimensional()) {
                v.c1 = pre;
                return v;
            }
            const cplx z = a / b;
            v.c1 = pre * psi1(z);
            v.c2 = pre * psi2(z);
            return v;
        }
        // intertwined: (a, b) = (y, x)
        if (one_dimensional()) {
            v.c1 = pre;
            return v;
        }
        const cplx z = b / a;  // x/y
        const cplx epsc = (branch == 1) ? series().eps_check1() : series().eps_check2();
        Value c = check_components(z);
        v.c1 = pre * epsc * c.c1;
        v.c2 = pre * epsc * c.c2;
        return v;
    }

    // Full solution: G(a,b) times the modified one.
    Value eval(cplx a, cplx b) const {
        const cplx g = g_shift_scalar(a, b, params, policy);
        Value v = eval_modified(a, b);
        v.c1 *= g;
        v.c2 *= g;
        return v;
    }
};

inline QkzSolution fusion_solution(int m, int l, int branch, const Weight& lambda,
                                   const ModelParams& params,
                                   const TruncationPolicy& policy = {}) {
    if (m > l) throw IndexOutOfRange("fusion_solution: requires m <= l");
    if (branch != 1 && branch != 2) throw IndexOutOfRange("fusion_solution: branch is 1 or 2");
    QkzSolution s;
    s.kind = SolutionKind::fusion;
    s.m = m;
    s.l = l;
    s.branch = branch;
    s.lambda = lambda;
    s.params = params;
    s.policy = policy;
    s.deltas = pair_deltas(lambda, m, l, branch == 1 ? l : m, params);
    return s;
}

inline QkzSolution intertwined_solution(int m, int l, int branch, const Weight& lambda,
                                        const ModelParams& params,
                                        const TruncationPolicy& policy = {}) {
    QkzSolution s = fusion_solution(m, l, branch, lambda, params, policy);
    s.kind = SolutionKind::intertwined;
    return s;
}

// Residuals of the two q-difference equations
//   Psi(p a, b) = q^{nu}_{(1)} R(a/b) Psi(a, b)
//   Psi(a, p b) = R^{21}(p b / a) q^{nu}_{(2)} Psi(a, b)
// with nu = 2 lambda - (mu_m + mu_l) + 2 rho, evaluated on the solution
// without its G factor.
inline std::pair<double, double> qkz_residual(const QkzSolution& sol, cplx a, cplx b) {
    const ModelParams& pr = sol.params;
    const cplx p = pr.p();
    const cplx q = pr.q;

    const Weight nu = 2.0 * sol.lambda -
                      (weight_mu(sol.m, pr.n) + weight_mu(sol.l, pr.n)) +
                      2.0 * rho_weight(pr.n);
    const cplx qm = cpower(q, inner(nu, weight_mu(sol.m, pr.n)));
    const cplx ql = cpower(q, inner(nu, weight_mu(sol.l, pr.n)));

    const QkzSolution::Value v = sol.eval_modified(a, b);
    const QkzSolution::Value v1 = sol.eval_modified(p * a, b);
    const QkzSolution::Value v2 = sol.eval_modified(a, p * b);

    if (sol.one_dimensional()) {
        const double r1 = std::abs(v1.c1 - qm * v.c1);
        const double r2 = std::abs(v2.c1 - qm * v.c1);
        return {r1, r2};
    }

    const cplx z = a / b;
    const cplx t1_c1 = qm * (xi_coeff(z, q) * v.c1 + eta_coeff(z, q) * v.c2);
    const cplx t1_c2 = ql * (z * eta_coeff(z, q) * v.c1 + xi_coeff(z, q) * v.c2);
    const double r1 = std::max(std::abs(v1.c1 - t1_c1), std::abs(v1.c2 - t1_c2));

    const cplx w = p * b / a;
    const cplx t2_c1 = xi_coeff(w, q) * (ql * v.c1) + w * eta_coeff(w, q) * (qm * v.c2);
    const cplx t2_c2 = eta_coeff(w, q) * (ql * v.c1) + xi_coeff(w, q) * (qm * v.c2);
    const double r2 = std::max(std::abs(v2.c1 - t2_c1), std::abs(v2.c2 - t2_c2));
    return {r1, r2};
}

// Explicit exponent records of the two solution branches for the weight-space
// system: branch 1 is (-vp + 1/2k, 1/k + 1, 1/k - 2 vp, -2 vp + 1), branch 2
// is (vp + 1/2k, 1/k, 1/k + 2 vp + 1, 2 vp + 1).
inline DifferenceSystemData::Branch qkz_exponents(int branch, cplx vp, cplx kappa) {
    const cplx ik = 1.0 / kappa;
    if (branch == 1) return {-vp + 0.5 * ik, ik + 1.0, ik - 2.0 * vp, -2.0 * vp + 1.0};
    if (branch == 2) return {vp + 0.5 * ik, ik, ik + 2.0 * vp + 1.0, 2.0 * vp + 1.0};
    throw IndexOutOfRange("qkz_exponents: branch is 1 or 2");
}

// Coefficients of the second-order equation satisfied by psi_1:
//   (q^{-1} p z - q) psi(p^2 z) + (p^vp + p^{-vp} - (p^{vp+1} + p^{-vp}) z) psi(p z)
//   + (q z - q^{-1}) psi(z) = 0
inline DifferenceSystemData qkz_system(cplx vp, const ModelParams& params) {
    const cplx p = params.p();
    const cplx q = params.q;
    const cplx pvp = cpower(p, vp);
    DifferenceSystemData d;
    d.A0 = p / q;
    d.A1 = -(pvp * p + 1.0 / pvp);
    d.A2 = q;
    d.B0 = -q;
    d.B1 = pvp + 1.0 / pvp;
    d.B2 = -1.0 / q;
    return d;
}

}  // namespace qkzr

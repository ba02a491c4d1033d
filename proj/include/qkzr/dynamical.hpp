// Dynamical R-matrix families behind one evaluation interface: the theta
// solution, the exchange matrix, gauge-transformed stacks, the dynamical
// Yang-Baxter residual on V tensor V tensor V, the three-step equivalence
// pipeline, and the fusion matrix J(lambda).

#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "qkzr/exchange.hpp"
#include "qkzr/felder.hpp"

namespace qkzr {

enum class RMatrixKind { identity, trig, exchange, felder, gauged };

// A gauge record: exactly one of the three alternatives is active.
struct GaugeRecord {
    enum class Type { scalar, rescale, twoform } type;
    std::function<cplx(cplx)> scalar;                          // c(u)
    cplx a{1.0, 0.0}, b{1.0, 0.0};                             // rescale (a, b, mu)
    Weight mu;
    std::function<cplx(const Weight&, int, int)> phi;          // phi_{m,l}(lambda)
};

// Evaluable description of an R-matrix family with its dynamical step.
// Gauges are pushed onto a stack and applied outermost-first on evaluation;
// only rescaling changes the step (step -> step / b).
class RMatrixDescriptor {
  public:
    static RMatrixDescriptor make_identity(const ModelParams& params) {
        return RMatrixDescriptor(RMatrixKind::identity, params, cplx{1.0, 0.0});
    }
    static RMatrixDescriptor make_trig(const ModelParams& params) {
        return RMatrixDescriptor(RMatrixKind::trig, params, cplx{1.0, 0.0});
    }
    static RMatrixDescriptor make_exchange(const ModelParams& params) {
        return RMatrixDescriptor(RMatrixKind::exchange, params, cplx{1.0, 0.0});
    }
    static RMatrixDescriptor make_felder(const ModelParams& params) {
        return RMatrixDescriptor(RMatrixKind::felder, params, params.gamma());
    }

    RMatrixKind kind() const {
        return stack_.empty() ? base_ : RMatrixKind::gauged;
    }
    RMatrixKind base_kind() const { return base_; }
    cplx step() const { return step_; }
    const ModelParams& params() const { return params_; }
    const std::vector<GaugeRecord>& gauge_stack() const { return stack_; }

    RMatrixDescriptor with_scalar(std::function<cplx(cplx)> c) const {
        RMatrixDescriptor d = *this;
        GaugeRecord g;
        g.type = GaugeRecord::Type::scalar;
        g.scalar = std::move(c);
        d.stack_.push_back(std::move(g));
        return d;
    }
    RMatrixDescriptor with_rescale(cplx a, cplx b, const Weight& mu) const {
        if (a == cplx{0.0, 0.0} || b == cplx{0.0, 0.0})
            throw ConfigInvalid("gauge_rescale: a and b must be nonzero");
        RMatrixDescriptor d = *this;
        GaugeRecord g;
        g.type = GaugeRecord::Type::rescale;
        g.a = a;
        g.b = b;
        g.mu = mu;
        d.stack_.push_back(std::move(g));
        d.step_ = step_ / b;
        return d;
    }
    RMatrixDescriptor with_twoform(std::function<cplx(const Weight&, int, int)> phi) const {
        RMatrixDescriptor d = *this;
        GaugeRecord g;
        g.type = GaugeRecord::Type::twoform;
        g.phi = std::move(phi);
        d.stack_.push_back(std::move(g));
        return d;
    }

    OperatorVV evaluate(cplx u, const Weight& lambda,
                        const TruncationPolicy& policy = {}) const {
        return eval_level(static_cast<int>(stack_.size()), u, lambda, policy);
    }

  private:
    RMatrixDescriptor(RMatrixKind base, const ModelParams& params, cplx step)
        : base_(base), params_(params), step_(step) {}

    OperatorVV eval_level(int level, cplx u, const Weight& lambda,
                          const TruncationPolicy& policy) const {
        if (level == 0) return eval_base(u, lambda, policy);
        const GaugeRecord& g = stack_[static_cast<size_t>(level - 1)];
        switch (g.type) {
            case GaugeRecord::Type::scalar: {
                OperatorVV op = eval_level(level - 1, u, lambda, policy);
                op *= g.scalar(u);
                return op;
            }
            case GaugeRecord::Type::rescale: {
                Weight shifted = g.b * lambda;
                if (g.mu.dim() == shifted.dim()) shifted += g.mu;
                return eval_level(level - 1, g.a * u, shifted, policy);
            }
            case GaugeRecord::Type::twoform: {
                OperatorVV op = eval_level(level - 1, u, lambda, policy);
                const int n = params_.n;
                for (int m = 0; m <= n; ++m)
                    for (int l = 0; l <= n; ++l) {
                        if (m == l) continue;
                        const cplx f = g.phi(lambda, m, l);
                        if (f == cplx{0.0, 0.0})
                            throw PoleHit("gauge_twoform: phi vanished at the sample point");
                        op.at(m, l, m, l) *= f;
                    }
                return op;
            }
        }
        throw DomainError("RMatrixDescriptor: unreachable gauge type");
    }

    OperatorVV eval_base(cplx u, const Weight& lambda, const TruncationPolicy& policy) const {
        switch (base_) {
            case RMatrixKind::identity:
                return OperatorVV::identity(params_.n);
            case RMatrixKind::trig:
                return rmat_trig(std::exp(-two_pi_i * u), params_.n, params_.q);
            case RMatrixKind::exchange:
                return exchange_rmatrix(u, lambda, params_, policy);
            case RMatrixKind::felder:
                return felder_rmatrix(u, lambda, params_.gamma(), params_.tau(), params_.n,
                                      policy);
            case RMatrixKind::gauged:
                break;
        }
        throw DomainError("RMatrixDescriptor: invalid base kind");
    }

    RMatrixKind base_;
    ModelParams params_;
    cplx step_;
    std::vector<GaugeRecord> stack_;
};

inline RMatrixDescriptor gauge_scalar(const RMatrixDescriptor& r,
                                      std::function<cplx(cplx)> c) {
    return r.with_scalar(std::move(c));
}
inline RMatrixDescriptor gauge_rescale(const RMatrixDescriptor& r, cplx a, cplx b,
                                       const Weight& mu) {
    return r.with_rescale(a, b, mu);
}
inline RMatrixDescriptor gauge_twoform(const RMatrixDescriptor& r,
                                       std::function<cplx(const Weight&, int, int)> phi) {
    return r.with_twoform(std::move(phi));
}

// ---------------------------------------------------------------------------
// Dynamical Yang-Baxter residual
// ---------------------------------------------------------------------------

// Sup-norm of
//   R12(u1-u2, L - s h3) R13(u1-u3, L) R23(u2-u3, L - s h1)
//   - R23(u2-u3, L) R13(u1-u3, L - s h2) R12(u1-u2, L)
// where s is the descriptor's step and the spectator shift subtracts
// s mu_c when the spectator slot carries v_c.
inline double dqybe_residual(const RMatrixDescriptor& r, cplx u1, cplx u2, cplx u3,
                             const Weight& lambda, const TruncationPolicy& policy = {}) {
    const int n = r.params().n;
    const cplx s = r.step();
    const bool dynamical =
        r.base_kind() == RMatrixKind::exchange || r.base_kind() == RMatrixKind::felder;

    auto shifted = [&](cplx u, int c) {
        return r.evaluate(u, lambda - s * weight_mu(c, n), policy);
    };
    auto plain = [&](cplx u) { return r.evaluate(u, lambda, policy); };

    const ComplexMatrix lhs =
        embed_two_site(n, 1, 2, [&](int c) { return shifted(u1 - u2, c); }, dynamical) *
        (embed_two_site(n, 1, 3, [&](int) { return plain(u1 - u3); }, false) *
         embed_two_site(n, 2, 3, [&](int c) { return shifted(u2 - u3, c); }, dynamical));
    const ComplexMatrix rhs =
        embed_two_site(n, 2, 3, [&](int) { return plain(u2 - u3); }, false) *
        (embed_two_site(n, 1, 3, [&](int c) { return shifted(u1 - u3, c); }, dynamical) *
         embed_two_site(n, 1, 2, [&](int) { return plain(u1 - u2); }, false));
    return (lhs - rhs).sup_norm();
}

// ---------------------------------------------------------------------------
// Equivalence pipeline
// ---------------------------------------------------------------------------

// The three-step gauge stack carrying the exchange matrix to the theta
// solution: divide by chi, rescale (u, lambda) -> (u, lambda/gamma - rho),
// then cancel the sigma factors on the alpha entries.
inline RMatrixDescriptor equivalence_descriptor(const ModelParams& params,
                                                const TruncationPolicy& policy = {}) {
    const cplx gam = params.gamma();
    RMatrixDescriptor d = RMatrixDescriptor::make_exchange(params);
    d = d.with_scalar([params, policy](cplx u) {
        return 1.0 / chi_egamma(u, params, policy).value;
    });
    Weight minus_rho = rho_weight(params.n);
    minus_rho *= cplx{-1.0, 0.0};
    d = d.with_rescale(cplx{1.0, 0.0}, 1.0 / gam, minus_rho);
    d = d.with_twoform([params, policy, gam](const Weight& lam, int m, int l) {
        Weight w = (1.0 / gam) * lam;
        w -= rho_weight(params.n);
        return sigma_coeff(w, l, m, params, policy);
    });
    return d;
}

// Entrywise distance between the pipeline output and the theta solution.
inline double equivalence_pipeline(cplx u, const Weight& lambda, const ModelParams& params,
                                   const TruncationPolicy& policy = {}) {
    const OperatorVV gauged = equivalence_descriptor(params, policy).evaluate(u, lambda, policy);
    const OperatorVV target =
        felder_rmatrix(u, lambda, params.gamma(), params.tau(), params.n, policy);
    return (gauged - target).sup_norm();
}

// ---------------------------------------------------------------------------
// Fusion matrix
// ---------------------------------------------------------------------------

// J(lambda) = sum_{i,j} E_ii ox E_jj
//           + sum_{i<j} (q - q^{-1}) / (1 - q^{2(lambda_i - lambda_j + j - i)}) E_ji ox E_ij
inline OperatorVV fusion_matrix(const Weight& lambda, int n, cplx q) {
    if (lambda.dim() != n + 1) throw LengthMismatch("fusion_matrix: weight dimension mismatch");
    OperatorVV op = OperatorVV::identity(n);
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            const cplx expo = 2.0 * (lambda[i] - lambda[j] + cplx(j - i, 0.0));
            const cplx den = 1.0 - cpower(q, expo);
            if (std::abs(den) < pole_tol) throw PoleHit("fusion_matrix: resonant denominator");
            op.at(j, i, i, j) = (q - 1.0 / q) / den;
        }
    return op;
}

// Comparison record for the constant-term cross-check: the J(lambda) entry
// for the pair (m, l) against the degree-zero coefficient of the branch-1
// solution component on v_l ox v_m, extracted from the series by Richardson
// extrapolation at large |z|.
struct FusionConstantTerm {
    cplx j_entry;
    cplx series_constant;
    cplx ratio;
};

inline FusionConstantTerm fusion_constant_term(const Weight& lambda, int m, int l,
                                               const ModelParams& params,
                                               const TruncationPolicy& policy = {}) {
    if (m >= l) throw IndexOutOfRange("fusion_constant_term: requires m < l");
    const OperatorVV j = fusion_matrix(lambda, params.n, params.q);
    const CorrelationSeries cs{varpi(lambda, m, l, params), params, policy};
    auto t = [&](double zabs) {
        const cplx z{zabs, 0.17 * zabs};
        return h_scalar(1.0 / z, params, policy).value * cs.j2(1, z);
    };
    const cplx t1 = t(4.0e2), t2 = t(8.0e2), t3 = t(1.6e3);
    FusionConstantTerm out;
    out.j_entry = j.at(l, m, m, l);
    out.series_constant = (8.0 * t3 - 6.0 * t2 + t1) / 3.0;
    out.ratio = out.series_constant / out.j_entry;
    return out;
}

}  // namespace qkzr

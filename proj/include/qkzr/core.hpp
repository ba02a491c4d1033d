// Core types shared by every module: complex alias, error hierarchy,
// truncation policy for infinite series/products, and the fixed-branch
// complex power.

#pragma once

#include <cmath>
#include <limits>
#include <complex>
#include <stdexcept>
#include <string>

namespace qkzr {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// i*pi and 2*pi*i show up in every exponent convention; name them once.
inline const cplx i_pi{0.0, pi};
inline const cplx two_pi_i{0.0, 2.0 * pi};

// Any denominator factor smaller than this aborts with PoleHit instead of
// amplifying rounding noise into a huge value.
inline constexpr double pole_tol = 1e-9;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonConvergent : Error { using Error::Error; };
struct PolicyExhausted : Error { using Error::Error; };
struct ZeroArgument : Error { using Error::Error; };
struct PoleHit : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct ZeroKappa : Error { using Error::Error; };
struct DegenerateCoefficients : Error { using Error::Error; };
struct ChainBlocked : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct NonGeneric : Error { using Error::Error; };
struct ConfigInvalid : Error { using Error::Error; };
struct RegionViolation : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Truncation policy and tracked values
// ---------------------------------------------------------------------------

struct TruncationPolicy {
    int max_terms = 400;
    double tail_tol = 1e-16;

    TruncationPolicy() = default;
    TruncationPolicy(int terms, double tol) : max_terms(terms), tail_tol(tol) {
        if (terms < 1 || !(tol > 0.0))
            throw ConfigInvalid("TruncationPolicy requires max_terms >= 1 and tail_tol > 0");
    }

    // Companion policy used by the convergence contract: twice the budget,
    // a tenth of the tail tolerance.
    TruncationPolicy doubled() const { return TruncationPolicy(2 * max_terms, tail_tol / 10.0); }

    // Agreement bound of the convergence contract, floored at a few units of
    // machine epsilon: tails below the rounding unit are unobservable in
    // binary64, so the floor is the resolution limit, not a loosening.
    double doubling_tolerance() const {
        return 10.0 * std::max(tail_tol, 4.0 * std::numeric_limits<double>::epsilon());
    }
};

// A numeric result with the truncation diagnostics that produced it.
// est_error bounds the magnitude of the first neglected term (for series)
// or factor deviation (for products).
struct SpecialValue {
    cplx value{0.0, 0.0};
    double est_error = 0.0;
    int terms_used = 0;
};

// Optional per-thread sink aggregating truncation diagnostics across the
// special-function calls of a larger computation (reports embed the maxima).
struct TruncationAccumulator {
    int max_terms_used = 0;
    double max_est_error = 0.0;
};

inline thread_local TruncationAccumulator* truncation_sink = nullptr;

inline const SpecialValue& note_truncation(const SpecialValue& v) {
    if (truncation_sink) {
        truncation_sink->max_terms_used = std::max(truncation_sink->max_terms_used, v.terms_used);
        truncation_sink->max_est_error = std::max(truncation_sink->max_est_error, v.est_error);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Fixed-branch power
// ---------------------------------------------------------------------------

// z^a = exp(a Log z) with Log the principal branch (Im in (-pi, pi]).
// Every fractional power in the library goes through here so that identities
// can be checked at points where no branch cut is crossed.
inline cplx cpower(cplx z, cplx a) {
    if (z == cplx{0.0, 0.0}) throw ZeroArgument("cpower: zero base");
    if (a == cplx{0.0, 0.0}) return {1.0, 0.0};
    return std::exp(a * std::log(z));
}

inline double abs2(cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }

}  // namespace qkzr

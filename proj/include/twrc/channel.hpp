#ifndef TWRC_CHANNEL_HPP
#define TWRC_CHANNEL_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace twrc {

struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown by the rate-splitting constructors when called with p1 < p2.
struct orientation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a rate region fails its structural guarantees
// (unbounded sum rate, empty feasible set, too many constraints).
struct region_error : std::logic_error {
    using std::logic_error::logic_error;
};

/// Relay-to-users side of the channel. Omitted entirely when the relay
/// power is assumed high enough that the downlink never binds.
struct Downlink {
    double p0 = 0.0;  // relay transmit power
    double n1 = 1.0;  // noise power at user 1
    double n2 = 1.0;  // noise power at user 2

    friend bool operator==(const Downlink&, const Downlink&) = default;
};

/// Channel parameterization. All powers are linear (never dB).
struct ChannelParams {
    double p1 = 0.0;  // user 1 uplink power
    double p2 = 0.0;  // user 2 uplink power
    double n0 = 1.0;  // uplink noise power at the relay
    std::optional<Downlink> downlink{};

    friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

/// A point (R1, R2) in bits per channel use.
struct RatePair {
    double r1 = 0.0;
    double r2 = 0.0;

    double sum() const { return r1 + r2; }

    friend bool operator==(const RatePair&, const RatePair&) = default;
};

/// Gaussian point-to-point capacity, C(x) = 1/2 log2(1 + x).
/// Base-2 throughout: rates are in bits per channel use.
inline double capacity_c(double x) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::domain_error("capacity_c: SNR must be finite and >= 0");
    return 0.5 * std::log2(1.0 + x);
}

/// [x]+ = max{x, 0}. Accepts -inf (the log-of-zero sentinel) and maps it
/// to 0, so no non-finite value escapes the rate formulas.
inline double clamp_plus(double x) { return x > 0.0 ? x : 0.0; }

/// 1/2 log2(arg), clamped at zero; arg == 0 is the zero-power limit.
inline double half_log2_clamped(double arg) {
    if (arg <= 0.0) return 0.0;
    return clamp_plus(0.5 * std::log2(arg));
}

struct ValidatedParams {
    ChannelParams params;
    bool swap_needed = false;  // p2 > p1: rate-splitting callers must swap roles
};

/// Checks the channel invariants and reports whether the rate-splitting
/// schemes need the user roles exchanged. Pure; params pass through unchanged.
inline ValidatedParams validate(const ChannelParams& params) {
    auto check_power = [](double v, const char* name) {
        if (!std::isfinite(v)) throw validation_error(std::string(name) + " must be finite");
        if (v < 0.0) throw validation_error(std::string(name) + " must be >= 0");
    };
    auto check_noise = [](double v, const char* name) {
        if (!std::isfinite(v)) throw validation_error(std::string(name) + " must be finite");
        if (v <= 0.0) throw validation_error(std::string(name) + " must be > 0");
    };
    check_power(params.p1, "p1");
    check_power(params.p2, "p2");
    check_noise(params.n0, "n0");
    if (params.downlink) {
        check_power(params.downlink->p0, "p0");
        check_noise(params.downlink->n1, "n1");
        check_noise(params.downlink->n2, "n2");
    }
    return ValidatedParams{params, params.p2 > params.p1};
}

/// Relabels the users: p1 <-> p2 and, when present, n1 <-> n2.
inline ChannelParams swap_roles(const ChannelParams& params) {
    ChannelParams out = params;
    std::swap(out.p1, out.p2);
    if (out.downlink) std::swap(out.downlink->n1, out.downlink->n2);
    return out;
}

}  // namespace twrc

#endif  // TWRC_CHANNEL_HPP

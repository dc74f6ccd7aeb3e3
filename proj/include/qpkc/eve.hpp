#pragma once

// Eve models that act on pairs in flight. Experiments that drive them live
// in adversary.hpp.

#include <optional>
#include <string>
#include <string_view>

#include "qpkc/qmath.hpp"
#include "qpkc/random.hpp"

namespace qpkc {

enum class EveKind {
    InterceptResendFixed,
    InterceptResendRandom,
    ChannelGuess,
    CiphertextDistinguish,
};

struct EveStrategy {
    EveKind kind = EveKind::InterceptResendFixed;
    Axis axis = Axis::z();  // InterceptResendFixed only
    double coverage = 1.0;  // probability that a given pair is touched
    bool both_legs = false; // also measure Alice's particle

    bool intercepts() const {
        return kind == EveKind::InterceptResendFixed || kind == EveKind::InterceptResendRandom;
    }

    static EveStrategy intercept_fixed(Axis axis, double coverage = 1.0);
    static EveStrategy intercept_random(double coverage = 1.0);
};

// "intercept-resend" (fixed z), "intercept-resend-random", "channel-guess",
// "distinguish".
std::string_view to_string(EveKind kind);
std::optional<EveKind> parse_eve_kind(std::string_view name);

struct Interception {
    Axis axis;
    int label = 0;
    TwoQubitState forwarded;
};

// Measure-and-resend on Bob's particle (and Alice's when both_legs).
// Throws std::invalid_argument for non-intercepting strategies.
Interception intercept_pair(const TwoQubitState& s, const EveStrategy& strategy, RandomSource& rng);

inline TwoQubitState tamper_pair(const TwoQubitState& s, const EveStrategy& strategy, RandomSource& rng) {
    return intercept_pair(s, strategy, rng).forwarded;
}

}  // namespace qpkc

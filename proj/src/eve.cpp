#include "qpkc/eve.hpp"

#include <array>
#include <stdexcept>

namespace qpkc {
namespace {

constexpr std::array<std::string_view, 4> kEveNames = {
    "intercept-resend", "intercept-resend-random", "channel-guess", "distinguish",
};

}  // namespace

EveStrategy EveStrategy::intercept_fixed(Axis axis, double coverage) {
    EveStrategy s;
    s.kind = EveKind::InterceptResendFixed;
    s.axis = axis;
    s.coverage = coverage;
    return s;
}

EveStrategy EveStrategy::intercept_random(double coverage) {
    EveStrategy s;
    s.kind = EveKind::InterceptResendRandom;
    s.coverage = coverage;
    return s;
}

std::string_view to_string(EveKind kind) { return kEveNames[static_cast<std::size_t>(kind)]; }

std::optional<EveKind> parse_eve_kind(std::string_view name) {
    for (std::size_t i = 0; i < kEveNames.size(); ++i) {
        if (kEveNames[i] == name) {
            return static_cast<EveKind>(i);
        }
    }
    if (name == "intercept-resend-fixed") {
        return EveKind::InterceptResendFixed;
    }
    return std::nullopt;
}

Interception intercept_pair(const TwoQubitState& s, const EveStrategy& strategy, RandomSource& rng) {
    if (!strategy.intercepts()) {
        throw std::invalid_argument("intercept_pair: strategy does not intercept pairs");
    }
    Interception out;
    out.axis = strategy.kind == EveKind::InterceptResendFixed ? strategy.axis
                                                              : (rng.coin() ? Axis::x() : Axis::z());
    const Measurement bob = measure_one(s, out.axis, Party::Bob, rng);
    out.label = bob.label;
    out.forwarded = bob.collapsed;
    if (strategy.both_legs) {
        out.forwarded = measure_one(out.forwarded, out.axis, Party::Alice, rng).collapsed;
    }
    return out;
}

}  // namespace qpkc

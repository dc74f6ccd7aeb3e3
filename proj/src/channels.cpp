#include "qpkc/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qpkc/error.hpp"

namespace qpkc {
namespace {

constexpr double kR = 0.70710678118654752440;

constexpr std::array<std::string_view, 8> kChannelNames = {
    "Phi+", "Phi-", "Psi+", "Psi-", "phi+", "phi-", "psi+", "psi-",
};

constexpr std::array<std::string_view, 8> kGateNames = {
    "I", "H", "Z", "HZ", "X", "HX", "Y", "HY",
};

// Entries of a canonical channel's correlation matrix are exactly 0 or +-1.
double snap(double v) {
    for (double target : {-1.0, 0.0, 1.0}) {
        if (std::abs(v - target) <= kExactTol) {
            return target;
        }
    }
    return v;
}

}  // namespace

std::string_view to_string(ChannelId id) { return kChannelNames[static_cast<std::size_t>(id)]; }
std::string_view to_string(GateTag gate) { return kGateNames[static_cast<std::size_t>(gate)]; }

std::optional<ChannelId> parse_channel(std::string_view name) {
    for (std::size_t i = 0; i < kChannelNames.size(); ++i) {
        if (kChannelNames[i] == name) {
            return kAllChannels[i];
        }
    }
    return std::nullopt;
}

std::optional<GateTag> parse_gate(std::string_view name) {
    for (std::size_t i = 0; i < kGateNames.size(); ++i) {
        if (kGateNames[i] == name) {
            return kAllGates[i];
        }
    }
    return std::nullopt;
}

bool is_bell(ChannelId id) { return static_cast<int>(id) < 4; }

PlaneVector CorrelationMatrix::transpose_apply(PlaneVector a) const {
    return {a.x * xx + a.z * zx, a.x * xz + a.z * zz};
}

double CorrelationMatrix::bilinear(PlaneVector a, PlaneVector b) const {
    return a.x * (xx * b.x + xz * b.z) + a.z * (zx * b.x + zz * b.z);
}

TwoQubitState channel_state(ChannelId id) {
    using A = std::array<Complex, 4>;
    TwoQubitState s;
    switch (id) {
        case ChannelId::PhiPlus: s.amps = A{kR, 0.0, 0.0, kR}; break;
        case ChannelId::PhiMinus: s.amps = A{kR, 0.0, 0.0, -kR}; break;
        case ChannelId::PsiPlus: s.amps = A{0.0, kR, kR, 0.0}; break;
        case ChannelId::PsiMinus: s.amps = A{0.0, kR, -kR, 0.0}; break;
        case ChannelId::LPhiPlus: s.amps = A{0.5, 0.5, 0.5, -0.5}; break;
        case ChannelId::LPhiMinus: s.amps = A{0.5, 0.5, -0.5, 0.5}; break;
        case ChannelId::LPsiPlus: s.amps = A{0.5, -0.5, 0.5, 0.5}; break;
        case ChannelId::LPsiMinus: s.amps = A{0.5, -0.5, -0.5, -0.5}; break;
    }
    return s;
}

Operator2 gate_operator(GateTag gate) {
    switch (gate) {
        case GateTag::I: return identity2();
        case GateTag::H: return hadamard();
        case GateTag::Z: return pauli_z();
        case GateTag::HZ: return hadamard() * pauli_z();
        case GateTag::X: return pauli_x();
        case GateTag::HX: return hadamard() * pauli_x();
        case GateTag::Y: return pauli_y();
        case GateTag::HY: return hadamard() * pauli_y();
    }
    throw std::invalid_argument("gate_operator: unknown gate");
}

TwoQubitState create_channel(GateTag gate) {
    return apply_single(gate_operator(gate), channel_state(ChannelId::PhiPlus), Party::Alice);
}

ChannelId gate_to_channel(GateTag gate) {
    const TwoQubitState created = create_channel(gate);
    for (ChannelId id : kAllChannels) {
        if (std::abs(overlap(channel_state(id), created)) >= 1.0 - kAxisTol) {
            return id;
        }
    }
    throw InvariantError("gate_to_channel: gate " + std::string(to_string(gate)) +
                         " matches no canonical channel");
}

GateTag channel_to_gate(ChannelId id) {
    static const std::array<std::optional<GateTag>, 8> inverse = [] {
        std::array<std::optional<GateTag>, 8> t{};
        for (GateTag gate : kAllGates) {
            t[static_cast<std::size_t>(gate_to_channel(gate))] = gate;
        }
        return t;
    }();
    const auto& gate = inverse[static_cast<std::size_t>(id)];
    if (!gate) {
        throw InvariantError("channel_to_gate: no gate creates channel " + std::string(to_string(id)));
    }
    return *gate;
}

CorrelationMatrix correlation_matrix(ChannelId id) {
    const TwoQubitState s = channel_state(id);
    const Axis x = Axis::x();
    const Axis z = Axis::z();
    return {snap(expectation(s, x, x)), snap(expectation(s, x, z)), snap(expectation(s, z, x)),
            snap(expectation(s, z, z))};
}

GramMatrix gram_matrix() {
    GramMatrix g{};
    for (std::size_t i = 0; i < kAllChannels.size(); ++i) {
        for (std::size_t j = 0; j < kAllChannels.size(); ++j) {
            g[i][j] = std::norm(overlap(channel_state(kAllChannels[i]), channel_state(kAllChannels[j])));
        }
    }
    return g;
}

}  // namespace qpkc

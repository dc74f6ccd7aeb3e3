#pragma once

// The eight maximally entangled channels, their creation from |Phi+> by a
// gate on Alice's particle, and their in-plane correlation matrices.

#include <array>
#include <optional>
#include <string_view>

#include "qpkc/qmath.hpp"

namespace qpkc {

// Capital Phi/Psi are the Bell states; the L-prefixed ids are the mixed
// z/x-basis states phi+- = (|0,+> +- |1,->)/sqrt2, psi+- = (|0,-> +- |1,+>)/sqrt2.
enum class ChannelId {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
    LPhiPlus,
    LPhiMinus,
    LPsiPlus,
    LPsiMinus,
};

// Alice-side channel creators. Products act right to left: HZ = H * sigma_z.
enum class GateTag { I, H, Z, HZ, X, HX, Y, HY };

inline constexpr std::array<ChannelId, 8> kAllChannels = {
    ChannelId::PhiPlus,  ChannelId::PhiMinus,  ChannelId::PsiPlus,  ChannelId::PsiMinus,
    ChannelId::LPhiPlus, ChannelId::LPhiMinus, ChannelId::LPsiPlus, ChannelId::LPsiMinus,
};

inline constexpr std::array<GateTag, 8> kAllGates = {
    GateTag::I, GateTag::H, GateTag::Z, GateTag::HZ,
    GateTag::X, GateTag::HX, GateTag::Y, GateTag::HY,
};

// Canonical names used in key files and transcripts: "Phi+", "phi-", "HZ", ...
std::string_view to_string(ChannelId id);
std::string_view to_string(GateTag gate);
std::optional<ChannelId> parse_channel(std::string_view name);
std::optional<GateTag> parse_gate(std::string_view name);

// Uppercase channels correlate equal axes, lowercase channels swapped axes.
bool is_bell(ChannelId id);

// T_ij = <sigma_i (x) sigma_j>, i on Bob, j on Alice, i, j in {x, z}.
struct CorrelationMatrix {
    double xx = 0.0;
    double xz = 0.0;
    double zx = 0.0;
    double zz = 0.0;

    // T^T a: the Alice-side direction perfectly correlated with Bob's a.
    PlaneVector transpose_apply(PlaneVector a) const;
    // a^T T b.
    double bilinear(PlaneVector a, PlaneVector b) const;
};

TwoQubitState channel_state(ChannelId id);
Operator2 gate_operator(GateTag gate);
TwoQubitState create_channel(GateTag gate);

// Channel whose canonical state equals create_channel(gate) up to a global
// phase. Throws InvariantError if no channel matches.
ChannelId gate_to_channel(GateTag gate);
GateTag channel_to_gate(ChannelId id);

CorrelationMatrix correlation_matrix(ChannelId id);

using GramMatrix = std::array<std::array<double, 8>, 8>;

// |<b_i|b_j>|^2 over kAllChannels order.
GramMatrix gram_matrix();

}  // namespace qpkc

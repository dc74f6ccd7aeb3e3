#pragma once

#include "qpkc/channels.hpp"
#include "qpkc/keys.hpp"

namespace fixture {

struct TableRow {
    qpkc::ChannelId channel;
    qpkc::BaseOp op;
    double alice_phi;
    int sign;
};

// Alice's partner observable for each channel and Bob base operator at
// theta = 0, with the sign of the resulting correlation. Written by hand
// from the channel definitions.
inline constexpr double kZ = 0.0;
inline constexpr double kX = qpkc::kPi / 2;

inline constexpr TableRow kTableOne[16] = {
    {qpkc::ChannelId::PhiPlus, qpkc::BaseOp::Z, kZ, +1},   {qpkc::ChannelId::PhiPlus, qpkc::BaseOp::X, kX, +1},
    {qpkc::ChannelId::PhiMinus, qpkc::BaseOp::Z, kZ, +1},  {qpkc::ChannelId::PhiMinus, qpkc::BaseOp::X, kX, -1},
    {qpkc::ChannelId::PsiPlus, qpkc::BaseOp::Z, kZ, -1},   {qpkc::ChannelId::PsiPlus, qpkc::BaseOp::X, kX, +1},
    {qpkc::ChannelId::PsiMinus, qpkc::BaseOp::Z, kZ, -1},  {qpkc::ChannelId::PsiMinus, qpkc::BaseOp::X, kX, -1},
    {qpkc::ChannelId::LPhiPlus, qpkc::BaseOp::Z, kX, +1},  {qpkc::ChannelId::LPhiPlus, qpkc::BaseOp::X, kZ, +1},
    {qpkc::ChannelId::LPhiMinus, qpkc::BaseOp::Z, kX, +1}, {qpkc::ChannelId::LPhiMinus, qpkc::BaseOp::X, kZ, -1},
    {qpkc::ChannelId::LPsiPlus, qpkc::BaseOp::Z, kX, -1},  {qpkc::ChannelId::LPsiPlus, qpkc::BaseOp::X, kZ, +1},
    {qpkc::ChannelId::LPsiMinus, qpkc::BaseOp::Z, kX, -1}, {qpkc::ChannelId::LPsiMinus, qpkc::BaseOp::X, kZ, -1},
};

inline qpkc::SecretParams single(qpkc::ChannelId c, qpkc::BaseOp op, double theta) {
    qpkc::SecretParams p;
    p.n = 1;
    p.channels = {c};
    p.gates = {qpkc::channel_to_gate(c)};
    p.base_ops = {op};
    p.thetas = {theta};
    return p;
}

}  // namespace fixture

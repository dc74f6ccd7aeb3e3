#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "qpkc/channels.hpp"
#include "qpkc/cli.hpp"
#include "qpkc/error.hpp"
#include "qpkc/keys.hpp"
#include "qpkc/protocol.hpp"

namespace qpkc {
namespace {

struct TableRow {
    ChannelId channel;
    BaseOp op;
    BaseOp partner;
    int sign;
};

// Alice's partner operator and correlation sign for each channel and Bob
// operator at theta = 0.
constexpr TableRow kTableI[] = {
    {ChannelId::PhiPlus, BaseOp::Z, BaseOp::Z, 1},    {ChannelId::PhiPlus, BaseOp::X, BaseOp::X, 1},
    {ChannelId::PhiMinus, BaseOp::Z, BaseOp::Z, 1},   {ChannelId::PhiMinus, BaseOp::X, BaseOp::X, -1},
    {ChannelId::PsiPlus, BaseOp::Z, BaseOp::Z, -1},   {ChannelId::PsiPlus, BaseOp::X, BaseOp::X, 1},
    {ChannelId::PsiMinus, BaseOp::Z, BaseOp::Z, -1},  {ChannelId::PsiMinus, BaseOp::X, BaseOp::X, -1},
    {ChannelId::LPhiPlus, BaseOp::Z, BaseOp::X, 1},   {ChannelId::LPhiPlus, BaseOp::X, BaseOp::Z, 1},
    {ChannelId::LPhiMinus, BaseOp::Z, BaseOp::X, 1},  {ChannelId::LPhiMinus, BaseOp::X, BaseOp::Z, -1},
    {ChannelId::LPsiPlus, BaseOp::Z, BaseOp::X, -1},  {ChannelId::LPsiPlus, BaseOp::X, BaseOp::Z, 1},
    {ChannelId::LPsiMinus, BaseOp::Z, BaseOp::X, -1}, {ChannelId::LPsiMinus, BaseOp::X, BaseOp::Z, -1},
};

class Battery {
public:
    explicit Battery(std::ostream& out) : out_(out) {}

    void check(bool ok, const std::string& what) {
        out_ << (ok ? "  ok    " : "  FAIL  ") << what << '\n';
        failures_ += ok ? 0 : 1;
    }

    std::ostream& out() { return out_; }
    int failures() const { return failures_; }

private:
    std::ostream& out_;
    int failures_ = 0;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

SecretParams single(ChannelId channel, BaseOp op, double theta) {
    SecretParams p;
    p.n = 1;
    p.channels = {channel};
    p.gates = {channel_to_gate(channel)};
    p.base_ops = {op};
    p.thetas = {theta};
    return p;
}

void table_one(Battery& b) {
    b.out() << "Channel table (theta = 0):\n";
    for (const TableRow& row : kTableI) {
        const PrivateKey k = derive_private_key(single(row.channel, row.op, 0.0));
        const Axis expected = row.partner == BaseOp::Z ? Axis::z() : Axis::x();
        const bool ok = std::abs(k.axes[0].phi() - expected.phi()) <= kExactTol && k.corr_signs[0] == row.sign;
        b.check(ok, std::string(to_string(row.channel)) + "  Bob " + std::string(to_string(row.op)) +
                        " -> Alice " + std::string(to_string(row.partner)) + ", sign " +
                        (row.sign > 0 ? "+1" : "-1"));
    }
}

void determinism_sweep(Battery& b) {
    RandomSource rng(20240611);
    double worst = 0.0;
    double literal_min = 1.0;
    std::size_t literal_failures = 0;
    constexpr int kTriples = 1000;
    for (int t = 0; t < kTriples; ++t) {
        const ChannelId ch = kAllChannels[rng.below(8)];
        const BaseOp op = rng.coin() ? BaseOp::X : BaseOp::Z;
        const double theta = rng.uniform(0.0, kTwoPi);
        const SecretParams p = single(ch, op, theta);
        const PublicKey pub = derive_public_key(p);
        const PrivateKey priv = derive_private_key(p);
        const double e = expectation(channel_state(ch), pub.axes[0], priv.axes[0]);
        worst = std::max(worst, std::abs(1.0 - std::abs(e)));
        const LiteralAxisReport lit = compare_literal_axis(p, 0);
        literal_min = std::min(literal_min, std::abs(lit.literal_correlation));
        literal_failures += std::abs(lit.literal_correlation) < 1.0 - kAxisTol ? 1 : 0;
    }
    b.check(worst < kAxisTol, "determinism sweep: " + std::to_string(kTriples) +
                                  " triples, max |1 - |E|| = " + fmt(worst));
    b.out() << "  info  literal conjugation of the table partner: " << literal_failures << "/" << kTriples
            << " triples lose perfect correlation, min |E| = " << fmt(literal_min) << '\n';
}

void channel_checks(Battery& b) {
    double worst_reduced = 0.0;
    double worst_orth = 0.0;
    for (ChannelId id : kAllChannels) {
        const TwoQubitState s = channel_state(id);
        const Operator2 half = Operator2(0.5, 0.0, 0.0, 0.5);
        worst_reduced = std::max(worst_reduced, reduced_single(s, Party::Bob).max_abs_diff(half));
        worst_reduced = std::max(worst_reduced, reduced_single(s, Party::Alice).max_abs_diff(half));
        const CorrelationMatrix t = correlation_matrix(id);
        worst_orth = std::max({worst_orth, std::abs(t.xx * t.xx + t.zx * t.zx - 1.0),
                               std::abs(t.xz * t.xz + t.zz * t.zz - 1.0),
                               std::abs(t.xx * t.xz + t.zx * t.zz)});
    }
    b.check(worst_reduced <= kExactTol, "maximal entanglement: max |rho - I/2| = " + fmt(worst_reduced));
    b.check(worst_orth <= kExactTol, "orthogonal correlation blocks: max |T^T T - I| = " + fmt(worst_orth));

    bool bijection = true;
    std::array<bool, 8> seen{};
    for (GateTag g : kAllGates) {
        const auto idx = static_cast<std::size_t>(gate_to_channel(g));
        bijection = bijection && !seen[idx];
        seen[idx] = true;
    }
    b.check(bijection, "gate -> channel map is a bijection");

    const GramMatrix g = gram_matrix();
    bool symmetric = true;
    bool unit_diag = true;
    double max_off = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        unit_diag = unit_diag && std::abs(g[i][i] - 1.0) <= kExactTol;
        for (std::size_t j = 0; j < 8; ++j) {
            symmetric = symmetric && std::abs(g[i][j] - g[j][i]) <= kExactTol;
            if (i != j) {
                max_off = std::max(max_off, g[i][j]);
            }
        }
    }
    b.check(symmetric && unit_diag && max_off > 0.0,
            "Gram matrix symmetric, unit diagonal, max off-diagonal = " + fmt(max_off));
}

void chsh_checks(Battery& b) {
    const double honest = exact_chsh(channel_state(ChannelId::PhiPlus));
    b.check(std::abs(honest - 2.0 * std::sqrt(2.0)) <= kExactTol, "exact honest CHSH S = " + fmt(honest));
    double worst = 0.0;
    for (double phi : {0.0, kPi / 2.0, kPi / 4.0, 1.0}) {
        for (int label = 0; label < 2; ++label) {
            const Projection pr = project(channel_state(ChannelId::PhiPlus), Axis(phi), Party::Bob, label);
            worst = std::max(worst, exact_chsh(pr.collapsed));
        }
    }
    b.check(worst <= 2.0 + kExactTol, "intercept-resend pairs: max exact CHSH S = " + fmt(worst));
}

}  // namespace

int run_selftest(std::ostream& out) {
    Battery b(out);
    try {
        table_one(b);
        out << "Invariants:\n";
        determinism_sweep(b);
        channel_checks(b);
        chsh_checks(b);
    } catch (const InvariantError& e) {
        b.check(false, std::string("invariant error: ") + e.what());
    }
    out << (b.failures() == 0 ? "selftest passed\n" : "selftest FAILED: " + std::to_string(b.failures()) + " check(s)\n");
    return b.failures() == 0 ? kExitOk : kExitInvariant;
}

}  // namespace qpkc

#pragma once

// Asymmetric key generation. The public key is the list of Bob-side
// measurement axes U^-1 m U; the private key is the list of Alice-side axes
// perfectly (anti-)correlated with them on the secret channel string.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qpkc/channels.hpp"
#include "qpkc/qmath.hpp"
#include "qpkc/random.hpp"

namespace qpkc {

enum class BaseOp { Z, X };

std::string_view to_string(BaseOp op);
Operator2 base_operator(BaseOp op);

struct SecretParams {
    std::size_t n = 0;
    std::vector<ChannelId> channels;
    std::vector<GateTag> gates;
    std::vector<BaseOp> base_ops;
    std::vector<double> thetas;

    // Throws std::invalid_argument on length or gate/channel mismatch.
    void validate() const;
};

struct PublicKey {
    std::size_t n = 0;
    std::vector<Axis> axes;
};

struct PrivateKey {
    std::size_t n = 0;
    std::vector<Axis> axes;
    std::vector<int> corr_signs;
    SecretParams params;
};

SecretParams gen_secret_params(std::size_t n, RandomSource& rng);

PublicKey derive_public_key(const SecretParams& p);

// Half-turn canonical form: the axis line with angle in [0, pi) and the sign
// that restores the original orientation. Angles within 1e-12 of the
// boundary snap to the line's representative.
AxisSign fold_half_turn(Axis axis);

// Alice-side axis for one position: the line of T^T a for the channel's
// correlation matrix T and Bob's axis a. Throws InvariantError if the
// resulting correlation is not +-1 within 1e-10.
AxisSign derive_private_axis(ChannelId channel, Axis public_axis);

PrivateKey derive_private_key(const SecretParams& p);

// Diagnostic: the axis obtained by conjugating the channel-table partner operator
// with the same rotation as the public key, and how well it correlates.
struct LiteralAxisReport {
    Axis literal_axis;
    Axis repaired_axis;
    double literal_correlation = 0.0;   // <sigma_pub (x) sigma_literal>
    double repaired_correlation = 0.0;  // <sigma_pub (x) sigma_repaired> * sign
    double line_angle = 0.0;            // angle between the two axis lines, in [0, pi/2]
};

LiteralAxisReport compare_literal_axis(const SecretParams& p, std::size_t i);

std::string serialize_public(const PublicKey& k);
PublicKey parse_public(std::string_view text);

std::string serialize_private(const PrivateKey& k);
PrivateKey parse_private(std::string_view text);

// Hex digest of the public axes, for display.
std::string fingerprint(const PublicKey& k);

}  // namespace qpkc

#include "qpkc/keys.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json_util.hpp"
#include "qpkc/error.hpp"

namespace qpkc {

using detail::Json;

std::string_view to_string(BaseOp op) { return op == BaseOp::Z ? "Z" : "X"; }

Operator2 base_operator(BaseOp op) { return op == BaseOp::Z ? pauli_z() : pauli_x(); }

void SecretParams::validate() const {
    if (n == 0) {
        throw std::invalid_argument("SecretParams: n must be at least 1");
    }
    if (channels.size() != n || gates.size() != n || base_ops.size() != n || thetas.size() != n) {
        throw std::invalid_argument("SecretParams: all strings must have length n");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (gate_to_channel(gates[i]) != channels[i]) {
            throw std::invalid_argument("SecretParams: gate " + std::string(to_string(gates[i])) +
                                        " does not realize channel " +
                                        std::string(to_string(channels[i])) + " at position " +
                                        std::to_string(i));
        }
        if (!std::isfinite(thetas[i])) {
            throw std::invalid_argument("SecretParams: non-finite theta");
        }
    }
}

SecretParams gen_secret_params(std::size_t n, RandomSource& rng) {
    if (n == 0) {
        throw std::invalid_argument("gen_secret_params: n must be at least 1");
    }
    SecretParams p;
    p.n = n;
    p.channels.reserve(n);
    p.gates.reserve(n);
    p.base_ops.reserve(n);
    p.thetas.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ChannelId channel = kAllChannels[rng.below(kAllChannels.size())];
        p.channels.push_back(channel);
        p.gates.push_back(channel_to_gate(channel));
        p.base_ops.push_back(rng.coin() ? BaseOp::X : BaseOp::Z);
        p.thetas.push_back(rng.uniform(0.0, kTwoPi));
    }
    return p;
}

PublicKey derive_public_key(const SecretParams& p) {
    p.validate();
    PublicKey k;
    k.n = p.n;
    k.axes.reserve(p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
        k.axes.push_back(axis_of(conjugate(base_operator(p.base_ops[i]), rotation(p.thetas[i]))).axis);
    }
    return k;
}

AxisSign fold_half_turn(Axis axis) {
    double phi = axis.phi();
    if (phi > kTwoPi - kExactTol) {
        return {Axis(0.0), 1};
    }
    if (phi >= kPi - kExactTol) {
        phi = std::max(0.0, phi - kPi);
        return {Axis(phi), -1};
    }
    return {axis, 1};
}

AxisSign derive_private_axis(ChannelId channel, Axis public_axis) {
    const CorrelationMatrix t = correlation_matrix(channel);
    const PlaneVector a{public_axis.nx(), public_axis.nz()};
    const AxisSign folded = fold_half_turn(axis_from_vector(t.transpose_apply(a)));
    const double corr = expectation(channel_state(channel), public_axis, folded.axis);
    if (std::abs(std::abs(corr) - 1.0) > kAxisTol || std::lround(corr) != folded.sign) {
        throw InvariantError("derive_private_axis: correlation " + std::to_string(corr) +
                             " on channel " + std::string(to_string(channel)) +
                             " is not deterministic");
    }
    return folded;
}

PrivateKey derive_private_key(const SecretParams& p) {
    const PublicKey pub = derive_public_key(p);
    PrivateKey k;
    k.n = p.n;
    k.params = p;
    k.axes.reserve(p.n);
    k.corr_signs.reserve(p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
        const AxisSign b = derive_private_axis(p.channels[i], pub.axes[i]);
        k.axes.push_back(b.axis);
        k.corr_signs.push_back(b.sign);
    }
    return k;
}

LiteralAxisReport compare_literal_axis(const SecretParams& p, std::size_t i) {
    p.validate();
    if (i >= p.n) {
        throw std::out_of_range("compare_literal_axis: index out of range");
    }
    const Operator2 u = rotation(p.thetas[i]);
    const Axis pub = axis_of(conjugate(base_operator(p.base_ops[i]), u)).axis;
    BaseOp partner = p.base_ops[i];
    if (!is_bell(p.channels[i])) {
        partner = partner == BaseOp::Z ? BaseOp::X : BaseOp::Z;
    }
    const Axis literal = axis_of(conjugate(base_operator(partner), u)).axis;
    const AxisSign repaired = derive_private_axis(p.channels[i], pub);
    const TwoQubitState s = channel_state(p.channels[i]);

    LiteralAxisReport r;
    r.literal_axis = literal;
    r.repaired_axis = repaired.axis;
    r.literal_correlation = expectation(s, pub, literal);
    r.repaired_correlation = expectation(s, pub, repaired.axis) * repaired.sign;
    const double d = std::fmod(std::abs(literal.phi() - repaired.axis.phi()), kPi);
    r.line_angle = std::min(d, kPi - d);
    return r;
}

namespace {

Json axes_json(const std::vector<Axis>& axes) {
    Json arr = Json::array();
    for (const Axis& a : axes) {
        arr.push_back(a.phi());
    }
    return arr;
}

std::vector<Axis> parse_axes(const Json& doc, std::size_t n) {
    const Json& arr = detail::as_array(detail::field(doc, "axes", ""), n, "/axes");
    std::vector<Axis> axes;
    axes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string path = "/axes/" + std::to_string(i);
        const double phi = detail::as_double(arr[i], path);
        if (!(phi >= 0.0 && phi < kTwoPi)) {
            throw ParseError("axis angle outside [0, 2pi)", path);
        }
        axes.emplace_back(phi);
    }
    return axes;
}

std::size_t parse_n(const Json& doc) {
    const std::uint64_t n = detail::as_count(detail::field(doc, "n", ""), "/n");
    if (n == 0) {
        throw ParseError("n must be at least 1", "/n");
    }
    return static_cast<std::size_t>(n);
}

}  // namespace

std::string serialize_public(const PublicKey& k) {
    Json doc;
    doc["version"] = 1;
    doc["kind"] = "public";
    doc["n"] = k.n;
    doc["axes"] = axes_json(k.axes);
    return doc.dump(2) + "\n";
}

PublicKey parse_public(std::string_view text) {
    const Json doc = detail::parse_document(text);
    detail::check_header(doc, "public");
    PublicKey k;
    k.n = parse_n(doc);
    k.axes = parse_axes(doc, k.n);
    return k;
}

std::string serialize_private(const PrivateKey& k) {
    Json doc;
    doc["version"] = 1;
    doc["kind"] = "private";
    doc["n"] = k.n;
    doc["axes"] = axes_json(k.axes);
    Json channels = Json::array();
    Json gates = Json::array();
    Json ops = Json::array();
    Json thetas = Json::array();
    for (std::size_t i = 0; i < k.params.n; ++i) {
        channels.push_back(std::string(to_string(k.params.channels[i])));
        gates.push_back(std::string(to_string(k.params.gates[i])));
        ops.push_back(std::string(to_string(k.params.base_ops[i])));
        thetas.push_back(k.params.thetas[i]);
    }
    doc["channels"] = channels;
    doc["gates"] = gates;
    doc["base_ops"] = ops;
    doc["thetas"] = thetas;
    doc["corr_signs"] = k.corr_signs;
    return doc.dump(2) + "\n";
}

PrivateKey parse_private(std::string_view text) {
    const Json doc = detail::parse_document(text);
    detail::check_header(doc, "private");
    PrivateKey k;
    k.n = parse_n(doc);
    k.axes = parse_axes(doc, k.n);

    SecretParams& p = k.params;
    p.n = k.n;
    const Json& channels = detail::as_array(detail::field(doc, "channels", ""), k.n, "/channels");
    const Json& gates = detail::as_array(detail::field(doc, "gates", ""), k.n, "/gates");
    const Json& ops = detail::as_array(detail::field(doc, "base_ops", ""), k.n, "/base_ops");
    const Json& thetas = detail::as_array(detail::field(doc, "thetas", ""), k.n, "/thetas");
    const Json& signs = detail::as_array(detail::field(doc, "corr_signs", ""), k.n, "/corr_signs");
    for (std::size_t i = 0; i < k.n; ++i) {
        const std::string idx = "/" + std::to_string(i);
        const std::string cname = detail::as_string(channels[i], "/channels" + idx);
        const auto channel = parse_channel(cname);
        if (!channel) {
            throw ParseError("unknown channel '" + cname + "'", "/channels" + idx);
        }
        const std::string gname = detail::as_string(gates[i], "/gates" + idx);
        const auto gate = parse_gate(gname);
        if (!gate) {
            throw ParseError("unknown gate '" + gname + "'", "/gates" + idx);
        }
        const std::string oname = detail::as_string(ops[i], "/base_ops" + idx);
        if (oname != "Z" && oname != "X") {
            throw ParseError("unknown base operator '" + oname + "'", "/base_ops" + idx);
        }
        const std::int64_t sign = detail::as_int(signs[i], "/corr_signs" + idx);
        if (sign != 1 && sign != -1) {
            throw ParseError("correlation sign must be +1 or -1", "/corr_signs" + idx);
        }
        p.channels.push_back(*channel);
        p.gates.push_back(*gate);
        p.base_ops.push_back(oname == "Z" ? BaseOp::Z : BaseOp::X);
        p.thetas.push_back(detail::as_double(thetas[i], "/thetas" + idx));
        k.corr_signs.push_back(static_cast<int>(sign));
    }
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), "/gates");
    }

    const PublicKey pub = derive_public_key(p);
    for (std::size_t i = 0; i < k.n; ++i) {
        const double corr = expectation(channel_state(p.channels[i]), pub.axes[i], k.axes[i]);
        if (std::abs(corr - k.corr_signs[i]) > kAxisTol) {
            throw ParseError("private axis is not correlated with its public axis",
                             "/axes/" + std::to_string(i));
        }
    }
    return k;
}

std::string fingerprint(const PublicKey& k) {
    // FNV-1a over the binary64 bit patterns.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const Axis& a : k.axes) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(a.phi());
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qpkc

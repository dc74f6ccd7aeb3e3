#include "qpkc/cipher.hpp"

#include <cmath>

#include "json_util.hpp"
#include "qpkc/error.hpp"

namespace qpkc {

using detail::Json;

PlainQubit PlainQubit::real(double alpha, double beta) {
    const OneQubitState s = OneQubitState::from_amplitudes(alpha, beta);
    return {s.amps[0], s.amps[1]};
}

PlainQubit PlainQubit::complex(Complex alpha, Complex beta) {
    const OneQubitState s = OneQubitState::from_amplitudes(alpha, beta);
    return {s.amps[0], s.amps[1]};
}

PlainQubit PlainQubit::random_real(RandomSource& rng) {
    const double t = rng.uniform(0.0, kTwoPi);
    return {Complex{std::cos(t), 0.0}, Complex{std::sin(t), 0.0}};
}

OneQubitState PlainQubit::state() const {
    OneQubitState s;
    s.amps = {alpha, beta};
    return s;
}

PlainQubit PlainQubit::from_state(const OneQubitState& s) { return {s.amps[0], s.amps[1]}; }

std::string_view to_string(MessageOrigin origin) {
    switch (origin) {
        case MessageOrigin::Qubits: return "qubits";
        case MessageOrigin::Bits: return "bits";
        case MessageOrigin::Bytes: return "bytes";
    }
    return "qubits";
}

void Ciphertext::check_metadata() const {
    if (n == 0 || block_count == 0) {
        throw DecodeError("ciphertext: n and block_count must be positive");
    }
    if (qubits.size() != n * block_count) {
        throw DecodeError("ciphertext: " + std::to_string(qubits.size()) + " qubits but n * block_count = " +
                          std::to_string(n * block_count));
    }
    if (pad_len >= n) {
        throw DecodeError("ciphertext: pad_len must be smaller than n");
    }
}

std::vector<GateChoice> choose_gates(const std::vector<int>& labels) {
    std::vector<GateChoice> gates;
    gates.reserve(labels.size());
    for (int label : labels) {
        gates.push_back(label == 0 ? GateChoice::H : GateChoice::Z);
    }
    return gates;
}

std::vector<GateChoice> choose_gates(const OutcomeString& kb) { return choose_gates(kb.labels); }

const Operator2& gate_matrix(GateChoice g) {
    static const Operator2 h = hadamard();
    static const Operator2 z = pauli_z();
    return g == GateChoice::H ? h : z;
}

BlockedMessage block_message(const Message& msg, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("block_message: n must be at least 1");
    }
    if (msg.qubits.empty()) {
        throw std::invalid_argument("block_message: empty message");
    }
    BlockedMessage out;
    const std::size_t blocks = (msg.size() + n - 1) / n;
    out.pad_len = blocks * n - msg.size();
    for (std::size_t b = 0; b < blocks; ++b) {
        Message block;
        block.origin = msg.origin;
        for (std::size_t i = b * n; i < (b + 1) * n; ++i) {
            block.qubits.push_back(i < msg.size() ? msg.qubits[i] : PlainQubit{});
        }
        out.blocks.push_back(std::move(block));
    }
    return out;
}

Message unblock_message(const BlockedMessage& blocked) {
    Message out;
    for (const Message& b : blocked.blocks) {
        out.origin = b.origin;
        out.qubits.insert(out.qubits.end(), b.qubits.begin(), b.qubits.end());
    }
    if (blocked.pad_len > out.qubits.size()) {
        throw std::invalid_argument("unblock_message: pad longer than message");
    }
    out.qubits.resize(out.qubits.size() - blocked.pad_len);
    return out;
}

Ciphertext encrypt(const Message& msg, const std::vector<GateChoice>& gates, std::size_t block_len) {
    const BlockedMessage blocked = block_message(msg, block_len);
    const std::size_t total = blocked.blocks.size() * block_len;
    if (gates.size() < total) {
        throw std::invalid_argument("encrypt: " + std::to_string(gates.size()) + " gates for " +
                                    std::to_string(total) + " blocked qubits");
    }
    Ciphertext c;
    c.n = block_len;
    c.block_count = blocked.blocks.size();
    c.pad_len = blocked.pad_len;
    c.origin = msg.origin;
    c.qubits.reserve(total);
    std::size_t pos = 0;
    for (const Message& block : blocked.blocks) {
        for (const PlainQubit& q : block.qubits) {
            c.qubits.push_back(apply(gate_matrix(gates[pos]), q.state()));
            ++pos;
        }
    }
    return c;
}

Ciphertext encrypt(const Message& msg, const std::vector<GateChoice>& gates) {
    return encrypt(msg, gates, gates.size());
}

Message decrypt(const Ciphertext& c, const std::vector<GateChoice>& gates) {
    c.check_metadata();
    if (gates.size() < c.qubits.size()) {
        throw DecodeError("decrypt: " + std::to_string(gates.size()) + " gates for " +
                          std::to_string(c.qubits.size()) + " ciphertext qubits");
    }
    BlockedMessage blocked;
    blocked.pad_len = c.pad_len;
    for (std::size_t b = 0; b < c.block_count; ++b) {
        Message block;
        block.origin = c.origin;
        for (std::size_t i = b * c.n; i < (b + 1) * c.n; ++i) {
            const Operator2& g = gate_matrix(gates[i]);
            block.qubits.push_back(PlainQubit::from_state(apply(g.adjoint(), c.qubits[i])));
        }
        blocked.blocks.push_back(std::move(block));
    }
    Message out = unblock_message(blocked);
    if (out.origin != MessageOrigin::Qubits) {
        // Computational-basis readout is deterministic on exact basis states.
        out = encode_bits(decode_bits(out));
        out.origin = c.origin;
    }
    return out;
}

Message encode_bits(const std::vector<int>& bits) {
    Message m;
    m.origin = MessageOrigin::Bits;
    m.qubits.reserve(bits.size());
    for (int b : bits) {
        if (b != 0 && b != 1) {
            throw std::invalid_argument("encode_bits: bits must be 0 or 1");
        }
        m.qubits.push_back(b == 0 ? PlainQubit{Complex{1.0, 0.0}, Complex{}}
                                  : PlainQubit{Complex{}, Complex{1.0, 0.0}});
    }
    return m;
}

Message encode_bits(std::string_view bits) {
    std::vector<int> v;
    v.reserve(bits.size());
    for (char ch : bits) {
        if (ch != '0' && ch != '1') {
            throw std::invalid_argument(std::string("encode_bits: unexpected character '") + ch + "'");
        }
        v.push_back(ch - '0');
    }
    return encode_bits(v);
}

std::vector<int> decode_bits(const Message& msg) {
    std::vector<int> bits;
    bits.reserve(msg.size());
    for (std::size_t i = 0; i < msg.size(); ++i) {
        const double p0 = std::norm(msg.qubits[i].alpha);
        const double p1 = std::norm(msg.qubits[i].beta);
        if (std::sqrt(p1) <= kAxisTol && std::abs(p0 - 1.0) <= kAxisTol) {
            bits.push_back(0);
        } else if (std::sqrt(p0) <= kAxisTol && std::abs(p1 - 1.0) <= kAxisTol) {
            bits.push_back(1);
        } else {
            throw DecodeError("decode_bits: qubit " + std::to_string(i) +
                              " is not a computational-basis state");
        }
    }
    return bits;
}

Message encode_bytes(const std::vector<unsigned char>& bytes) {
    std::vector<int> bits;
    bits.reserve(bytes.size() * 8);
    for (unsigned char byte : bytes) {
        for (int k = 7; k >= 0; --k) {
            bits.push_back((byte >> k) & 1);
        }
    }
    Message m = encode_bits(bits);
    m.origin = MessageOrigin::Bytes;
    return m;
}

std::vector<unsigned char> decode_bytes(const Message& msg) {
    const std::vector<int> bits = decode_bits(msg);
    if (bits.size() % 8 != 0) {
        throw DecodeError("decode_bytes: bit count is not a multiple of 8");
    }
    std::vector<unsigned char> bytes(bits.size() / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        bytes[i / 8] = static_cast<unsigned char>(bytes[i / 8] | (bits[i] << (7 - i % 8)));
    }
    return bytes;
}

double fidelity(const PlainQubit& a, const PlainQubit& b) { return std::norm(overlap(a.state(), b.state())); }

double ciphertext_overlap(const PlainQubit& psi) {
    const OneQubitState s = psi.state();
    return std::norm(overlap(apply(pauli_z(), s), apply(hadamard(), s)));
}

std::string serialize_ciphertext(const Ciphertext& c) {
    Json doc;
    doc["version"] = 1;
    doc["kind"] = "ciphertext";
    doc["n"] = c.n;
    doc["block_count"] = c.block_count;
    doc["pad_len"] = c.pad_len;
    doc["origin"] = std::string(to_string(c.origin));
    Json qubits = Json::array();
    for (const OneQubitState& q : c.qubits) {
        qubits.push_back(Json::array({q.amps[0].real(), q.amps[0].imag(), q.amps[1].real(), q.amps[1].imag()}));
    }
    doc["qubits"] = qubits;
    return doc.dump(2) + "\n";
}

Ciphertext parse_ciphertext(std::string_view text) {
    const Json doc = detail::parse_document(text);
    detail::check_header(doc, "ciphertext");
    Ciphertext c;
    c.n = detail::as_count(detail::field(doc, "n", ""), "/n");
    c.block_count = detail::as_count(detail::field(doc, "block_count", ""), "/block_count");
    c.pad_len = detail::as_count(detail::field(doc, "pad_len", ""), "/pad_len");
    const std::string origin = detail::as_string(detail::field(doc, "origin", ""), "/origin");
    if (origin == "qubits") {
        c.origin = MessageOrigin::Qubits;
    } else if (origin == "bits") {
        c.origin = MessageOrigin::Bits;
    } else if (origin == "bytes") {
        c.origin = MessageOrigin::Bytes;
    } else {
        throw ParseError("unknown origin '" + origin + "'", "/origin");
    }
    const Json& qubits = detail::field(doc, "qubits", "");
    if (!qubits.is_array()) {
        throw ParseError("expected an array", "/qubits");
    }
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        const std::string path = "/qubits/" + std::to_string(i);
        const Json& q = detail::as_array(qubits[i], 4, path);
        Complex a0{detail::as_double(q[0], path + "/0"), detail::as_double(q[1], path + "/1")};
        Complex a1{detail::as_double(q[2], path + "/2"), detail::as_double(q[3], path + "/3")};
        try {
            c.qubits.push_back(OneQubitState::from_amplitudes(a0, a1));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), path);
        }
    }
    try {
        c.check_metadata();
    } catch (const DecodeError& e) {
        throw ParseError(e.what(), "/");
    }
    return c;
}

}  // namespace qpkc

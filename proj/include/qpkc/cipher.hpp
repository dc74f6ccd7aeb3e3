#pragma once

// Key-dependent encryption of qubit strings: label 0 of Bob's outcome selects
// the Hadamard gate, label 1 the Z gate. Messages longer than the key are
// split into blocks of n qubits and the last block is padded with |0>.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qpkc/protocol.hpp"
#include "qpkc/qmath.hpp"
#include "qpkc/random.hpp"

namespace qpkc {

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PlainQubit {
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};

    // Real amplitudes, normalized within 1e-12.
    static PlainQubit real(double alpha, double beta);
    // Complex amplitudes must be requested explicitly.
    static PlainQubit complex(Complex alpha, Complex beta);

    static PlainQubit random_real(RandomSource& rng);

    OneQubitState state() const;
    static PlainQubit from_state(const OneQubitState& s);
};

enum class MessageOrigin { Qubits, Bits, Bytes };

std::string_view to_string(MessageOrigin origin);

struct Message {
    std::vector<PlainQubit> qubits;
    MessageOrigin origin = MessageOrigin::Qubits;

    std::size_t size() const { return qubits.size(); }
};

enum class GateChoice { H, Z };

struct Ciphertext {
    std::vector<OneQubitState> qubits;
    std::size_t n = 0;
    std::size_t block_count = 0;
    std::size_t pad_len = 0;
    MessageOrigin origin = MessageOrigin::Qubits;

    // Throws DecodeError if the counts disagree.
    void check_metadata() const;
};

std::vector<GateChoice> choose_gates(const std::vector<int>& labels);
std::vector<GateChoice> choose_gates(const OutcomeString& kb);

const Operator2& gate_matrix(GateChoice g);

struct BlockedMessage {
    std::vector<Message> blocks;
    std::size_t pad_len = 0;
};

// Throws std::invalid_argument for an empty message or n = 0.
BlockedMessage block_message(const Message& msg, std::size_t n);
Message unblock_message(const BlockedMessage& blocked);

// Blocks msg into key-length blocks and applies gates position by position
// across the concatenated blocks. gates must cover every padded position.
Ciphertext encrypt(const Message& msg, const std::vector<GateChoice>& gates, std::size_t block_len);

// Single block: block_len = gates.size().
Ciphertext encrypt(const Message& msg, const std::vector<GateChoice>& gates);

// Applies the adjoint gates and strips the padding. Bit and byte messages
// must decode to computational-basis states; otherwise DecodeError.
Message decrypt(const Ciphertext& c, const std::vector<GateChoice>& gates);

Message encode_bits(const std::vector<int>& bits);
Message encode_bits(std::string_view bits);  // '0'/'1' characters
std::vector<int> decode_bits(const Message& msg);

Message encode_bytes(const std::vector<unsigned char>& bytes);
std::vector<unsigned char> decode_bytes(const Message& msg);

// |<a|b>|^2.
double fidelity(const PlainQubit& a, const PlainQubit& b);

// |<psi| Z^dagger H |psi>|^2: overlap between the two possible ciphertexts.
double ciphertext_overlap(const PlainQubit& psi);

std::string serialize_ciphertext(const Ciphertext& c);
Ciphertext parse_ciphertext(std::string_view text);

}  // namespace qpkc

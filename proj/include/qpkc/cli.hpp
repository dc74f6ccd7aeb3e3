#pragma once

// Command-line front end and the end-to-end pipelines it drives.
//
// Exit status contract: 0 success, 1 configuration or input error,
// 2 internal invariant failure, 3 eavesdropping detected.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpkc/cipher.hpp"
#include "qpkc/eve.hpp"
#include "qpkc/keys.hpp"
#include "qpkc/protocol.hpp"

namespace qpkc {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitInvariant = 2,
    kExitEavesdropped = 3,
};

struct RunConfig {
    std::size_t n = 8;
    std::size_t m = 0;  // 0: default pool size
    std::uint64_t seed = 0;
    double fraction = kDefaultFraction;
    double threshold = kDefaultThreshold;
    std::optional<EveStrategy> eve;
};

struct RunResult {
    Exchange exchange;
    std::optional<Ciphertext> ciphertext;  // absent when the check failed
    std::optional<Message> recovered;
    std::vector<double> fidelities;
    bool inference_exact = false;
    bool recovered_exactly = false;
};

// Phases I-III: exchange, Bob encrypts with gates from K_B, Alice decrypts
// with gates inferred from K_A.
RunResult simulate_run(const RunConfig& config, const Message& message);

// File-level halves. Bob measures fresh |Phi+> pairs along the public axes
// (one pair per padded message qubit) and encrypts; Alice's halves of the
// measured pairs form the share.
struct EncryptResult {
    Ciphertext ciphertext;
    std::vector<OneQubitState> share;
};

EncryptResult bob_encrypt(const PublicKey& key, const Message& message, std::uint64_t seed);

// Alice applies her channel gates to the share, measures along the private
// axes, infers K_B and decrypts. Throws DecodeError on mismatch.
Message alice_decrypt(const PrivateKey& key, const Ciphertext& c, const std::vector<OneQubitState>& share,
                      std::uint64_t seed);

std::string serialize_share(const std::vector<OneQubitState>& share, std::size_t n);
std::vector<OneQubitState> parse_share(std::string_view text, std::size_t expected_n);

std::string serialize_qubit_message(const Message& m);
Message parse_qubit_message(std::string_view text, bool allow_complex);

// Runs the invariant battery, printing a report. Returns kExitOk or
// kExitInvariant.
int run_selftest(std::ostream& out);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qpkc

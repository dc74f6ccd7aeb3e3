#include <cmath>
#include <stdexcept>

#include "json_util.hpp"
#include "qpkc/channels.hpp"
#include "qpkc/cli.hpp"
#include "qpkc/error.hpp"

namespace qpkc {

using detail::Json;

RunResult simulate_run(const RunConfig& config, const Message& message) {
    if (message.qubits.empty()) {
        throw std::invalid_argument("simulate_run: empty message");
    }
    ExchangeConfig ec;
    ec.n = config.n;
    ec.m = config.m;
    ec.blocks = (message.size() + config.n - 1) / config.n;
    ec.fraction = config.fraction;
    ec.threshold = config.threshold;
    ec.eve = config.eve;

    RunResult r;
    r.exchange = run_exchange(ec, config.seed);
    const Exchange& ex = r.exchange;
    if (ex.check.verdict == Verdict::Eavesdropped) {
        return r;
    }
    r.inference_exact = ex.inferred.labels == ex.kb.labels;
    r.ciphertext = encrypt(message, choose_gates(ex.kb), config.n);
    r.recovered = decrypt(*r.ciphertext, choose_gates(ex.inferred));

    r.recovered_exactly = r.recovered->size() == message.size();
    if (r.recovered_exactly) {
        for (std::size_t i = 0; i < message.size(); ++i) {
            r.fidelities.push_back(fidelity(message.qubits[i], r.recovered->qubits[i]));
            if (r.fidelities.back() < 1.0 - kExactTol) {
                r.recovered_exactly = false;
            }
        }
    }
    return r;
}

EncryptResult bob_encrypt(const PublicKey& key, const Message& message, std::uint64_t seed) {
    if (key.n == 0 || key.axes.size() != key.n) {
        throw std::invalid_argument("bob_encrypt: malformed public key");
    }
    const std::size_t blocks = block_message(message, key.n).blocks.size();
    const RandomSource root(seed);
    PairPool pool = distribute_pairs(blocks * key.n, root.split(1));
    RandomSource bob_rng = root.split(3);

    EncryptResult out;
    std::vector<int> labels;
    for (std::size_t b = 0; b < blocks; ++b) {
        PairPool block = pool.slice(b * key.n, key.n);
        const OutcomeString kb = bob_measure(block, key, bob_rng);
        for (std::size_t i = 0; i < key.n; ++i) {
            const OneQubitState bob_state = eigenstate(key.axes[i], kb.labels[i]);
            out.share.push_back(condition_on(block.pairs[i], Party::Bob, bob_state));
            labels.push_back(kb.labels[i]);
        }
    }
    out.ciphertext = encrypt(message, choose_gates(labels), key.n);
    return out;
}

Message alice_decrypt(const PrivateKey& key, const Ciphertext& c, const std::vector<OneQubitState>& share,
                      std::uint64_t seed) {
    c.check_metadata();
    if (c.n != key.n) {
        throw DecodeError("key length " + std::to_string(key.n) + " does not match ciphertext block length " +
                          std::to_string(c.n));
    }
    if (share.size() != c.qubits.size()) {
        throw DecodeError("share holds " + std::to_string(share.size()) + " particles for " +
                          std::to_string(c.qubits.size()) + " ciphertext qubits");
    }
    RandomSource alice_rng = RandomSource(seed).split(4);
    std::vector<int> labels;
    labels.reserve(share.size());
    for (std::size_t j = 0; j < share.size(); ++j) {
        const std::size_t i = j % key.n;
        const OneQubitState gated = apply(gate_operator(key.params.gates[i]), share[j]);
        const int ka = measure_single(gated, key.axes[i], alice_rng).label;
        labels.push_back(key.corr_signs[i] == 1 ? ka : 1 - ka);
    }
    return decrypt(c, choose_gates(labels));
}

namespace {

Json qubit_array(const std::vector<OneQubitState>& qubits) {
    Json arr = Json::array();
    for (const OneQubitState& q : qubits) {
        arr.push_back(Json::array({q.amps[0].real(), q.amps[0].imag(), q.amps[1].real(), q.amps[1].imag()}));
    }
    return arr;
}

std::vector<OneQubitState> parse_qubit_array(const Json& arr, const std::string& path, bool allow_complex) {
    if (!arr.is_array()) {
        throw ParseError("expected an array", path);
    }
    std::vector<OneQubitState> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = path + "/" + std::to_string(i);
        const Json& q = detail::as_array(arr[i], 4, p);
        const Complex a0{detail::as_double(q[0], p + "/0"), detail::as_double(q[1], p + "/1")};
        const Complex a1{detail::as_double(q[2], p + "/2"), detail::as_double(q[3], p + "/3")};
        if (!allow_complex && (a0.imag() != 0.0 || a1.imag() != 0.0)) {
            throw ParseError("complex amplitudes require --allow-complex", p);
        }
        try {
            out.push_back(OneQubitState::from_amplitudes(a0, a1));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), p);
        }
    }
    return out;
}

}  // namespace

std::string serialize_share(const std::vector<OneQubitState>& share, std::size_t n) {
    Json doc;
    doc["version"] = 1;
    doc["kind"] = "share";
    doc["n"] = n;
    doc["qubits"] = qubit_array(share);
    return doc.dump(2) + "\n";
}

std::vector<OneQubitState> parse_share(std::string_view text, std::size_t expected_n) {
    const Json doc = detail::parse_document(text);
    detail::check_header(doc, "share");
    const std::uint64_t n = detail::as_count(detail::field(doc, "n", ""), "/n");
    if (n != expected_n) {
        throw ParseError("share block length " + std::to_string(n) + " does not match " +
                             std::to_string(expected_n),
                         "/n");
    }
    return parse_qubit_array(detail::field(doc, "qubits", ""), "/qubits", true);
}

std::string serialize_qubit_message(const Message& m) {
    std::vector<OneQubitState> states;
    states.reserve(m.size());
    for (const PlainQubit& q : m.qubits) {
        states.push_back(q.state());
    }
    Json doc;
    doc["version"] = 1;
    doc["kind"] = "qubits";
    doc["qubits"] = qubit_array(states);
    return doc.dump(2) + "\n";
}

Message parse_qubit_message(std::string_view text, bool allow_complex) {
    const Json doc = detail::parse_document(text);
    detail::check_header(doc, "qubits");
    Message m;
    m.origin = MessageOrigin::Qubits;
    for (const OneQubitState& s : parse_qubit_array(detail::field(doc, "qubits", ""), "/qubits", allow_complex)) {
        m.qubits.push_back(PlainQubit::from_state(s));
    }
    return m;
}

}  // namespace qpkc

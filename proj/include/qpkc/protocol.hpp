#pragma once

// The three-phase exchange: |Phi+> pair distribution, a CHSH eavesdropping
// check on a sacrificed subset, Alice's channel gates, and the public/private
// key measurements that give Bob K_B and Alice K_A.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qpkc/eve.hpp"
#include "qpkc/keys.hpp"
#include "qpkc/qmath.hpp"
#include "qpkc/random.hpp"

namespace qpkc {

// Simulation-side record of a pair. Neither party can read it.
struct PairRecord {
    std::size_t origin = 0;  // index in the distributed pool
    bool tampered = false;
    std::optional<Interception> interception;
};

struct PairPool {
    std::vector<TwoQubitState> pairs;
    std::vector<PairRecord> records;

    std::size_t size() const { return pairs.size(); }
    // Pairs [start, start + count) as a new pool.
    PairPool slice(std::size_t start, std::size_t count) const;
};

enum class Verdict { Clean, Eavesdropped };

const char* to_string(Verdict v);

// CHSH settings: Bob in {0, pi/2}, Alice in {pi/4, -pi/4}.
inline constexpr std::array<double, 2> kChshBobAngles = {0.0, kPi / 2.0};
inline constexpr std::array<double, 2> kChshAliceAngles = {kPi / 4.0, -kPi / 4.0};

inline constexpr double kDefaultFraction = 0.25;
inline constexpr double kDefaultThreshold = 2.5;
inline constexpr std::size_t kMinSacrificed = 16;
// Sacrificed pairs targeted by the default pool size; at this size the
// honest CHSH estimate sits about 3.7 standard deviations above 2.5.
inline constexpr std::size_t kDefaultCheckPairs = 1000;

// S = |E(0,pi/4) + E(0,-pi/4) + E(pi/2,pi/4) - E(pi/2,-pi/4)|; 2*sqrt2 on
// |Phi+>, at most 2 on any product state.
double chsh_combination(const std::array<std::array<double, 2>, 2>& e);

// S from exact expectation values.
double exact_chsh(const TwoQubitState& s);

struct EveCheckReport {
    std::size_t sacrificed = 0;
    std::vector<std::size_t> indices;  // origin indices of the sacrificed pairs
    std::array<std::array<double, 2>, 2> correlations{};
    std::array<std::array<std::size_t, 2>, 2> counts{};
    double s_estimate = 0.0;
    double threshold = kDefaultThreshold;
    Verdict verdict = Verdict::Eavesdropped;
};

struct CheckResult {
    EveCheckReport report;
    PairPool remaining;
};

struct OutcomeString {
    std::vector<int> labels;
    std::vector<Axis> axes;

    std::size_t size() const { return labels.size(); }
};

// m copies of |Phi+>, each tampered by eve (if given) with probability
// eve->coverage. Selection and per-pair measurement use separate splits of
// rng, so an Eve that touches nothing leaves the pool bit-identical.
PairPool distribute_pairs(std::size_t m, const RandomSource& rng,
                          const std::optional<EveStrategy>& eve = std::nullopt);

// Sacrifices ceil(fraction * m) random pairs for a CHSH test. Throws
// std::invalid_argument for fraction outside (0, 1) or fewer than 16
// sacrificed pairs, or when nothing would remain.
CheckResult eavesdrop_check(const PairPool& pool, double fraction, double threshold,
                            RandomSource& rng);

// Applies gates[i] to Alice's particle of pair i for i < p.n.
PairPool apply_channel_gates(const PairPool& pool, const SecretParams& p);

// Measure Bob's particles along the public axes; the pool collapses in place.
OutcomeString bob_measure(PairPool& pool, const PublicKey& k, RandomSource& rng);

// Measure Alice's particles along the private axes; the pool collapses in place.
OutcomeString alice_measure(PairPool& pool, const PrivateKey& k, RandomSource& rng);

// Bob's labels from Alice's labels and the correlation signs.
OutcomeString infer_bob_outcomes(const OutcomeString& ka, const PrivateKey& k);

// Exact joint label distribution P(label_bob, label_alice), index 2*b + a.
std::array<double, 4> joint_distribution(const TwoQubitState& s, Axis axis_bob, Axis axis_alice,
                                         Party first);

struct ExchangeConfig {
    std::size_t n = 8;
    std::size_t m = 0;  // 0: default_pool_size(n, blocks, fraction)
    std::size_t blocks = 1;
    double fraction = kDefaultFraction;
    double threshold = kDefaultThreshold;
    std::optional<EveStrategy> eve;
    bool alice_first = false;
};

// max(ceil(blocks * n / (1 - fraction)) + 16, ceil(1000 / fraction)).
std::size_t default_pool_size(std::size_t n, std::size_t blocks, double fraction);

// Everything one run produced. K_B/K_A/inferred hold blocks * n labels and
// are empty when the check failed.
struct Exchange {
    std::uint64_t seed = 0;
    ExchangeConfig config;
    std::size_t m = 0;
    SecretParams params;
    PublicKey public_key;
    PrivateKey private_key;
    PairPool distributed;
    EveCheckReport check;
    std::vector<std::size_t> message_pairs;  // origin indices used for K_B/K_A
    PairPool measured;                       // post-measurement message pairs
    OutcomeString kb;
    OutcomeString ka;
    OutcomeString inferred;
};

// Phases I and II. Streams: split(0) secret parameters, split(1) pair
// distribution, split(2) the eavesdrop check, split(3) Bob, split(4) Alice.
Exchange run_exchange(const ExchangeConfig& config, std::uint64_t seed);

}  // namespace qpkc

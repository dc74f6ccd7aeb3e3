#pragma once

// Monte Carlo security experiments: channel guessing, ciphertext
// discrimination, and complete protocol runs with an intercept-resend Eve.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "qpkc/eve.hpp"
#include "qpkc/protocol.hpp"
#include "qpkc/random.hpp"

namespace qpkc {

struct AttackReport {
    EveKind strategy = EveKind::ChannelGuess;
    bool eve_active = true;
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t detections = 0;
    double detection_rate = 0.0;
    double success_rate = 0.0;
    double theory_value = 0.0;
};

// 8^-n, exact in binary64 for every n the protocol can use.
double undetected_prob(std::size_t n);

// Each trial draws n uniform true channels and n independent uniform
// guesses; success iff every guess is right. theory_value = 8^-n.
AttackReport channel_guess_experiment(std::size_t trials, const RandomSource& rng, std::size_t n = 1,
                                      unsigned parallel = 1);

// Helstrom bound for two equiprobable pure states: (1 + sqrt(1 - |<a|b>|^2)) / 2.
double discrimination_bound(const OneQubitState& a, const OneQubitState& b);

// Each trial: random real plaintext qubit, fair H/Z choice, Eve performs the
// optimal two-outcome measurement between H psi and Z psi. theory_value is
// the mean per-trial discrimination bound.
AttackReport ciphertext_distinguish_experiment(std::size_t trials, const RandomSource& rng,
                                               unsigned parallel = 1);

struct AttackConfig {
    std::size_t n = 8;
    std::size_t m = 2000;
    double fraction = kDefaultFraction;
    double threshold = kDefaultThreshold;
    std::optional<EveStrategy> eve = EveStrategy::intercept_fixed(Axis::z());
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    unsigned parallel = 1;
};

// Per-trial exchange seed used by full_attack_run.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

// Complete runs with Eve active. detection_rate: verdict EAVESDROPPED.
// success_rate: Eve evaded detection and read at least one plaintext bit
// correctly. theory_value: 8^-n.
AttackReport full_attack_run(const AttackConfig& config);

}  // namespace qpkc

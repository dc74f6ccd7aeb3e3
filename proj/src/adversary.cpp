#include "qpkc/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qpkc/channels.hpp"
#include "qpkc/cipher.hpp"

namespace qpkc {
namespace {

struct TrialOutcome {
    std::size_t successes = 0;
    std::size_t detections = 0;
};

// Trial t always draws from rng.split(t), so results do not depend on the
// number of worker threads.
TrialOutcome run_trials(std::size_t trials, const RandomSource& rng, unsigned parallel,
                        const std::function<TrialOutcome(RandomSource&, std::size_t)>& trial) {
    const unsigned workers = std::max(1U, std::min<unsigned>(parallel, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
    std::vector<TrialOutcome> partial(workers);
    auto work = [&](unsigned w) {
        for (std::size_t t = w; t < trials; t += workers) {
            RandomSource r = rng.split(t);
            const TrialOutcome o = trial(r, t);
            partial[w].successes += o.successes;
            partial[w].detections += o.detections;
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
        for (std::thread& th : pool) {
            th.join();
        }
    }
    TrialOutcome total;
    for (const TrialOutcome& p : partial) {
        total.successes += p.successes;
        total.detections += p.detections;
    }
    return total;
}

void check_trials(std::size_t trials) {
    if (trials == 0) {
        throw std::invalid_argument("attack experiment: trials must be at least 1");
    }
}

}  // namespace

double undetected_prob(std::size_t n) {
    return std::ldexp(1.0, -3 * static_cast<int>(n));
}

AttackReport channel_guess_experiment(std::size_t trials, const RandomSource& rng, std::size_t n,
                                      unsigned parallel) {
    check_trials(trials);
    if (n == 0) {
        throw std::invalid_argument("channel_guess_experiment: n must be at least 1");
    }
    const TrialOutcome total = run_trials(trials, rng, parallel, [n](RandomSource& r, std::size_t) {
        bool all = true;
        for (std::size_t i = 0; i < n; ++i) {
            const auto truth = r.below(kAllChannels.size());
            const auto guess = r.below(kAllChannels.size());
            all = all && truth == guess;
        }
        return TrialOutcome{all ? 1U : 0U, 0};
    });
    AttackReport report;
    report.strategy = EveKind::ChannelGuess;
    report.trials = trials;
    report.successes = total.successes;
    report.success_rate = static_cast<double>(total.successes) / static_cast<double>(trials);
    report.theory_value = undetected_prob(n);
    return report;
}

double discrimination_bound(const OneQubitState& a, const OneQubitState& b) {
    const double ov = std::norm(overlap(a, b));
    return 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - ov)));
}

namespace {

// Eigenvector of the Hermitian difference |a><a| - |b><b| for its positive
// eigenvalue: the Helstrom measurement outcome that points to a.
OneQubitState helstrom_vector(const OneQubitState& a, const OneQubitState& b) {
    const Complex d00 = std::norm(a.amps[0]) - std::norm(b.amps[0]);
    const Complex d01 = a.amps[0] * std::conj(a.amps[1]) - b.amps[0] * std::conj(b.amps[1]);
    const double d11 = std::norm(a.amps[1]) - std::norm(b.amps[1]);
    // Traceless: eigenvalues +-lambda.
    const double lambda = std::sqrt(d00.real() * d00.real() + std::norm(d01));
    OneQubitState v;
    if (lambda == 0.0) {
        return v;
    }
    // (D - lambda I) v = 0 -> v = (d01, lambda - d00) or (lambda - d11, conj(d01)).
    Complex v0 = d01;
    Complex v1 = lambda - d00.real();
    if (std::norm(v0) + std::norm(v1) < 1e-24) {
        v0 = lambda - d11;
        v1 = std::conj(d01);
    }
    const double norm = std::sqrt(std::norm(v0) + std::norm(v1));
    v.amps = {v0 / norm, v1 / norm};
    return v;
}

}  // namespace

AttackReport ciphertext_distinguish_experiment(std::size_t trials, const RandomSource& rng, unsigned parallel) {
    check_trials(trials);
    auto trial = [](RandomSource& r, std::size_t) {
        const PlainQubit psi = PlainQubit::random_real(r);
        const OneQubitState h = apply(hadamard(), psi.state());
        const OneQubitState z = apply(pauli_z(), psi.state());
        const bool sent_h = r.coin();
        const OneQubitState& c = sent_h ? h : z;
        const OneQubitState v = helstrom_vector(h, z);
        const bool guess_h = r.uniform() < std::norm(overlap(v, c));
        return TrialOutcome{guess_h == sent_h ? 1U : 0U, 0};
    };
    const TrialOutcome total = run_trials(trials, rng, parallel, trial);
    AttackReport report;
    report.strategy = EveKind::CiphertextDistinguish;
    report.trials = trials;
    report.successes = total.successes;
    report.success_rate = static_cast<double>(total.successes) / static_cast<double>(trials);
    double theory = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        RandomSource r = rng.split(t);
        const PlainQubit psi = PlainQubit::random_real(r);
        theory += discrimination_bound(apply(hadamard(), psi.state()), apply(pauli_z(), psi.state()));
    }
    report.theory_value = theory / static_cast<double>(trials);
    return report;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
    return RandomSource(seed).split(trial).next_u64();
}

AttackReport full_attack_run(const AttackConfig& config) {
    check_trials(config.trials);
    if (config.eve && !config.eve->intercepts()) {
        throw std::invalid_argument("full_attack_run: Eve must use an intercept-resend strategy");
    }
    ExchangeConfig ec;
    ec.n = config.n;
    ec.m = config.m;
    ec.fraction = config.fraction;
    ec.threshold = config.threshold;
    ec.eve = config.eve;

    auto trial = [&](RandomSource&, std::size_t t) {
        const std::uint64_t seed = trial_seed(config.seed, t);
        const Exchange ex = run_exchange(ec, seed);
        if (ex.check.verdict == Verdict::Eavesdropped) {
            return TrialOutcome{0, 1};
        }
        RandomSource side = RandomSource(seed).split(5);
        std::vector<int> bits(config.n);
        for (int& b : bits) {
            b = side.coin() ? 1 : 0;
        }
        const Ciphertext c = encrypt(encode_bits(bits), choose_gates(ex.kb));

        RandomSource eve_rng = RandomSource(seed).split(6);
        std::size_t recovered = 0;
        for (std::size_t i = 0; i < config.n; ++i) {
            const PairRecord& rec = ex.distributed.records[ex.message_pairs[i]];
            int guess = eve_rng.coin() ? 1 : 0;
            if (rec.interception) {
                guess = rec.interception->label;
                const Axis pub = ex.public_key.axes[i];
                const double dot = std::cos(pub.phi() - rec.interception->axis.phi());
                if (dot < -1.0 + kAxisTol) {
                    guess = 1 - guess;
                }
            }
            const GateChoice g = guess == 0 ? GateChoice::H : GateChoice::Z;
            const OneQubitState undone = apply(gate_matrix(g).adjoint(), c.qubits[i]);
            const int bit = measure_single(undone, Axis::z(), eve_rng).label;
            if (bit == bits[i]) {
                ++recovered;
            }
        }
        return TrialOutcome{recovered > 0 ? 1U : 0U, 0};
    };

    const TrialOutcome total = run_trials(config.trials, RandomSource(config.seed), config.parallel, trial);
    AttackReport report;
    report.strategy = config.eve ? config.eve->kind : EveKind::InterceptResendFixed;
    report.eve_active = config.eve.has_value();
    report.trials = config.trials;
    report.successes = total.successes;
    report.detections = total.detections;
    report.detection_rate = static_cast<double>(total.detections) / static_cast<double>(config.trials);
    report.success_rate = static_cast<double>(total.successes) / static_cast<double>(config.trials);
    report.theory_value = undetected_prob(config.n);
    return report;
}

}  // namespace qpkc

#include "qpkc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qpkc/channels.hpp"
#include "qpkc/error.hpp"

namespace qpkc {

PairPool PairPool::slice(std::size_t start, std::size_t count) const {
    if (start + count > pairs.size()) {
        throw std::out_of_range("PairPool::slice: range exceeds pool");
    }
    PairPool out;
    out.pairs.assign(pairs.begin() + start, pairs.begin() + start + count);
    out.records.assign(records.begin() + start, records.begin() + start + count);
    return out;
}

const char* to_string(Verdict v) { return v == Verdict::Clean ? "CLEAN" : "EAVESDROPPED"; }

double chsh_combination(const std::array<std::array<double, 2>, 2>& e) {
    return std::abs(e[0][0] + e[0][1] + e[1][0] - e[1][1]);
}

double exact_chsh(const TwoQubitState& s) {
    std::array<std::array<double, 2>, 2> e{};
    for (std::size_t b = 0; b < 2; ++b) {
        for (std::size_t a = 0; a < 2; ++a) {
            e[b][a] = expectation(s, Axis(kChshBobAngles[b]), Axis(kChshAliceAngles[a]));
        }
    }
    return chsh_combination(e);
}

PairPool distribute_pairs(std::size_t m, const RandomSource& rng, const std::optional<EveStrategy>& eve) {
    if (m == 0) {
        throw std::invalid_argument("distribute_pairs: m must be at least 1");
    }
    PairPool pool;
    pool.pairs.assign(m, channel_state(ChannelId::PhiPlus));
    pool.records.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        pool.records[i].origin = i;
    }
    if (!eve) {
        return pool;
    }
    RandomSource select = rng.split(0);
    const RandomSource measure = rng.split(1);
    for (std::size_t i = 0; i < m; ++i) {
        if (select.uniform() < eve->coverage) {
            RandomSource pair_rng = measure.split(i);
            Interception in = intercept_pair(pool.pairs[i], *eve, pair_rng);
            pool.pairs[i] = in.forwarded;
            pool.records[i].tampered = true;
            pool.records[i].interception = std::move(in);
        }
    }
    return pool;
}

CheckResult eavesdrop_check(const PairPool& pool, double fraction, double threshold, RandomSource& rng) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw std::invalid_argument("eavesdrop_check: fraction must lie in (0, 1)");
    }
    const std::size_t m = pool.size();
    const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(m)));
    if (k < kMinSacrificed) {
        throw std::invalid_argument("eavesdrop_check: insufficient pairs (" + std::to_string(k) +
                                    " sacrificed, need at least " + std::to_string(kMinSacrificed) + ")");
    }
    if (k >= m) {
        throw std::invalid_argument("eavesdrop_check: insufficient pairs (nothing would remain)");
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(order[i], order[i + rng.below(m - i)]);
    }
    std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(chosen.begin(), chosen.end());

    CheckResult out;
    EveCheckReport& r = out.report;
    r.sacrificed = k;
    r.threshold = threshold;
    std::array<std::array<double, 2>, 2> sums{};
    std::vector<bool> used(m, false);
    for (std::size_t pos : chosen) {
        used[pos] = true;
        r.indices.push_back(pool.records[pos].origin);
        const std::size_t b = rng.below(2);
        const std::size_t a = rng.below(2);
        const Measurement mb = measure_one(pool.pairs[pos], Axis(kChshBobAngles[b]), Party::Bob, rng);
        const Measurement ma = measure_one(mb.collapsed, Axis(kChshAliceAngles[a]), Party::Alice, rng);
        sums[b][a] += label_value(mb.label) * label_value(ma.label);
        ++r.counts[b][a];
    }
    for (std::size_t b = 0; b < 2; ++b) {
        for (std::size_t a = 0; a < 2; ++a) {
            r.correlations[b][a] = r.counts[b][a] == 0 ? 0.0 : sums[b][a] / static_cast<double>(r.counts[b][a]);
        }
    }
    r.s_estimate = chsh_combination(r.correlations);
    r.verdict = r.s_estimate > threshold ? Verdict::Clean : Verdict::Eavesdropped;

    for (std::size_t i = 0; i < m; ++i) {
        if (!used[i]) {
            out.remaining.pairs.push_back(pool.pairs[i]);
            out.remaining.records.push_back(pool.records[i]);
        }
    }
    return out;
}

PairPool apply_channel_gates(const PairPool& pool, const SecretParams& p) {
    p.validate();
    if (pool.size() < p.n) {
        throw std::invalid_argument("apply_channel_gates: pool has " + std::to_string(pool.size()) +
                                    " pairs, need " + std::to_string(p.n));
    }
    PairPool out = pool;
    for (std::size_t i = 0; i < p.n; ++i) {
        out.pairs[i] = apply_single(gate_operator(p.gates[i]), out.pairs[i], Party::Alice);
    }
    return out;
}

namespace {

OutcomeString measure_all(PairPool& pool, const std::vector<Axis>& axes, Party which, RandomSource& rng) {
    if (pool.size() != axes.size()) {
        throw std::invalid_argument("measurement: pool has " + std::to_string(pool.size()) +
                                    " pairs but key has " + std::to_string(axes.size()) + " axes");
    }
    OutcomeString out;
    out.axes = axes;
    out.labels.reserve(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) {
        Measurement m = measure_one(pool.pairs[i], axes[i], which, rng);
        out.labels.push_back(m.label);
        pool.pairs[i] = m.collapsed;
    }
    return out;
}

}  // namespace

OutcomeString bob_measure(PairPool& pool, const PublicKey& k, RandomSource& rng) {
    return measure_all(pool, k.axes, Party::Bob, rng);
}

OutcomeString alice_measure(PairPool& pool, const PrivateKey& k, RandomSource& rng) {
    return measure_all(pool, k.axes, Party::Alice, rng);
}

OutcomeString infer_bob_outcomes(const OutcomeString& ka, const PrivateKey& k) {
    if (ka.size() != k.n || k.corr_signs.size() != k.n) {
        throw std::invalid_argument("infer_bob_outcomes: length mismatch");
    }
    OutcomeString out;
    out.axes = derive_public_key(k.params).axes;
    out.labels.reserve(k.n);
    for (std::size_t i = 0; i < k.n; ++i) {
        out.labels.push_back(k.corr_signs[i] == 1 ? ka.labels[i] : 1 - ka.labels[i]);
    }
    return out;
}

std::array<double, 4> joint_distribution(const TwoQubitState& s, Axis axis_bob, Axis axis_alice, Party first) {
    std::array<double, 4> p{};
    const Party second = first == Party::Bob ? Party::Alice : Party::Bob;
    const Axis first_axis = first == Party::Bob ? axis_bob : axis_alice;
    const Axis second_axis = first == Party::Bob ? axis_alice : axis_bob;
    for (int x = 0; x < 2; ++x) {
        const Projection px = project(s, first_axis, first, x);
        if (px.probability == 0.0) {
            continue;
        }
        for (int y = 0; y < 2; ++y) {
            const double py = project(px.collapsed, second_axis, second, y).probability;
            const int bob = first == Party::Bob ? x : y;
            const int alice = first == Party::Bob ? y : x;
            p[static_cast<std::size_t>(2 * bob + alice)] = px.probability * py;
        }
    }
    return p;
}

std::size_t default_pool_size(std::size_t n, std::size_t blocks, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw std::invalid_argument("default_pool_size: fraction must lie in (0, 1)");
    }
    const double needed = static_cast<double>(n * blocks) / (1.0 - fraction);
    const auto by_message = static_cast<std::size_t>(std::ceil(needed)) + kMinSacrificed;
    const auto by_check = static_cast<std::size_t>(std::ceil(static_cast<double>(kDefaultCheckPairs) / fraction));
    return std::max(by_message, by_check);
}

Exchange run_exchange(const ExchangeConfig& config, std::uint64_t seed) {
    if (config.n == 0 || config.blocks == 0) {
        throw std::invalid_argument("run_exchange: n and blocks must be at least 1");
    }
    const RandomSource root(seed);
    Exchange ex;
    ex.seed = seed;
    ex.config = config;
    ex.m = config.m != 0 ? config.m : default_pool_size(config.n, config.blocks, config.fraction);
    const std::size_t needed = config.n * config.blocks;
    if (ex.m <= needed) {
        throw std::invalid_argument("run_exchange: m (" + std::to_string(ex.m) +
                                    ") must exceed the number of message pairs (" +
                                    std::to_string(needed) + ")");
    }

    RandomSource param_rng = root.split(0);
    ex.params = gen_secret_params(config.n, param_rng);
    ex.public_key = derive_public_key(ex.params);
    ex.private_key = derive_private_key(ex.params);

    ex.distributed = distribute_pairs(ex.m, root.split(1), config.eve);
    RandomSource check_rng = root.split(2);
    CheckResult check = eavesdrop_check(ex.distributed, config.fraction, config.threshold, check_rng);
    ex.check = check.report;
    if (ex.check.verdict == Verdict::Eavesdropped) {
        return ex;
    }
    if (check.remaining.size() < needed) {
        throw std::invalid_argument("run_exchange: only " + std::to_string(check.remaining.size()) +
                                    " pairs remain after the check, need " + std::to_string(needed));
    }

    RandomSource bob_rng = root.split(3);
    RandomSource alice_rng = root.split(4);
    for (std::size_t b = 0; b < config.blocks; ++b) {
        PairPool block = apply_channel_gates(check.remaining.slice(b * config.n, config.n), ex.params);
        OutcomeString kb;
        OutcomeString ka;
        if (config.alice_first) {
            ka = alice_measure(block, ex.private_key, alice_rng);
            kb = bob_measure(block, ex.public_key, bob_rng);
        } else {
            kb = bob_measure(block, ex.public_key, bob_rng);
            ka = alice_measure(block, ex.private_key, alice_rng);
        }
        const OutcomeString inferred = infer_bob_outcomes(ka, ex.private_key);
        for (std::size_t i = 0; i < config.n; ++i) {
            ex.message_pairs.push_back(block.records[i].origin);
            ex.measured.pairs.push_back(block.pairs[i]);
            ex.measured.records.push_back(block.records[i]);
        }
        auto append = [](OutcomeString& dst, const OutcomeString& src) {
            dst.labels.insert(dst.labels.end(), src.labels.begin(), src.labels.end());
            dst.axes.insert(dst.axes.end(), src.axes.begin(), src.axes.end());
        };
        append(ex.kb, kb);
        append(ex.ka, ka);
        append(ex.inferred, inferred);
    }
    return ex;
}

}  // namespace qpkc

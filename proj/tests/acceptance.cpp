// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qpkc/adversary.hpp"
#include "qpkc/channels.hpp"
#include "qpkc/cipher.hpp"
#include "qpkc/cli.hpp"
#include "qpkc/keys.hpp"
#include "qpkc/protocol.hpp"

namespace fs = std::filesystem;
using namespace qpkc;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

oracle::Vec4 to_oracle(const TwoQubitState& s) { return {s.amps[0], s.amps[1], s.amps[2], s.amps[3]}; }

Outcome end_to_end() {
    const auto start = Clock::now();
    RandomSource seeds(1001);
    double worst = 1.0;
    int qubit_failures = 0, bit_failures = 0;
    for (int run = 0; run < 100; ++run) {
        RunConfig cfg;
        cfg.n = 64;
        cfg.seed = seeds.next_u64();
        RandomSource msg_rng = RandomSource(cfg.seed).split(7);
        Message msg;
        for (int i = 0; i < 64; ++i) msg.qubits.push_back(PlainQubit::random_real(msg_rng));
        const RunResult r = simulate_run(cfg, msg);
        if (!r.recovered || !r.inference_exact || r.fidelities.size() != msg.size()) {
            ++qubit_failures;
            continue;
        }
        for (double f : r.fidelities) worst = std::min(worst, f);

        std::vector<int> bits(64);
        for (int& b : bits) b = msg_rng.coin();
        const RunResult rb = simulate_run(cfg, encode_bits(bits));
        if (!rb.recovered || decode_bits(*rb.recovered) != bits) ++bit_failures;
    }
    const double elapsed = seconds_since(start);
    Outcome o;
    o.pass = qubit_failures == 0 && bit_failures == 0 && worst >= 1.0 - 1e-12 && elapsed < 5.0;
    o.detail = "100 runs n=64: min fidelity " + fmt("%.17g", worst) + ", failed qubit runs " +
               std::to_string(qubit_failures) + ", failed bit runs " + std::to_string(bit_failures) + ", " +
               fmt("%.2f", elapsed) + " s";
    return o;
}

Outcome table_one() {
    int matched = 0;
    for (const auto& row : fixture::kTableOne) {
        const PrivateKey k = derive_private_key(fixture::single(row.channel, row.op, 0.0));
        if (k.axes[0].phi() == row.alice_phi && k.corr_signs[0] == row.sign) ++matched;
    }
    return {matched == 16, std::to_string(matched) + "/16 entries match exactly"};
}

Outcome determinism_sweep() {
    RandomSource rng(2002);
    const SecretParams p = gen_secret_params(1000, rng);
    const PublicKey pub = derive_public_key(p);
    const PrivateKey priv = derive_private_key(p);
    double worst = 1.0;
    for (std::size_t i = 0; i < p.n; ++i) {
        const double e = oracle::expect(to_oracle(channel_state(p.channels[i])), oracle::sigma(pub.axes[i].phi()),
                                        oracle::sigma(priv.axes[i].phi()));
        worst = std::min(worst, std::abs(e));
    }
    return {worst >= 1.0 - 1e-10, "1000 triples: min |<pub x priv>| = " + fmt("%.17g", worst)};
}

Outcome nonorthogonality() {
    RandomSource rng(3003);
    double dev = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const PlainQubit psi = PlainQubit::random_real(rng);
        // independent evaluation of |<H psi|Z psi>|^2 with oracle matrices
        const oracle::Vec2 v{psi.alpha, psi.beta};
        const auto h = oracle::had();
        const auto z = oracle::sz();
        oracle::C ip{};
        for (int r = 0; r < 2; ++r) {
            oracle::C hv{}, zv{};
            for (int c = 0; c < 2; ++c) {
                hv += h[r][c] * v[c];
                zv += z[r][c] * v[c];
            }
            ip += std::conj(hv) * zv;
        }
        dev = std::max(dev, std::abs(std::norm(ip) - 0.5));
        dev = std::max(dev, std::abs(ciphertext_overlap(psi) - 0.5));
    }
    return {dev <= 1e-12, "1e4 real states: max |overlap^2 - 1/2| = " + fmt("%.3g", dev)};
}

Outcome channel_guess() {
    const AttackReport r = channel_guess_experiment(80000, RandomSource(4004));
    bool exact = true;
    double p = 1.0;
    for (std::size_t n = 0; n <= 16; ++n) {
        exact = exact && undetected_prob(n) == p;
        p /= 8.0;
    }
    const bool in_band = r.success_rate >= 0.115 && r.success_rate <= 0.135;
    return {in_band && exact, "8e4 trials: rate " + fmt("%.6f", r.success_rate) + " (theory 0.125); 8^-n exact for n<=16: " +
                                  (exact ? "yes" : "no")};
}

Outcome chsh_separation() {
    const auto start = Clock::now();
    const double honest = exact_chsh(channel_state(ChannelId::PhiPlus));
    const bool exact_ok = std::abs(honest - 2 * std::sqrt(2.0)) <= 1e-12;

    const PairPool honest_pool = distribute_pairs(200000, RandomSource(5005));
    RandomSource check_rng(5006);
    const CheckResult mc = eavesdrop_check(honest_pool, 0.5, kDefaultThreshold, check_rng);
    const bool mc_ok = mc.report.sacrificed == 100000 && std::abs(mc.report.s_estimate - 2 * std::sqrt(2.0)) <= 0.05;

    double worst_tampered = 0.0;
    for (const auto& eve : {EveStrategy::intercept_fixed(Axis::z()), EveStrategy::intercept_random()}) {
        const PairPool pool = distribute_pairs(2000, RandomSource(5007), eve);
        for (const auto& s : pool.pairs) worst_tampered = std::max(worst_tampered, exact_chsh(s));
    }
    const bool tampered_ok = worst_tampered <= 2.0 + 1e-12;

    AttackConfig cfg;
    cfg.m = 2000;
    cfg.fraction = 0.25;
    cfg.threshold = 2.5;
    cfg.trials = 500;
    cfg.seed = 5008;
    cfg.parallel = 4;
    const AttackReport r = full_attack_run(cfg);
    const bool detect_ok = r.detection_rate > 0.99;

    const double elapsed = seconds_since(start);
    Outcome o;
    o.pass = exact_ok && mc_ok && tampered_ok && detect_ok && elapsed < 30.0;
    o.detail = "exact S " + fmt("%.15f", honest) + "; MC S " + fmt("%.4f", mc.report.s_estimate) + " over " +
               std::to_string(mc.report.sacrificed) + " pairs; max tampered S " + fmt("%.6f", worst_tampered) +
               "; detection " + fmt("%.3f", r.detection_rate) + "; " + fmt("%.2f", elapsed) + " s";
    return o;
}

Outcome entanglement() {
    double worst = 0.0;
    for (auto c : kAllChannels) {
        const auto s = to_oracle(channel_state(c));
        // reduced states from the oracle: rho_bob[i][j] = sum_k s[2i+k] conj(s[2j+k])
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                oracle::C rb{}, ra{};
                for (int k = 0; k < 2; ++k) {
                    rb += s[2 * i + k] * std::conj(s[2 * j + k]);
                    ra += s[2 * k + i] * std::conj(s[2 * k + j]);
                }
                const double want = i == j ? 0.5 : 0.0;
                worst = std::max({worst, std::abs(rb - want), std::abs(ra - want)});
            }
        }
        for (Party p : {Party::Bob, Party::Alice}) {
            worst = std::max(worst, reduced_single(channel_state(c), p).max_abs_diff(Complex(0.5) * identity2()));
        }
    }
    const GramMatrix g = gram_matrix();
    bool symmetric = true, unit_diag = true, nonorthogonal = false;
    for (int i = 0; i < 8; ++i) {
        unit_diag = unit_diag && std::abs(g[i][i] - 1.0) <= 1e-12;
        for (int j = 0; j < 8; ++j) {
            symmetric = symmetric && std::abs(g[i][j] - g[j][i]) <= 1e-12;
            if (i != j && g[i][j] > 1e-12) nonorthogonal = true;
        }
    }
    return {worst <= 1e-12 && symmetric && unit_diag && nonorthogonal,
            "max |rho - I/2| = " + fmt("%.3g", worst) + "; Gram symmetric " + (symmetric ? "yes" : "no") +
                ", unit diagonal " + (unit_diag ? "yes" : "no") + ", nonzero off-diagonal " +
                (nonorthogonal ? "yes" : "no")};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome replay() {
    const fs::path root = fs::temp_directory_path() / ("qpkc_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    {
        fs::create_directories(root / "seed");
        std::ofstream(root / "seed" / "msg.txt") << "1011001110001111";
        std::ofstream(root / "seed" / "msg.bin", std::ios::binary) << "replay me";
    }
    // Each command runs in its own directory; the directories must end up
    // byte-identical, and so must stdout.
    auto commands = [](const fs::path& d, const fs::path& s) -> std::vector<std::vector<std::string>> {
        const auto p = [&](const char* f) { return (d / f).string(); };
        return {
            {"keygen", "--n", "8", "--seed", "42", "--pub", p("k.pub"), "--priv", p("k.priv")},
            {"run", "--seed", "7", "--out", p("run.json"), "--recovered", p("run.rec")},
            {"run", "--seed", "7", "--format", "text", "--out", p("run.txt")},
            {"run", "--seed", "7", "--m", "2000", "--eve", "intercept-resend", "--out", p("eve.json")},
            {"run", "--seed", "9", "--n", "4", "--in", (s / "msg.txt").string(), "--out", p("blocks.json")},
            {"encrypt", "--pub", p("k.pub"), "--in", (s / "msg.txt").string(), "--seed", "3", "--out", p("c.json")},
            {"decrypt", "--priv", p("k.priv"), "--in", p("c.json"), "--seed", "4", "--out", p("m.txt")},
            {"encrypt", "--pub", p("k.pub"), "--in", (s / "msg.bin").string(), "--message-format", "bytes", "--out",
             p("cb.json")},
            {"decrypt", "--priv", p("k.priv"), "--in", p("cb.json"), "--out", p("mb.bin")},
            {"attack", "--strategy", "channel-guess", "--trials", "2000", "--seed", "1", "--out", p("a1.json")},
            {"attack", "--strategy", "distinguish", "--trials", "2000", "--seed", "1", "--out", p("a2.json")},
            {"attack", "--strategy", "intercept-resend", "--trials", "10", "--seed", "1", "--out", p("a3.json")},
            {"attack", "--strategy", "none", "--trials", "10", "--seed", "1", "--format", "text", "--out",
             p("a4.txt")},
            {"selftest"},
        };
    };
    int differing = 0;
    std::size_t total = 0;
    std::string first_diff;
    const auto a_cmds = commands(root / "a", root / "seed");
    const auto b_cmds = commands(root / "b", root / "seed");
    fs::create_directories(root / "a");
    fs::create_directories(root / "b");
    for (std::size_t i = 0; i < a_cmds.size(); ++i) {
        std::ostringstream oa, ea, ob, eb;
        const int ca = run_cli(a_cmds[i], oa, ea);
        const int cb = run_cli(b_cmds[i], ob, eb);
        if (ca != cb || oa.str() != ob.str()) {
            ++differing;
            if (first_diff.empty()) first_diff = a_cmds[i][0];
        }
        ++total;
    }
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
        const fs::path other = root / "b" / entry.path().filename();
        ++files;
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
            ++differing;
            if (first_diff.empty()) first_diff = entry.path().filename().string();
        }
    }
    fs::remove_all(root);
    return {differing == 0 && files >= 12,
            std::to_string(total) + " commands, " + std::to_string(files) + " output files, " +
                std::to_string(differing) + " differences" + (first_diff.empty() ? "" : " (first: " + first_diff + ")")};
}

Outcome order_invariance() {
    const std::pair<Axis, Axis> settings[4] = {
        {Axis::z(), Axis::z()}, {Axis::z(), Axis::x()}, {Axis::x(), Axis::z()}, {Axis::x(), Axis::x()}};
    double worst = 0.0;
    for (auto c : kAllChannels) {
        for (const auto& [ab, aa] : settings) {
            const auto bob_first = joint_distribution(channel_state(c), ab, aa, Party::Bob);
            const auto alice_first = joint_distribution(channel_state(c), ab, aa, Party::Alice);
            for (int k = 0; k < 4; ++k) {
                const double o = oracle::joint(to_oracle(channel_state(c)), ab.phi(), aa.phi(), k / 2, k % 2);
                worst = std::max({worst, std::abs(bob_first[k] - alice_first[k]), std::abs(bob_first[k] - o)});
            }
        }
    }
    return {worst <= 1e-12, "8 channels x 4 axis pairs: max deviation " + fmt("%.3g", worst)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 end-to-end correctness", end_to_end},
        {"2 channel table at theta = 0", table_one},
        {"3 determinism sweep", determinism_sweep},
        {"4 ciphertext nonorthogonality", nonorthogonality},
        {"5 channel-guess rate", channel_guess},
        {"6 CHSH separation", chsh_separation},
        {"7 maximal entanglement and Gram matrix", entanglement},
        {"8 replay determinism", replay},
        {"9 order invariance", order_invariance},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s  %-40s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}

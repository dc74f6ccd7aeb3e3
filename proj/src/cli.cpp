#include "qpkc/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "json_util.hpp"
#include "qpkc/adversary.hpp"
#include "qpkc/channels.hpp"
#include "qpkc/error.hpp"

namespace qpkc {
namespace {

using detail::Json;

constexpr std::string_view kDemoBits = "10110";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "' for reading");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

// "key: value" lines; nested objects use dotted keys, scalar arrays are
// space-separated.
void flatten(const Json& v, const std::string& prefix, std::ostream& out) {
    if (v.is_object()) {
        for (const auto& [k, child] : v.items()) {
            flatten(child, prefix.empty() ? k : prefix + "." + k, out);
        }
        return;
    }
    out << prefix << ":";
    if (v.is_array()) {
        for (const Json& e : v) {
            out << ' ' << (e.is_string() ? e.get<std::string>() : e.dump());
        }
    } else {
        out << ' ' << (v.is_string() ? v.get<std::string>() : v.dump());
    }
    out << '\n';
}

std::string render(const Json& doc, const std::string& format) {
    if (format == "text") {
        std::ostringstream s;
        flatten(doc, "", s);
        return s.str();
    }
    return doc.dump(2) + "\n";
}

struct MessageOptions {
    std::string in;
    std::string bits;
    std::string format = "bits";
    bool allow_complex = false;
};

Message load_message(const MessageOptions& opt, bool demo_default) {
    std::string bits = opt.bits;
    if (bits.empty() && opt.in.empty()) {
        if (!demo_default) {
            throw std::invalid_argument("no message given (use --in or --bits)");
        }
        bits = std::string(kDemoBits);
    }
    Message m;
    if (!bits.empty()) {
        m = encode_bits(bits);
    } else if (opt.format == "bits") {
        std::string text = read_file(opt.in);
        std::erase_if(text, [](char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; });
        m = encode_bits(text);
    } else if (opt.format == "bytes") {
        const std::string raw = read_file(opt.in);
        m = encode_bytes(std::vector<unsigned char>(raw.begin(), raw.end()));
    } else {
        m = parse_qubit_message(read_file(opt.in), opt.allow_complex);
    }
    if (m.qubits.empty()) {
        throw std::invalid_argument("empty message");
    }
    return m;
}

std::string render_message(const Message& m) {
    switch (m.origin) {
        case MessageOrigin::Bits: {
            std::string s;
            for (int b : decode_bits(m)) {
                s.push_back(static_cast<char>('0' + b));
            }
            return s + "\n";
        }
        case MessageOrigin::Bytes: {
            const std::vector<unsigned char> bytes = decode_bytes(m);
            return {bytes.begin(), bytes.end()};
        }
        case MessageOrigin::Qubits: return serialize_qubit_message(m);
    }
    return {};
}

void add_message_options(CLI::App* cmd, MessageOptions& opt) {
    cmd->add_option("--in", opt.in, "Message file");
    cmd->add_option("--bits", opt.bits, "Inline bit string, overrides --in");
    cmd->add_option("--message-format", opt.format, "Message file format")
        ->check(CLI::IsMember({"bits", "bytes", "qubits"}));
    cmd->add_flag("--allow-complex", opt.allow_complex, "Accept complex plaintext amplitudes");
}

struct EveOptions {
    std::string strategy;
    double axis = 0.0;
    double coverage = 1.0;
    bool both_legs = false;
};

void add_eve_options(CLI::App* cmd, EveOptions& opt, const std::string& flag) {
    cmd->add_option(flag, opt.strategy, "Eve strategy");
    cmd->add_option("--eve-axis", opt.axis, "Fixed intercept axis angle (radians)");
    cmd->add_option("--eve-coverage", opt.coverage, "Probability that Eve touches a pair")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--eve-both-legs", opt.both_legs, "Measure both particles of each pair");
}

std::optional<EveStrategy> make_eve(const EveOptions& opt) {
    if (opt.strategy.empty() || opt.strategy == "none") {
        return std::nullopt;
    }
    const auto kind = parse_eve_kind(opt.strategy);
    if (!kind) {
        throw std::invalid_argument("unknown Eve strategy '" + opt.strategy + "'");
    }
    EveStrategy s;
    s.kind = *kind;
    s.axis = Axis(opt.axis);
    s.coverage = opt.coverage;
    s.both_legs = opt.both_legs;
    return s;
}

Json eve_json(const std::optional<EveStrategy>& eve) {
    if (!eve) {
        return nullptr;
    }
    Json j;
    j["strategy"] = std::string(to_string(eve->kind));
    j["axis"] = eve->axis.phi();
    j["coverage"] = eve->coverage;
    j["both_legs"] = eve->both_legs;
    return j;
}

Json axes_json(const std::vector<Axis>& axes) {
    Json arr = Json::array();
    for (const Axis& a : axes) {
        arr.push_back(a.phi());
    }
    return arr;
}

Json transcript_json(const RunConfig& cfg, const Message& msg, const RunResult& r) {
    const Exchange& ex = r.exchange;
    Json doc;
    doc["version"] = 1;
    doc["kind"] = "transcript";
    Json config;
    config["n"] = cfg.n;
    config["m"] = ex.m;
    config["seed"] = cfg.seed;
    config["fraction"] = cfg.fraction;
    config["threshold"] = cfg.threshold;
    config["eve"] = eve_json(cfg.eve);
    config["message_length"] = msg.size();
    config["message_origin"] = std::string(to_string(msg.origin));
    doc["config"] = config;

    doc["seed"] = ex.seed;
    doc["m"] = ex.m;
    doc["n"] = ex.config.n;
    doc["blocks"] = ex.config.blocks;
    std::size_t tampered = 0;
    for (const PairRecord& rec : ex.distributed.records) {
        tampered += rec.tampered ? 1 : 0;
    }
    doc["tampered_pairs"] = tampered;
    doc["sacrificed"] = ex.check.indices;
    doc["s_estimate"] = ex.check.s_estimate;
    doc["verdict"] = to_string(ex.check.verdict);
    Json chsh;
    chsh["correlations"] = ex.check.correlations;
    chsh["counts"] = ex.check.counts;
    doc["chsh"] = chsh;

    Json channels = Json::array();
    Json gates = Json::array();
    for (std::size_t i = 0; i < ex.params.n; ++i) {
        channels.push_back(std::string(to_string(ex.params.channels[i])));
        gates.push_back(std::string(to_string(ex.params.gates[i])));
    }
    doc["channels"] = channels;
    doc["gates"] = gates;
    doc["public_axes"] = axes_json(ex.public_key.axes);
    doc["private_axes"] = axes_json(ex.private_key.axes);
    doc["corr_signs"] = ex.private_key.corr_signs;
    doc["message_pairs"] = ex.message_pairs;
    doc["kb"] = ex.kb.labels;
    doc["ka"] = ex.ka.labels;

    Json result;
    result["recovered"] = r.recovered_exactly;
    result["inference_exact"] = r.inference_exact;
    result["pad_len"] = r.ciphertext ? r.ciphertext->pad_len : 0;
    result["fidelities"] = r.fidelities;
    doc["result"] = result;
    return doc;
}

Json report_json(const AttackReport& r, const Json& config) {
    Json doc;
    doc["version"] = 1;
    doc["kind"] = "attack_report";
    doc["strategy"] = r.eve_active ? std::string(to_string(r.strategy)) : std::string("none");
    doc["eve_active"] = r.eve_active;
    doc["trials"] = r.trials;
    doc["successes"] = r.successes;
    doc["detections"] = r.detections;
    doc["success_rate"] = r.success_rate;
    doc["detection_rate"] = r.detection_rate;
    doc["theory_value"] = r.theory_value;
    doc["config"] = config;
    return doc;
}

std::uint64_t effective_seed(std::uint64_t flag_seed) {
    const char* env = std::getenv("QPKC_SEED");
    if (env == nullptr || *env == '\0') {
        return flag_seed;
    }
    std::size_t used = 0;
    const std::string s(env);
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used, 0);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size()) {
        throw std::invalid_argument("QPKC_SEED is not an unsigned integer: '" + s + "'");
    }
    return v;
}

using Clock = std::chrono::steady_clock;

void print_elapsed(std::ostream& out, Clock::time_point start, bool enabled) {
    if (enabled) {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
        out << "elapsed_ms: " << ms << '\n';
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Asymmetric entanglement-based quantum cipher simulator", "qpkc"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::size_t n = 8;
    std::size_t m = 0;
    double fraction = kDefaultFraction;
    double threshold = kDefaultThreshold;
    std::string pub_path;
    std::string priv_path;
    std::string out_path;
    std::string share_path;
    std::string recovered_path;
    std::string format = "json";
    std::size_t trials = 1000;
    unsigned parallel = 1;
    bool timings = false;
    MessageOptions msg_opt;
    EveOptions eve_opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Random seed (QPKC_SEED overrides)");
        cmd->add_flag("--timings", timings, "Print elapsed time");
    };
    auto add_check = [&](CLI::App* cmd) {
        cmd->add_option("--fraction", fraction, "Fraction of pairs sacrificed to the CHSH check")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--threshold", threshold, "CHSH acceptance threshold");
        cmd->add_option("--m", m, "Number of distributed pairs (0: default)");
    };

    CLI::App* keygen = app.add_subcommand("keygen", "Generate a public/private key pair");
    add_common(keygen);
    keygen->add_option("--n", n, "Key length")->check(CLI::PositiveNumber);
    keygen->add_option("--pub", pub_path, "Public key output")->required();
    keygen->add_option("--priv", priv_path, "Private key output")->required();

    CLI::App* run = app.add_subcommand("run", "Simulate all three phases end to end");
    add_common(run);
    add_check(run);
    run->add_option("--n", n, "Key length")->check(CLI::PositiveNumber);
    add_message_options(run, msg_opt);
    add_eve_options(run, eve_opt, "--eve");
    run->add_option("--out", out_path, "Transcript output");
    run->add_option("--recovered", recovered_path, "Recovered plaintext output");
    run->add_option("--format", format, "Transcript format")->check(CLI::IsMember({"json", "text"}));

    CLI::App* enc = app.add_subcommand("encrypt", "Encrypt a message with a public key (Bob)");
    add_common(enc);
    enc->add_option("--pub", pub_path, "Public key")->required();
    add_message_options(enc, msg_opt);
    enc->add_option("--out", out_path, "Ciphertext output")->required();
    enc->add_option("--share", share_path, "Alice's particle share output (default: <out>.share)");

    CLI::App* dec = app.add_subcommand("decrypt", "Decrypt a ciphertext with a private key (Alice)");
    add_common(dec);
    dec->add_option("--priv", priv_path, "Private key")->required();
    dec->add_option("--in", msg_opt.in, "Ciphertext")->required();
    dec->add_option("--share", share_path, "Alice's particle share (default: <in>.share)");
    dec->add_option("--out", out_path, "Plaintext output")->required();

    CLI::App* attack = app.add_subcommand("attack", "Run a security experiment");
    add_common(attack);
    add_check(attack);
    std::string strategy;
    attack->add_option("--strategy,--eve", strategy, "channel-guess | distinguish | intercept-resend | "
                                                     "intercept-resend-random | none")
        ->required();
    attack->add_option("--trials", trials, "Number of trials");
    attack->add_option("--n", n, "Pairs per trial (channel-guess default 1, full runs default 8)");
    attack->add_option("--eve-axis", eve_opt.axis, "Fixed intercept axis angle (radians)");
    attack->add_option("--eve-coverage", eve_opt.coverage, "Probability that Eve touches a pair")
        ->check(CLI::Range(0.0, 1.0));
    attack->add_flag("--eve-both-legs", eve_opt.both_legs, "Measure both particles of each pair");
    attack->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
    attack->add_option("--out", out_path, "Report output");
    attack->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));

    CLI::App* selftest = app.add_subcommand("selftest", "Run the invariant battery");

    std::vector<const char*> argv;
    argv.push_back("qpkc");
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
    }

    const auto start = Clock::now();
    try {
        seed = effective_seed(seed);

        if (*keygen) {
            RandomSource rng = RandomSource(seed).split(0);
            const SecretParams params = gen_secret_params(n, rng);
            const PublicKey pub = derive_public_key(params);
            const PrivateKey priv = derive_private_key(params);
            write_file(pub_path, serialize_public(pub));
            write_file(priv_path, serialize_private(priv));
            out << "n: " << pub.n << "\nfingerprint: " << fingerprint(pub) << '\n';
            print_elapsed(out, start, timings);
            return kExitOk;
        }

        if (*run) {
            RunConfig cfg;
            cfg.n = n;
            cfg.m = m;
            cfg.seed = seed;
            cfg.fraction = fraction;
            cfg.threshold = threshold;
            cfg.eve = make_eve(eve_opt);
            if (cfg.eve && !cfg.eve->intercepts()) {
                throw std::invalid_argument("run: --eve must be an intercept-resend strategy");
            }
            const Message msg = load_message(msg_opt, true);
            const RunResult r = simulate_run(cfg, msg);
            if (!out_path.empty()) {
                write_file(out_path, render(transcript_json(cfg, msg, r), format));
            }
            out << "pairs: " << r.exchange.m << "\nsacrificed: " << r.exchange.check.sacrificed
                << "\nchsh_s: " << r.exchange.check.s_estimate << "\nverdict: " << to_string(r.exchange.check.verdict)
                << '\n';
            if (r.exchange.check.verdict == Verdict::Eavesdropped) {
                out << "eavesdropping detected; the channel string must be re-established\n";
                print_elapsed(out, start, timings);
                return kExitEavesdropped;
            }
            if (!recovered_path.empty()) {
                write_file(recovered_path, render_message(*r.recovered));
            }
            out << "message_qubits: " << msg.size() << "\nrecovered: " << (r.recovered_exactly ? "yes" : "no")
                << '\n';
            print_elapsed(out, start, timings);
            if (!r.inference_exact || !r.recovered_exactly) {
                err << "internal invariant failure: Alice's inference or decryption disagreed with Bob\n";
                return kExitInvariant;
            }
            return kExitOk;
        }

        if (*enc) {
            const PublicKey pub = parse_public(read_file(pub_path));
            const Message msg = load_message(msg_opt, false);
            const EncryptResult r = bob_encrypt(pub, msg, seed);
            write_file(out_path, serialize_ciphertext(r.ciphertext));
            write_file(share_path.empty() ? out_path + ".share" : share_path, serialize_share(r.share, pub.n));
            out << "blocks: " << r.ciphertext.block_count << "\npad_len: " << r.ciphertext.pad_len << '\n';
            print_elapsed(out, start, timings);
            return kExitOk;
        }

        if (*dec) {
            const PrivateKey priv = parse_private(read_file(priv_path));
            const Ciphertext c = parse_ciphertext(read_file(msg_opt.in));
            const std::vector<OneQubitState> share =
                parse_share(read_file(share_path.empty() ? msg_opt.in + ".share" : share_path), c.n);
            Message plain;
            try {
                plain = alice_decrypt(priv, c, share, seed);
            } catch (const DecodeError& e) {
                err << "key/ciphertext mismatch: " << e.what() << '\n';
                return kExitConfig;
            }
            write_file(out_path, render_message(plain));
            out << "decrypted_qubits: " << plain.size() << '\n';
            print_elapsed(out, start, timings);
            return kExitOk;
        }

        if (*attack) {
            if (trials == 0) {
                throw std::invalid_argument("--trials must be at least 1");
            }
            const RandomSource rng(seed);
            AttackReport report;
            Json config;
            config["seed"] = seed;
            config["trials"] = trials;
            if (strategy == "channel-guess") {
                const std::size_t k = attack->count("--n") ? n : 1;
                config["n"] = k;
                report = channel_guess_experiment(trials, rng, k, parallel);
            } else if (strategy == "distinguish") {
                report = ciphertext_distinguish_experiment(trials, rng, parallel);
            } else {
                AttackConfig ac;
                eve_opt.strategy = strategy;
                ac.eve = make_eve(eve_opt);
                if (ac.eve && !ac.eve->intercepts()) {
                    throw std::invalid_argument("unknown strategy '" + strategy + "'");
                }
                ac.n = n;
                ac.m = attack->count("--m") ? m : 2000;
                ac.fraction = fraction;
                ac.threshold = threshold;
                ac.trials = trials;
                ac.seed = seed;
                ac.parallel = parallel;
                config["n"] = ac.n;
                config["m"] = ac.m;
                config["fraction"] = ac.fraction;
                config["threshold"] = ac.threshold;
                config["eve"] = eve_json(ac.eve);
                report = full_attack_run(ac);
            }
            const Json doc = report_json(report, config);
            if (!out_path.empty()) {
                write_file(out_path, render(doc, format));
            }
            out << "strategy: " << (report.eve_active ? to_string(report.strategy) : "none")
                << "\ntrials: " << report.trials << "\nsuccess_rate: " << report.success_rate
                << "\ndetection_rate: " << report.detection_rate << "\ntheory_value: " << report.theory_value << '\n';
            print_elapsed(out, start, timings);
            return kExitOk;
        }

        if (*selftest) {
            return run_selftest(out);
        }
    } catch (const InvariantError& e) {
        err << "internal invariant failure: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DecodeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInvariant;
    }
    return kExitConfig;
}

}  // namespace qpkc

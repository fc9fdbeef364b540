// Storage-style front end: generate parameters, shard a file across
// simulated nodes, inject failures, repair with bandwidth accounting,
// decode, verify, and benchmark.
//
// Machine-readable JSON goes to stdout, human summaries to stderr.
// Exit codes: 0 success, 1 property violation, 2 usage/config error,
// 3 I/O error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "pmds/config.hpp"

namespace fs = std::filesystem;
using namespace pmds;

namespace {

struct PropertyViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int env_workers() {
    const char* v = std::getenv("PMDS_THREADS");
    if (!v) return 1;
    int w = std::atoi(v);
    return w >= 1 ? w : 1;
}

json load_json_file(const fs::path& p) {
    std::ifstream is(p);
    if (!is) throw IoError("cannot open: " + p.string());
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + p.string() + ": " + e.what());
    }
    return j;
}

struct LoadedCode {
    BuiltCode built;
    CodeConfig cfg;
};

LoadedCode load_code(const std::string& config_path, const std::string& params_path) {
    if (config_path.empty() == params_path.empty())
        throw ConfigError("exactly one of --config or --params is required");
    if (!config_path.empty()) {
        CodeConfig cfg = parse_config(load_json_file(config_path));
        return {build_from_config(cfg), cfg};
    }
    json j = load_json_file(params_path);
    auto built = build_from_params_json(j);
    CodeConfig cfg = parse_config(json{{"construction", j.at("construction")},
                                       {"mu", j.at("mu")},
                                       {"n", j.at("n")},
                                       {"r", j.at("r")},
                                       {"s", j.at("s")},
                                       {"d", j.at("d")},
                                       {"alpha_mode", j.value("alpha_mode", "auto")}});
    return {std::move(built), std::move(cfg)};
}

// shard directory contents, indexed by node; missing nodes stay empty
struct ShardDir {
    BuiltCode built;
    CodeConfig cfg;
    ShardHeader sample_header;
    std::vector<std::vector<u64>> payloads;
    u64 data_length = 0;
};

ShardDir read_shard_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::optional<ShardHeader> first;
    std::vector<std::pair<ShardHeader, std::vector<u64>>> found;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".shard") continue;
        auto bytes = read_file(entry.path());
        size_t hsize = 0;
        ShardHeader h = parse_header(bytes, &hsize);
        if (bytes.size() != hsize + h.payload_bytes) throw IoError("payload size mismatch in " + entry.path().string());
        if (!first) first = h;
        std::vector<uint8_t> body(bytes.begin() + hsize, bytes.end());
        auto f = Field::make(h.field);
        found.emplace_back(h, payload_from_bytes(*f, body));
    }
    if (!first) throw IoError("no .shard files in " + dir.string());
    ShardDir sd{build_from_header(*first), {}, *first, {}, first->data_length};
    sd.cfg.construction = to_string(first->construction);
    sd.cfg.mu = first->mu;
    sd.cfg.n = first->n;
    sd.cfg.r = first->r;
    sd.cfg.s = first->s;
    sd.cfg.d = first->d;
    sd.cfg.alpha_mode = first->alpha_mode == 2 ? "bch" : (first->alpha_mode == 1 ? "basis" : "auto");
    sd.payloads.assign(sd.built.total_nodes(), {});
    for (auto& [h, payload] : found) {
        if (h.data_length != first->data_length || h.mu != first->mu || h.n != first->n)
            throw IoError("inconsistent shard headers in " + dir.string());
        if (int(h.node) >= sd.built.total_nodes()) throw IoError("node index out of range in shard header");
        sd.payloads[h.node] = std::move(payload);
    }
    return sd;
}

void write_shard(const fs::path& dir, const BuiltCode& built, const CodeConfig& cfg, int node,
                 std::span<const u64> payload, u64 data_length) {
    built.visit([&](const auto& code) {
        auto body = payload_to_bytes(code.field(), payload);
        ShardHeader h = make_header(built, cfg, node, body.size(), data_length);
        auto bytes = serialize_header(h);
        bytes.insert(bytes.end(), body.begin(), body.end());
        write_file(dir / shard_file_name(node), bytes);
    });
}

void emit(const json& machine, const std::string& human, bool json_only) {
    std::cout << machine.dump(2) << "\n";
    if (!json_only && !human.empty()) std::cerr << human << "\n";
}

int cmd_gen_params(const std::string& config_path, const std::string& out_dir, bool json_only) {
    CodeConfig cfg = parse_config(load_json_file(config_path));
    BuiltCode built = build_from_config(cfg);
    json params = params_to_json(built, cfg);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream os(fs::path(out_dir) / "params.json");
        if (!os) throw IoError("cannot write params.json");
        os << params.dump(2) << "\n";
    }
    std::string human = "construction " + cfg.construction + ": field size " +
                        std::to_string(built.visit([](const auto& c) { return c.field().size_minus1(); }) + 1) +
                        ", ell = " + std::to_string(built.rows());
    emit(params, human, json_only);
    return 0;
}

int cmd_encode(const std::string& config_path, const std::string& params_path, const std::string& out_dir,
               const std::string& input_path, bool json_only) {
    auto lc = load_code(config_path, params_path);
    auto input = read_file(input_path);
    fs::create_directories(out_dir);
    json stats = lc.built.visit([&](const auto& code) {
        auto enc = encode_stream(code, lc.built.layout, input);
        for (int c = 0; c < lc.built.total_nodes(); ++c)
            write_shard(out_dir, lc.built, lc.cfg, c, enc.node_payload[c], enc.data_length);
        return json{{"shards", lc.built.total_nodes()},
                    {"stripes", enc.stripes},
                    {"input_bytes", input.size()},
                    {"payload_elements_per_node", enc.node_payload[0].size()}};
    });
    emit(stats, "wrote " + std::to_string(lc.built.total_nodes()) + " shards to " + out_dir, json_only);
    return 0;
}

int cmd_corrupt(const std::string& dir, const std::vector<int>& nodes, bool json_only) {
    json removed = json::array();
    for (int node : nodes) {
        fs::path p = fs::path(dir) / shard_file_name(node);
        if (!fs::exists(p)) throw IoError("no such shard: " + p.string());
        fs::remove(p);
        removed.push_back(node);
    }
    emit(json{{"erased_nodes", removed}}, "erased " + std::to_string(nodes.size()) + " shard(s)", json_only);
    return 0;
}

int cmd_repair(const std::string& dir, int node, bool json_only) {
    ShardDir sd = read_shard_dir(dir);
    if (node < 0 || node >= sd.built.total_nodes()) throw ConfigError("node index out of range");
    if (!sd.payloads[node].empty()) throw ConfigError("node " + std::to_string(node) + " is not missing");
    json stats = sd.built.visit([&](const auto& code) {
        auto rep = repair_stream(code, sd.payloads, node);
        write_shard(dir, sd.built, sd.cfg, node, rep.payload, sd.data_length);
        i64 stripes = i64(rep.payload.size()) / code.rows();
        Rational bound = msr_bound(1, code.repair_degree(), code.group_size(), code.local_parities(), code.rows());
        json j{{"node", node},
               {"downloaded_symbols", rep.downloaded},
               {"naive_symbols", rep.naive},
               {"bound_symbols", bound.num * stripes / bound.den},
               {"savings_ratio", double(rep.downloaded) / double(rep.naive)},
               {"regenerated", rep.regenerated}};
        if (!rep.regenerated) j["flag"] = "NO_REGEN";
        return j;
    });
    emit(stats,
         "repaired node " + std::to_string(node) + ": downloaded " + stats["downloaded_symbols"].dump() +
             " symbols (naive " + stats["naive_symbols"].dump() + ")",
         json_only);
    return 0;
}

int cmd_decode(const std::string& dir, const std::string& out_path, bool json_only) {
    ShardDir sd = read_shard_dir(dir);
    auto data = sd.built.visit([&](const auto& code) { return decode_stream(code, sd.built.layout, sd.payloads, sd.data_length); });
    write_file(out_path, data);
    int missing = 0;
    for (const auto& p : sd.payloads) missing += p.empty();
    emit(json{{"bytes", data.size()}, {"missing_shards", missing}},
         "decoded " + std::to_string(data.size()) + " bytes to " + out_path, json_only);
    return 0;
}

int cmd_verify(const std::string& config_path, const std::string& params_path, bool allow_large, u64 sample,
               bool json_only) {
    auto lc = load_code(config_path, params_path);
    VerifyOptions opt;
    opt.allow_large = allow_large;
    opt.sample = sample;
    opt.workers = env_workers();
    bool all_pass = true;
    json reports = json::array();
    lc.built.visit([&](const auto& code) {
        auto push = [&](VerificationReport rep) {
            json j = report_to_json(rep);
            if (!rep.pass && rep.witness) j["witness_rechecked"] = recheck_witness(code, rep);
            all_pass = all_pass && rep.pass;
            reports.push_back(std::move(j));
        };
        push(verify_local_mds(code));
        if (lc.cfg.construction == "s2-sd") push(verify_sd(code, opt));
        else push(verify_pmds(code, opt));
        push(audit_repair_bandwidth(code, lc.built.layout));
    });
    emit(json{{"all_pass", all_pass}, {"reports", reports}},
         std::string("verification ") + (all_pass ? "PASSED" : "FAILED"), json_only);
    return all_pass ? 0 : 1;
}

int cmd_bench(const std::string& config_path, const std::string& params_path, u64 bytes, bool json_only) {
    auto lc = load_code(config_path, params_path);
    std::vector<uint8_t> input(bytes);
    std::mt19937_64 rng(42);
    for (auto& b : input) b = uint8_t(rng());
    using clock = std::chrono::steady_clock;
    json stats = lc.built.visit([&](const auto& code) {
        auto t0 = clock::now();
        auto enc = encode_stream(code, lc.built.layout, input);
        auto t1 = clock::now();
        // erase a full guarantee-class pattern: r per group plus s extras
        auto payloads = enc.node_payload;
        int n = code.group_size(), r = code.local_parities(), s = code.global_parities();
        for (int g = 0; g < code.groups(); ++g)
            for (int k = n - r; k < n; ++k) payloads[g * n + k].clear();
        int extras = s;
        for (int c = 0; c < code.groups() * n && extras > 0; ++c) {
            if (!payloads[c].empty()) {
                payloads[c].clear();
                --extras;
            }
        }
        auto t2 = clock::now();
        auto out = decode_stream(code, lc.built.layout, payloads, enc.data_length);
        auto t3 = clock::now();
        if (out != input) throw PropertyViolation("bench round-trip mismatch");
        auto single = enc.node_payload;
        single[0].clear();
        auto t4 = clock::now();
        auto rep = repair_stream(code, single, 0);
        auto t5 = clock::now();
        if (rep.payload != enc.node_payload[0]) throw PropertyViolation("bench repair mismatch");
        auto secs = [](auto a, auto b) { return std::chrono::duration<double>(b - a).count(); };
        auto mbps = [&](double s_) { return s_ > 0 ? double(bytes) / 1e6 / s_ : 0.0; };
        return json{{"input_bytes", bytes},
                    {"encode_seconds", secs(t0, t1)},
                    {"encode_mb_per_s", mbps(secs(t0, t1))},
                    {"decode_seconds", secs(t2, t3)},
                    {"decode_mb_per_s", mbps(secs(t2, t3))},
                    {"repair_seconds", secs(t4, t5)},
                    {"repair_downloaded_symbols", rep.downloaded},
                    {"repair_naive_symbols", rep.naive}};
    });
    emit(stats, "bench complete", json_only);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"locally regenerating PMDS/SD erasure coding tool"};
    app.require_subcommand(1);

    std::string config_path, params_path, out_dir, input_path, shard_dir, out_file;
    std::vector<int> nodes;
    int node = -1;
    bool allow_large = false, json_only = false;
    u64 sample = 0, bench_bytes = 1 << 20;

    auto* gen = app.add_subcommand("gen-params", "resolve parameters and pick the smallest admissible field");
    gen->add_option("--config", config_path, "code config JSON")->required();
    gen->add_option("--out", out_dir, "directory for params.json");
    gen->add_flag("--json", json_only, "suppress the human summary");

    auto* enc = app.add_subcommand("encode", "shard a file across mu*n nodes");
    enc->add_option("--config", config_path, "code config JSON");
    enc->add_option("--params", params_path, "params.json from gen-params");
    enc->add_option("--out", out_dir, "shard output directory")->required();
    enc->add_option("input", input_path, "input file")->required();
    enc->add_flag("--json", json_only);

    auto* cor = app.add_subcommand("corrupt", "delete shards to simulate node failures");
    cor->add_option("--shards", shard_dir, "shard directory")->required();
    cor->add_option("--node", nodes, "node index to erase (repeatable)")->required();
    cor->add_flag("--json", json_only);

    auto* rep = app.add_subcommand("repair", "regenerate a lost node with bandwidth accounting");
    rep->add_option("--shards", shard_dir, "shard directory")->required();
    rep->add_option("--node", node, "node index to repair")->required();
    rep->add_flag("--json", json_only);

    auto* dec = app.add_subcommand("decode", "reconstruct the original file from surviving shards");
    dec->add_option("--shards", shard_dir, "shard directory")->required();
    dec->add_option("--out", out_file, "output file")->required();
    dec->add_flag("--json", json_only);

    auto* ver = app.add_subcommand("verify", "run the brute-force property verifiers");
    ver->add_option("--config", config_path);
    ver->add_option("--params", params_path);
    ver->add_flag("--allow-large", allow_large, "run pattern sweeps above the budget");
    ver->add_option("--sample", sample, "sample this many patterns instead of sweeping");
    ver->add_flag("--json", json_only);

    auto* ben = app.add_subcommand("bench", "throughput measurements at the configured parameters");
    ben->add_option("--config", config_path);
    ben->add_option("--params", params_path);
    ben->add_option("--bytes", bench_bytes, "input size (default 1 MiB)");
    ben->add_flag("--json", json_only);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_gen_params(config_path, out_dir, json_only);
        if (enc->parsed()) return cmd_encode(config_path, params_path, out_dir, input_path, json_only);
        if (cor->parsed()) return cmd_corrupt(shard_dir, nodes, json_only);
        if (rep->parsed()) return cmd_repair(shard_dir, node, json_only);
        if (dec->parsed()) return cmd_decode(shard_dir, out_file, json_only);
        if (ver->parsed()) return cmd_verify(config_path, params_path, allow_large, sample, json_only);
        if (ben->parsed()) return cmd_bench(config_path, params_path, bench_bytes, json_only);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const PropertyViolation& e) {
        std::cerr << "property violation: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

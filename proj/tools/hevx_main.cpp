// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0
//
// Single binary exposing both session roles plus a local benchmark driver, so
// a two-host experiment deploys one artifact. Flag > HEVX_* env var > default.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hevx/bench.hpp"
#include "hevx/schemes.hpp"
#include "hevx/wire.hpp"

namespace {

using namespace hevx;

struct CommonOpts {
    std::string scheme_id = "bfv-add";
    std::string scenario = "count";
    int vehicles = 50;
    int trials = 20;
    uint16_t port = 40400;
    std::string peer = "127.0.0.1";
    std::string channel = "loopback";  // bench only: loopback | sim
    size_t mtu = 1400;
    std::string profile = "ethernet";  // ethernet | wifi
    double pace_ms = -1;               // >= 0 overrides the profile pacing
    double adaptive_mult = 1.2;
    double timeout_ms = 5000;
    double sim_latency_ms = 0;
    double sim_jitter_ms = 0;
    double sim_loss = 0;
    uint64_t seed = 1;
    double presence_probability = 1.0;
    std::string out;
    bool insecure_ok = false;
    bool force = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o, bool with_network) {
    cmd->add_option("--scheme", o.scheme_id, "Parameter preset id")
        ->envname("HEVX_SCHEME")
        ->check(CLI::IsMember(preset_ids()));
    cmd->add_option("--seed", o.seed, "64-bit reproducibility seed")->envname("HEVX_SEED");
    cmd->add_flag("--insecure-ok", o.insecure_ok, "Allow toy (insecure) parameter presets")
        ->envname("HEVX_INSECURE_OK");
    if (!with_network) return;
    cmd->add_option("--scenario", o.scenario, "count | avg")
        ->envname("HEVX_SCENARIO")
        ->check(CLI::IsMember({"count", "avg"}));
    cmd->add_option("--vehicles", o.vehicles, "Simulated vehicle count")
        ->envname("HEVX_VEHICLES")
        ->check(CLI::Range(2, 1000000));
    cmd->add_option("--port", o.port, "UDP port (receiver side binds it)")->envname("HEVX_PORT");
    cmd->add_option("--mtu", o.mtu, "Datagram size cap in bytes")
        ->envname("HEVX_MTU")
        ->check(CLI::Range(size_t(64), size_t(65000)));
    cmd->add_option("--profile", o.profile, "Pacing profile: ethernet (fixed 100 ms) | wifi (1.2 x RTT)")
        ->envname("HEVX_PROFILE")
        ->check(CLI::IsMember({"ethernet", "wifi"}));
    cmd->add_option("--pace-ms", o.pace_ms, "Fixed inter-fragment delay, overrides --profile")
        ->envname("HEVX_PACE_MS");
    cmd->add_option("--adaptive-mult", o.adaptive_mult, "RTT multiplier for the wifi profile")
        ->envname("HEVX_ADAPTIVE_MULT")
        ->check(CLI::Range(1.0, 100.0));
    cmd->add_option("--timeout-ms", o.timeout_ms, "Inter-fragment receive timeout")
        ->envname("HEVX_TIMEOUT_MS");
    cmd->add_option("--presence-probability", o.presence_probability,
                    "Bernoulli presence for simulated vehicles (count scenario)")
        ->envname("HEVX_PRESENCE_PROBABILITY")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--force", o.force, "Allow a multiplicative preset with the count scenario");
}

ScenarioConfig make_scenario_config(const CommonOpts& o) {
    ScenarioConfig cfg;
    cfg.scheme_id = o.scheme_id;
    cfg.params = preset_by_id(o.scheme_id);
    cfg.scenario = o.scenario == "avg" ? ScenarioKind::AverageSpeed : ScenarioKind::Count;
    cfg.vehicle_count = o.vehicles;
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.presence_probability = o.presence_probability;
    cfg.allow_insecure = o.insecure_ok;

    if (!cfg.params.secure && !o.insecure_ok)
        throw CLI::ValidationError("--scheme", "toy presets are insecure; pass --insecure-ok to proceed");
    if (cfg.scenario == ScenarioKind::AverageSpeed && cfg.params.levels < 2)
        throw CLI::ValidationError(
            "--scenario", "avg needs a multiplicative preset (ckks-mul or toy-ckks)");
    if (cfg.scenario == ScenarioKind::Count && cfg.params.levels >= 2 && !o.force)
        throw CLI::ValidationError(
            "--scheme", "a multiplicative preset implies --scenario avg (or pass --force)");
    return cfg;
}

ChannelConfig make_channel_config(const CommonOpts& o, ChannelMode mode) {
    ChannelConfig ch;
    ch.mode = mode;
    ch.mtu = o.mtu;
    ch.recv_timeout_ms = o.timeout_ms;
    ch.port = o.port;
    ch.peer_host = o.peer;
    ch.sim.one_way_latency_ms = o.sim_latency_ms;
    ch.sim.jitter_stddev_ms = o.sim_jitter_ms;
    ch.sim.loss_probability = o.sim_loss;
    return ch;
}

PacingPolicy make_pacing(const CommonOpts& o) {
    if (o.pace_ms >= 0) return PacingPolicy::fixed(o.pace_ms);
    if (o.profile == "wifi") return PacingPolicy::adaptive(o.adaptive_mult, 1.0);
    return PacingPolicy::fixed(100.0);
}

int cmd_keygen(const CommonOpts& o) {
    ParamSet ps = preset_by_id(o.scheme_id);
    if (!ps.secure && !o.insecure_ok) {
        std::cerr << "toy presets are insecure; pass --insecure-ok to proceed\n";
        return 1;
    }
    Rng rng = o.seed != 0 ? Rng(o.seed) : Rng::from_entropy();
    KeyBundle keys = keygen(ps, rng, o.insecure_ok);

    const std::filesystem::path dir = o.out.empty() ? "." : o.out;
    std::filesystem::create_directories(dir);
    auto write_blob = [&](const WireBlob& blob, const std::string& name) {
        const auto path = dir / name;
        std::ofstream f(path, std::ios::binary);
        f.write(reinterpret_cast<const char*>(blob.body.data()),
                static_cast<std::streamsize>(blob.body.size()));
        std::cout << path.string() << ": " << blob.body.size() << " bytes\n";
    };
    write_blob(serialize(keys.pub), o.scheme_id + "-pk.hevx");
    if (keys.eval) write_blob(serialize(*keys.eval), o.scheme_id + "-ek.hevx");

    Rng sample_rng(o.seed + 1);
    Ciphertext ct = ps.scheme == Scheme::Ckks
                        ? encrypt(keys.pub, PlainRealVector{{0.0}, ps.scale_log2}, sample_rng)
                        : encrypt(keys.pub, PlainInteger{0}, sample_rng);
    std::cout << "ciphertext size: " << serialize(ct).body.size() << " bytes\n";
    return 0;
}

void print_session_result(const char* role, const ScenarioResult& res) {
    std::cout << role << " done: decrypted=" << res.decrypted_value
              << " ground_truth=" << res.ground_truth << " adds=" << res.adds_performed
              << " muls=" << res.muls_performed << "\n";
    std::cout << "  encrypt_ms=" << res.metrics.encrypt_ms << " hom_op_ms=" << res.metrics.hom_op_ms
              << " decrypt_ms=" << res.metrics.decrypt_ms << " rtt_ms=" << res.metrics.rtt_ms << "\n";
}

int cmd_send(const CommonOpts& o, int trial) {
    ScenarioConfig cfg = make_scenario_config(o);
    cfg.trials = 1;
    ChannelConfig ch_cfg = make_channel_config(o, ChannelMode::Socket);
    UdpChannel ch(0, ch_cfg.peer_host, ch_cfg.port, ch_cfg.socket_buffer_bytes);
    ScenarioResult res = sender_session(cfg, ch, make_pacing(o), ch_cfg, trial);
    print_session_result("sender", res);
    const double tol = scenario_tolerance(cfg);
    const double diff = std::abs(res.decrypted_value - res.ground_truth);
    const bool ok = tol == 0 ? diff < 0.5 : diff <= tol;
    std::cout << (ok ? "VERIFIED" : "MISMATCH") << "\n";
    return ok ? 0 : 1;
}

int cmd_recv(const CommonOpts& o, int trial) {
    ScenarioConfig cfg = make_scenario_config(o);
    cfg.trials = 1;
    ChannelConfig ch_cfg = make_channel_config(o, ChannelMode::Socket);
    UdpChannel ch(ch_cfg.port, "", 0, ch_cfg.socket_buffer_bytes);
    std::cout << "listening: " << ch.describe() << "\n";
    ScenarioResult res = receiver_session(cfg, ch, make_pacing(o), ch_cfg, trial);
    print_session_result("receiver", res);
    return 0;
}

int cmd_bench(const CommonOpts& o) {
    BenchConfig bench;
    bench.scenario = make_scenario_config(o);
    const ChannelMode mode = o.channel == "sim" ? ChannelMode::Simulated : ChannelMode::Socket;
    bench.channel = make_channel_config(o, mode);
    if (mode == ChannelMode::Socket) bench.channel.port = o.port == 40400 ? 0 : o.port;
    bench.pacing = make_pacing(o);
    bench.profile_name = o.channel == "sim" ? "sim" : "loopback";
    if (o.pace_ms < 0) bench.profile_name += "-" + o.profile;
    bench.csv_path = o.out.empty() ? "hevx-metrics.csv" : o.out;

    BenchResult result = run_bench(bench);
    if (!result.all_verified) {
        std::cerr << "bench failed: " << result.first_failure << "\n";
        return 1;
    }
    std::cout << "all " << result.outcomes.size() << " trial(s) verified; metrics in "
              << bench.csv_path << "\n";
    return 0;
}

// Minimal reader for our own CSV layout: last row is the summary.
struct CsvRun {
    RunInfo info;
    Summary summary;
};

CsvRun read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string line, last;
    std::vector<std::string> rows;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(line);
    }
    if (rows.size() < 3) throw std::runtime_error(path + ": too few rows for header+trials+summary");
    std::vector<std::string> cells;
    std::stringstream ss(rows.back());
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 17) throw std::runtime_error(path + ": expected 17 columns");

    CsvRun run;
    run.info.scheme_id = cells[0];
    run.info.scenario = cells[1];
    run.info.vehicles = std::stoi(cells[2]);
    run.info.medium_profile = cells[3];
    run.summary.trials = std::stoul(cells[16]);
    run.summary.encrypt.mean = std::stod(cells[4]);
    run.summary.hom_op.mean = std::stod(cells[5]);
    run.summary.decrypt.mean = std::stod(cells[6]);
    run.summary.total_comp.mean = std::stod(cells[7]);
    run.summary.rtt.mean = std::stod(cells[8]);
    run.summary.comm_latency.mean = std::stod(cells[9]);
    run.summary.jitter_ms = std::stod(cells[10]);
    run.summary.fragments_mean = std::stod(cells[11]);
    run.summary.frag.mean = std::stod(cells[12]);
    run.summary.reasm.mean = std::stod(cells[13]);
    return run;
}

int cmd_report(const std::vector<std::string>& csvs) {
    std::vector<std::pair<RunInfo, Summary>> runs;
    for (const auto& path : csvs) {
        CsvRun run = read_csv(path);
        print_summary(std::cout, run.info, run.summary);
        runs.emplace_back(run.info, run.summary);
    }
    if (runs.size() == 3) {
        try {
            LinearityReport rep = linearity_check(runs);
            std::cout << "scaling: hom_op(200)/hom_op(50) = " << rep.ratio
                      << ", linear fit R^2 = " << rep.r_squared << " (slope "
                      << rep.slope_ms_per_add << " ms/add)\n";
        } catch (const std::exception& e) {
            std::cout << "scaling check skipped: " << e.what() << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hevx: post-quantum homomorphic aggregation over fragmented datagrams"};
    app.require_subcommand(1);

    CommonOpts opts;
    int trial = 0;
    std::vector<std::string> csvs;

    CLI::App* keygen_cmd = app.add_subcommand("keygen", "Generate keys and report blob sizes");
    add_common_flags(keygen_cmd, opts, false);
    keygen_cmd->add_option("--out", opts.out, "Output directory")->envname("HEVX_OUT");

    CLI::App* send_cmd = app.add_subcommand("send", "Run one vehicle (sender) session");
    add_common_flags(send_cmd, opts, true);
    send_cmd->add_option("--peer", opts.peer, "Receiver host")->envname("HEVX_PEER");
    send_cmd->add_option("--trial", trial, "Trial index for seed derivation");

    CLI::App* recv_cmd = app.add_subcommand("recv", "Run one RSU (receiver) session");
    add_common_flags(recv_cmd, opts, true);
    recv_cmd->add_option("--trial", trial, "Trial index for seed derivation");

    CLI::App* bench_cmd = app.add_subcommand("bench", "Run both roles locally and write metrics");
    add_common_flags(bench_cmd, opts, true);
    bench_cmd->add_option("--trials", opts.trials, "Trials per configuration")
        ->envname("HEVX_TRIALS")
        ->check(CLI::Range(1, 100000));
    bench_cmd->add_option("--channel", opts.channel, "loopback (real UDP) | sim")
        ->envname("HEVX_CHANNEL")
        ->check(CLI::IsMember({"loopback", "sim"}));
    bench_cmd->add_option("--sim-latency-ms", opts.sim_latency_ms, "Simulated one-way latency");
    bench_cmd->add_option("--sim-jitter-ms", opts.sim_jitter_ms, "Simulated jitter stddev");
    bench_cmd->add_option("--sim-loss", opts.sim_loss, "Simulated loss probability")
        ->check(CLI::Range(0.0, 1.0));
    bench_cmd->add_option("--out", opts.out, "CSV output path")->envname("HEVX_OUT");

    CLI::App* report_cmd = app.add_subcommand("report", "Summarize CSV metrics files");
    report_cmd->add_option("--csv", csvs, "CSV file(s) from bench")->required()->expected(-1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (keygen_cmd->parsed()) return cmd_keygen(opts);
        if (send_cmd->parsed()) return cmd_send(opts, trial);
        if (recv_cmd->parsed()) return cmd_recv(opts, trial);
        if (bench_cmd->parsed()) return cmd_bench(opts);
        if (report_cmd->parsed()) return cmd_report(csvs);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

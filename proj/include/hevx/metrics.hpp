// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEVX_METRICS_HPP
#define HEVX_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hevx {

/// One benchmark trial, columns matching the latency-decomposition and
/// communication tables. All durations come from the monotonic clock.
/// comm_latency_ms is rtt_ms - hom_op_ms by definition.
struct TrialMetrics {
    int trial_index = 0;
    double encrypt_ms = 0;   // sender's encryption (encode included)
    double hom_op_ms = 0;    // receiver's add/mul work only
    double decrypt_ms = 0;   // sender's decryption
    double rtt_ms = 0;       // first ciphertext fragment out -> last result fragment in
    double comm_latency_ms = 0;
    double frag_ms = 0;      // fragmentation work, both endpoints
    double reasm_ms = 0;     // reassembly work, both endpoints
    uint64_t fragments_total = 0;  // request-direction ciphertext fragments
    uint64_t bytes_sent = 0;
    uint64_t bytes_received = 0;

    double total_comp_ms() const { return encrypt_ms + hom_op_ms + decrypt_ms; }
};

struct FieldStats {
    double mean = 0;
    double stddev = 0;  // sample stddev; 0 for a single value
};

struct Summary {
    size_t trials = 0;
    FieldStats encrypt, hom_op, decrypt, total_comp, rtt, comm_latency, frag, reasm;
    double fragments_mean = 0;
    double bytes_sent_mean = 0;
    double bytes_received_mean = 0;
    /// Mean absolute difference of consecutive trial RTTs. Variability at
    /// trial granularity; undefined (0, flagged) below two trials.
    double jitter_ms = 0;
    bool jitter_defined = false;
};

Summary summarize(std::span<const TrialMetrics> trials);

/// Run identity stamped into reports.
struct RunInfo {
    std::string scheme_id;
    std::string scenario;  // "count" | "avg"
    int vehicles = 0;
    std::string medium_profile;
    uint64_t seed = 0;
    std::string config_line;  // full resolved config, for the metadata row
};

/// Layout: one '#' metadata line, one header row, one row per trial, one
/// summary row. Columns: scheme, scenario, vehicles, medium_profile,
/// encrypt_ms, hom_op_ms, decrypt_ms, total_comp_ms, rtt_ms, comm_latency_ms,
/// jitter_ms, fragments_total, frag_ms, reasm_ms, bytes_sent, bytes_received,
/// trials. Trial rows carry the successive RTT difference in jitter_ms and
/// the 1-based trial number in the trials column.
void emit_csv(const Summary& summary, std::span<const TrialMetrics> trials, const RunInfo& info,
              const std::string& path);

/// Human-readable summary mirroring the published table layout.
void print_summary(std::ostream& os, const RunInfo& info, const Summary& summary);

struct LinearityReport {
    double ratio = 0;      // hom_op(N=200) / hom_op(N=50)
    double r_squared = 0;  // linear fit of hom_op vs (N - 1)
    double slope_ms_per_add = 0;
    double intercept_ms = 0;
};

/// Scaling check over the three vehicle counts. All summaries must share
/// scheme and scenario and cover N = 50, 100, 200.
LinearityReport linearity_check(std::span<const std::pair<RunInfo, Summary>> runs);

/// Least-squares helper exposed for reports: R^2 of y against x.
double r_squared_linear(std::span<const double> x, std::span<const double> y);

}  // namespace hevx

#endif

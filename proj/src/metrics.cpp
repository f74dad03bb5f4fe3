// Copyright (C) 2026 hevx authors
// SPDX-License-Identifier: Apache-2.0

#include "hevx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hevx {

namespace {

FieldStats stats(std::span<const double> v) {
    FieldStats s;
    if (v.empty()) return s;
    double sum = 0;
    for (double x : v) sum += x;
    s.mean = sum / double(v.size());
    if (v.size() > 1) {
        double ss = 0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / double(v.size() - 1));
    }
    return s;
}

template <typename Getter>
FieldStats field_stats(std::span<const TrialMetrics> trials, Getter get) {
    std::vector<double> v;
    v.reserve(trials.size());
    for (const auto& t : trials) v.push_back(get(t));
    return stats(v);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << v;
    return os.str();
}

}  // namespace

Summary summarize(std::span<const TrialMetrics> trials) {
    if (trials.empty()) throw std::invalid_argument("summarize: no completed trials");
    Summary s;
    s.trials = trials.size();
    s.encrypt = field_stats(trials, [](const auto& t) { return t.encrypt_ms; });
    s.hom_op = field_stats(trials, [](const auto& t) { return t.hom_op_ms; });
    s.decrypt = field_stats(trials, [](const auto& t) { return t.decrypt_ms; });
    s.total_comp = field_stats(trials, [](const auto& t) { return t.total_comp_ms(); });
    s.rtt = field_stats(trials, [](const auto& t) { return t.rtt_ms; });
    s.comm_latency = field_stats(trials, [](const auto& t) { return t.comm_latency_ms; });
    s.frag = field_stats(trials, [](const auto& t) { return t.frag_ms; });
    s.reasm = field_stats(trials, [](const auto& t) { return t.reasm_ms; });
    double frag_sum = 0, bs = 0, br = 0;
    for (const auto& t : trials) {
        frag_sum += double(t.fragments_total);
        bs += double(t.bytes_sent);
        br += double(t.bytes_received);
    }
    s.fragments_mean = frag_sum / double(trials.size());
    s.bytes_sent_mean = bs / double(trials.size());
    s.bytes_received_mean = br / double(trials.size());

    if (trials.size() >= 2) {
        double acc = 0;
        for (size_t i = 1; i < trials.size(); ++i)
            acc += std::abs(trials[i].rtt_ms - trials[i - 1].rtt_ms);
        s.jitter_ms = acc / double(trials.size() - 1);
        s.jitter_defined = true;
    }
    return s;
}

void emit_csv(const Summary& summary, std::span<const TrialMetrics> trials, const RunInfo& info,
              const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);

    out << "# " << info.config_line << "\n";
    out << "scheme,scenario,vehicles,medium_profile,encrypt_ms,hom_op_ms,decrypt_ms,total_comp_ms,"
           "rtt_ms,comm_latency_ms,jitter_ms,fragments_total,frag_ms,reasm_ms,bytes_sent,"
           "bytes_received,trials\n";

    auto prefix = [&] {
        out << info.scheme_id << ',' << info.scenario << ',' << info.vehicles << ','
            << info.medium_profile << ',';
    };

    for (size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        const double succ_diff = i == 0 ? 0.0 : std::abs(t.rtt_ms - trials[i - 1].rtt_ms);
        prefix();
        out << fmt(t.encrypt_ms) << ',' << fmt(t.hom_op_ms) << ',' << fmt(t.decrypt_ms) << ','
            << fmt(t.total_comp_ms()) << ',' << fmt(t.rtt_ms) << ',' << fmt(t.comm_latency_ms) << ','
            << fmt(succ_diff) << ',' << t.fragments_total << ',' << fmt(t.frag_ms) << ','
            << fmt(t.reasm_ms) << ',' << t.bytes_sent << ',' << t.bytes_received << ',' << (i + 1)
            << "\n";
    }

    prefix();
    out << fmt(summary.encrypt.mean) << ',' << fmt(summary.hom_op.mean) << ','
        << fmt(summary.decrypt.mean) << ',' << fmt(summary.total_comp.mean) << ','
        << fmt(summary.rtt.mean) << ',' << fmt(summary.comm_latency.mean) << ','
        << fmt(summary.jitter_ms) << ',' << static_cast<uint64_t>(summary.fragments_mean + 0.5) << ','
        << fmt(summary.frag.mean) << ',' << fmt(summary.reasm.mean) << ','
        << static_cast<uint64_t>(summary.bytes_sent_mean + 0.5) << ','
        << static_cast<uint64_t>(summary.bytes_received_mean + 0.5) << ',' << summary.trials << "\n";
    if (!out) throw std::runtime_error("emit_csv: write failure on " + path);
}

void print_summary(std::ostream& os, const RunInfo& info, const Summary& s) {
    auto pm = [](const FieldStats& f) {
        std::ostringstream o;
        o << std::fixed << std::setprecision(2) << f.mean << " ± " << f.stddev;
        return o.str();
    };
    os << info.scheme_id << "  " << info.scenario << "  vehicles=" << info.vehicles << "  medium="
       << info.medium_profile << "  trials=" << s.trials << "\n";
    os << "  encrypt (ms):      " << pm(s.encrypt) << "\n";
    os << "  homomorphic (ms):  " << pm(s.hom_op) << "\n";
    os << "  decrypt (ms):      " << pm(s.decrypt) << "\n";
    os << "  total comp (ms):   " << pm(s.total_comp) << "\n";
    os << "  rtt (ms):          " << pm(s.rtt) << "\n";
    os << "  comm latency (ms): " << pm(s.comm_latency) << "\n";
    os << "  jitter (ms):       " << std::fixed << std::setprecision(2) << s.jitter_ms
       << (s.jitter_defined ? "" : " (undefined: single trial)") << "\n";
    os << "  fragments:         " << static_cast<uint64_t>(s.fragments_mean + 0.5) << "\n";
    os << "  frag time (ms):    " << pm(s.frag) << "\n";
    os << "  reasm time (ms):   " << pm(s.reasm) << "\n";
}

double r_squared_linear(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("r_squared_linear: need >= 2 points");
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("r_squared_linear: degenerate x values");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ymean = sy / n;
    for (size_t i = 0; i < x.size(); ++i) {
        const double fit = slope * x[i] + intercept;
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - ymean) * (y[i] - ymean);
    }
    return ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
}

LinearityReport linearity_check(std::span<const std::pair<RunInfo, Summary>> runs) {
    if (runs.size() != 3) throw std::invalid_argument("linearity_check: need N = 50, 100, 200 runs");
    for (size_t i = 1; i < runs.size(); ++i) {
        if (runs[i].first.scheme_id != runs[0].first.scheme_id ||
            runs[i].first.scenario != runs[0].first.scenario)
            throw std::invalid_argument("linearity_check: mismatched scheme/scenario");
    }
    auto sorted = std::vector<std::pair<RunInfo, Summary>>(runs.begin(), runs.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first.vehicles < b.first.vehicles; });
    if (sorted[0].first.vehicles != 50 || sorted[1].first.vehicles != 100 || sorted[2].first.vehicles != 200)
        throw std::invalid_argument("linearity_check: vehicle counts must be {50, 100, 200}");

    std::vector<double> x, y;
    for (const auto& [info, sum] : sorted) {
        x.push_back(double(info.vehicles - 1));  // additions performed
        y.push_back(sum.hom_op.mean);
    }
    LinearityReport rep;
    rep.ratio = y[2] / y[0];
    rep.r_squared = r_squared_linear(x, y);

    const double n = 3, sx = x[0] + x[1] + x[2], sy = y[0] + y[1] + y[2];
    const double sxx = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    const double sxy = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    rep.slope_ms_per_add = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.intercept_ms = (sy - rep.slope_ms_per_add * sx) / n;
    return rep;
}

}  // namespace hevx

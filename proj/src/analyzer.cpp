#include "kernelscope/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kernelscope::analysis {

namespace {

using std::int64_t;
using std::uint64_t;

std::string key_name(VariantId v, ExecPath p) {
    return std::string(model::to_string(v)) + "/" + model::to_string(p);
}

// Mean with the warm-up rule: >= 3 samples drop the first.
double aggregate_group(std::vector<RuntimeRecord> group) {
    const bool all_have_ids =
        std::all_of(group.begin(), group.end(),
                    [](const RuntimeRecord& r) { return r.run_id.has_value(); });
    if (all_have_ids)
        std::stable_sort(group.begin(), group.end(),
                         [](const RuntimeRecord& a, const RuntimeRecord& b) {
                             return *a.run_id < *b.run_id;
                         });
    std::size_t first = group.size() >= 3 ? 1 : 0;
    double sum = 0.0;
    for (std::size_t i = first; i < group.size(); ++i) sum += group[i].runtime_ms;
    return sum / static_cast<double>(group.size() - first);
}

} // namespace

std::uint64_t flops(ExecPath path, const ConvShape& s) {
    const auto B = static_cast<uint64_t>(s.B);
    const auto H = static_cast<uint64_t>(s.H);
    const auto L = static_cast<uint64_t>(s.L);
    const auto K = static_cast<uint64_t>(s.K);
    switch (path) {
        case ExecPath::FWD:
        case ExecPath::BWD_IN:
            return B * H * L * 2 * K;
        case ExecPath::BWD_K:
            return H * K * B * L * 2;
    }
    return 0;
}

double achieved_throughput_gflops(std::uint64_t flop_count, double runtime_ms) {
    if (!(runtime_ms > 0.0))
        throw AnalysisError("achieved_throughput: runtime must be positive, got " +
                            std::to_string(runtime_ms));
    return static_cast<double>(flop_count) / (runtime_ms * 1e6);
}

double arithmetic_intensity(std::uint64_t flop_count, const TrafficEstimate& traffic) {
    if (traffic.total == 0) throw AnalysisError("arithmetic_intensity: zero traffic");
    return static_cast<double>(flop_count) / static_cast<double>(traffic.total);
}

double ridge_flop_per_byte(const DeviceSpec& d) { return d.peak_fp32 / d.peak_bw; }

std::optional<double> RuntimeSet::path_sum(VariantId v) const {
    double sum = 0.0;
    for (ExecPath p : model::kAllPaths) {
        const auto ms = kernel(v, p);
        if (!ms) return std::nullopt;
        sum += *ms;
    }
    return sum;
}

RuntimeSet aggregate(const std::vector<RuntimeRecord>& kernel_records,
                     const std::vector<RuntimeRecord>& epoch_records,
                     const std::vector<RuntimeRecord>& conv_total_records) {
    RuntimeSet out;
    std::map<std::pair<VariantId, ExecPath>, std::vector<RuntimeRecord>> kernel_groups;
    for (const auto& r : kernel_records) {
        if (!(r.runtime_ms > 0.0))
            throw AnalysisError("runtime must be positive for " +
                                key_name(r.variant, r.path));
        kernel_groups[{r.variant, r.path}].push_back(r);
    }
    for (auto& [key, group] : kernel_groups)
        out.kernel_ms[key] = aggregate_group(std::move(group));

    std::map<VariantId, std::vector<RuntimeRecord>> epoch_groups, total_groups;
    for (const auto& r : epoch_records) epoch_groups[r.variant].push_back(r);
    for (const auto& r : conv_total_records) total_groups[r.variant].push_back(r);
    for (auto& [v, group] : epoch_groups) out.epoch_ms[v] = aggregate_group(std::move(group));
    for (auto& [v, group] : total_groups)
        out.conv_total_ms[v] = aggregate_group(std::move(group));
    return out;
}

BandwidthReport effective_bandwidth(VariantId v, const RuntimeSet& runtimes,
                                    const ConvShape& shape, const DeviceSpec& d) {
    BandwidthReport rep{v, std::nullopt, std::nullopt, {}};
    if (v == VariantId::Naive) return rep; // traffic model cannot back a bandwidth claim

    std::vector<std::string> missing;
    for (ExecPath p : {ExecPath::FWD, ExecPath::BWD_IN})
        if (!runtimes.kernel(v, p)) missing.push_back(key_name(v, p));
    if (!missing.empty()) {
        std::string msg = "effective_bandwidth: missing runtime records:";
        for (const auto& m : missing) msg += " " + m;
        throw AnalysisError(msg);
    }

    for (ExecPath p : model::kAllPaths) {
        const auto ms = runtimes.kernel(v, p);
        if (!ms) continue;
        const auto traffic = model::memory_traffic(v, p, shape);
        // bytes / ms = 1e-6 GB / 1e-3 s -> multiply by 1e-6 for GB/s.
        rep.per_path_gbs[p] = static_cast<double>(traffic.total) / *ms * 1e-6;
    }
    const double mean =
        (rep.per_path_gbs.at(ExecPath::FWD) + rep.per_path_gbs.at(ExecPath::BWD_IN)) / 2.0;
    rep.eff_bw_gbs = mean;
    rep.peak_util = mean / d.peak_bw;
    return rep;
}

std::vector<RooflinePoint> roofline_points(const RuntimeSet& runtimes, const ConvShape& shape,
                                           const DeviceSpec& d) {
    const double ridge = ridge_flop_per_byte(d);
    std::vector<RooflinePoint> out;
    for (VariantId v : model::kAllVariants) {
        for (ExecPath p : model::kAllPaths) {
            const auto ms = runtimes.kernel(v, p);
            if (!ms) continue;
            const auto traffic = model::memory_traffic(v, p, shape);
            const uint64_t f = flops(p, shape);
            RooflinePoint pt;
            pt.variant = v;
            pt.path = p;
            pt.ai = arithmetic_intensity(f, traffic);
            pt.gflops = achieved_throughput_gflops(f, *ms);
            pt.bound = pt.ai > ridge ? Bound::ComputeBound : Bound::MemoryBound;
            pt.roof_gflops = std::min(d.peak_fp32, pt.ai * d.peak_bw);
            pt.ai_lower_bound = !traffic.bandwidth_reliable;
            out.push_back(pt);
        }
    }
    if (out.empty()) throw AnalysisError("roofline_points: no records");
    return out;
}

std::vector<SpeedupRow> speedup_table(const RuntimeSet& runtimes, VariantId baseline) {
    std::vector<std::string> missing;
    for (ExecPath p : model::kAllPaths)
        if (!runtimes.kernel(baseline, p)) missing.push_back(key_name(baseline, p));
    if (!missing.empty()) {
        std::string msg = "speedup_table: baseline records missing:";
        for (const auto& m : missing) msg += " " + m;
        throw AnalysisError(msg);
    }

    std::vector<SpeedupRow> rows;
    for (VariantId v : model::kAllVariants) {
        SpeedupRow row{v, {}, 0.0};
        bool any = false;
        for (ExecPath p : model::kAllPaths) {
            const auto ms = runtimes.kernel(v, p);
            if (!ms) continue;
            row.per_path[p] = *runtimes.kernel(baseline, p) / *ms;
            any = true;
        }
        const auto base_total = runtimes.path_sum(baseline);
        const auto var_total = runtimes.path_sum(v);
        if (base_total && var_total) row.conv_total = *base_total / *var_total;
        if (any) rows.push_back(row);
    }
    return rows;
}

EpochRecord::EpochRecord(VariantId v, double epoch_seconds, double conv_ms)
    : variant(v), epoch_s(epoch_seconds), conv_total_ms(conv_ms) {
    if (!(epoch_s > 0.0)) throw AnalysisError("EpochRecord: epoch time must be positive");
    if (!(conv_total_ms > 0.0))
        throw AnalysisError("EpochRecord: conv total must be positive");
    if (!(conv_total_ms / 1000.0 < epoch_s))
        throw AnalysisError("EpochRecord: conv total " + std::to_string(conv_total_ms) +
                            " ms does not fit inside epoch " + std::to_string(epoch_s) + " s");
}

EpochTranslation epoch_translation(const EpochRecord& base, const EpochRecord& variant) {
    EpochTranslation t;
    t.measured_speedup = base.epoch_s / variant.epoch_s;
    const double saved_s = (base.conv_total_ms - variant.conv_total_ms) / 1000.0;
    const double predicted_epoch = base.epoch_s - saved_s;
    if (!(predicted_epoch > 0.0))
        throw AnalysisError("epoch_translation: fixed-overhead model violated, predicted "
                            "epoch time is non-positive");
    t.predicted_speedup = base.epoch_s / predicted_epoch;
    t.nonkernel_share_base = 1.0 - base.conv_total_ms / 1000.0 / base.epoch_s;
    t.nonkernel_share_variant = 1.0 - variant.conv_total_ms / 1000.0 / variant.epoch_s;
    return t;
}

} // namespace kernelscope::analysis

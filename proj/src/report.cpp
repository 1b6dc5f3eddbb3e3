#include "kernelscope/report.hpp"

#include <cstdio>
#include <ostream>

namespace kernelscope::cli {

namespace {

using analysis::Bound;
using model::ExecPath;
using model::VariantId;

constexpr ExecPath kPaths[] = {ExecPath::FWD, ExecPath::BWD_IN, ExecPath::BWD_K};

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string opt_fixed(const std::optional<double>& v, int decimals) {
    return v ? fmt_fixed(*v, decimals) : "N/A";
}

} // namespace

std::string fmt_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

ReportBundle build_report(const TimingLog& log, const DeviceSpec& device,
                          const ConvShape& shape, const Provenance& provenance) {
    if (log.empty()) throw analysis::AnalysisError("no records in timing log");

    ReportBundle bundle;
    bundle.provenance = provenance;
    bundle.provenance.device_name = device.name;
    bundle.runtimes = analysis::aggregate(log.kernel, log.epoch, log.conv_total);

    // Every variant that appears at all must carry the three kernel paths.
    std::vector<std::string> gaps;
    for (VariantId v : model::kAllVariants) {
        bool mentioned = bundle.runtimes.epoch_ms.count(v) != 0 ||
                         bundle.runtimes.conv_total_ms.count(v) != 0;
        for (ExecPath p : kPaths) mentioned |= bundle.runtimes.kernel(v, p).has_value();
        if (!mentioned) continue;
        for (ExecPath p : kPaths)
            if (!bundle.runtimes.kernel(v, p))
                gaps.push_back(std::string("(") + model::to_string(v) + ", " +
                               model::to_string(p) + ")");
    }
    if (!gaps.empty()) {
        std::string msg = "timing log is missing rows:";
        for (const auto& g : gaps) msg += " " + g;
        throw analysis::AnalysisError(msg);
    }

    bundle.speedups = analysis::speedup_table(bundle.runtimes, VariantId::Naive);
    for (VariantId v : model::kAllVariants) {
        if (!bundle.runtimes.kernel(v, ExecPath::FWD)) continue;
        bundle.bandwidth.push_back(
            analysis::effective_bandwidth(v, bundle.runtimes, shape, device));
    }
    bundle.roofline = analysis::roofline_points(bundle.runtimes, shape, device);

    // Epoch translation vs naive; conv totals prefer a supplied conv_total
    // row over the recomputed path sum.
    const auto conv_ms = [&](VariantId v) -> std::optional<double> {
        auto it = bundle.runtimes.conv_total_ms.find(v);
        if (it != bundle.runtimes.conv_total_ms.end()) return it->second;
        return bundle.runtimes.path_sum(v);
    };
    const auto base_epoch = bundle.runtimes.epoch_ms.find(VariantId::Naive);
    if (base_epoch != bundle.runtimes.epoch_ms.end()) {
        const auto base_conv = conv_ms(VariantId::Naive);
        for (VariantId v : model::kAllVariants) {
            if (v == VariantId::Naive) continue;
            const auto var_epoch = bundle.runtimes.epoch_ms.find(v);
            const auto var_conv = conv_ms(v);
            if (var_epoch == bundle.runtimes.epoch_ms.end() || !base_conv || !var_conv)
                continue;
            analysis::EpochRecord base(VariantId::Naive, base_epoch->second / 1000.0,
                                       *base_conv);
            analysis::EpochRecord var(v, var_epoch->second / 1000.0, *var_conv);
            bundle.epochs.push_back({v, analysis::epoch_translation(base, var)});
        }
    }
    return bundle;
}

void write_speedups_csv(std::ostream& out, const ReportBundle& bundle) {
    out << "variant,fwd,bwd_in,bwd_k,conv_total\n";
    for (const auto& row : bundle.speedups) {
        out << model::to_string(row.variant);
        for (ExecPath p : kPaths) {
            auto it = row.per_path.find(p);
            out << "," << (it == row.per_path.end() ? "N/A" : fmt_fixed(it->second, 3));
        }
        out << "," << fmt_fixed(row.conv_total, 3) << "\n";
    }
}

void write_bandwidth_csv(std::ostream& out, const ReportBundle& bundle) {
    out << "variant,eff_bw_gbs,peak_util_pct,fwd_gbs,bwd_in_gbs,bwd_k_gbs\n";
    for (const auto& rep : bundle.bandwidth) {
        out << model::to_string(rep.variant) << "," << opt_fixed(rep.eff_bw_gbs, 2) << ","
            << (rep.peak_util ? fmt_fixed(*rep.peak_util * 100.0, 2) : "N/A");
        for (ExecPath p : kPaths) {
            auto it = rep.per_path_gbs.find(p);
            out << "," << (it == rep.per_path_gbs.end() ? "N/A" : fmt_fixed(it->second, 2));
        }
        out << "\n";
    }
}

void write_roofline_csv(std::ostream& out, const ReportBundle& bundle) {
    out << "variant,path,ai_flop_per_byte,gflops,bound,roof_gflops,ai_lower_bound\n";
    for (const auto& pt : bundle.roofline) {
        out << model::to_string(pt.variant) << "," << model::to_string(pt.path) << ","
            << fmt_fixed(pt.ai, 4) << "," << fmt_fixed(pt.gflops, 3) << ","
            << (pt.bound == Bound::MemoryBound ? "memory" : "compute") << ","
            << fmt_fixed(pt.roof_gflops, 3) << "," << (pt.ai_lower_bound ? 1 : 0) << "\n";
    }
}

void write_report_txt(std::ostream& out, const ReportBundle& bundle,
                      const DeviceSpec& device) {
    const auto& prov = bundle.provenance;
    out << "# kernelscope analyze report\n";
    out << "# timing_csv: " << prov.timing_csv << "\n";
    out << "# device_spec: " << prov.device_spec << "\n";
    out << "# shape: B=" << prov.shape.B << " H=" << prov.shape.H << " L=" << prov.shape.L
        << " K=" << prov.shape.K << "\n";
    out << "# device: " << prov.device_name << " (peak_bw " << fmt_fixed(device.peak_bw, 2)
        << " GB/s, peak_fp32 " << fmt_fixed(device.peak_fp32, 2) << " GFLOP/s, ridge "
        << fmt_fixed(analysis::ridge_flop_per_byte(device), 2) << " FLOP/B)\n\n";

    out << "Runtimes (ms)\n";
    out << pad_right("variant", 11) << pad_left("fwd", 9) << pad_left("bwd_in", 9)
        << pad_left("bwd_k", 9) << pad_left("conv(sum)", 11) << pad_left("conv(row)", 11)
        << pad_left("epoch(s)", 10) << "\n";
    for (VariantId v : model::kAllVariants) {
        if (!bundle.runtimes.kernel(v, ExecPath::FWD)) continue;
        out << pad_right(model::to_string(v), 11);
        for (ExecPath p : kPaths) out << pad_left(opt_fixed(bundle.runtimes.kernel(v, p), 2), 9);
        out << pad_left(opt_fixed(bundle.runtimes.path_sum(v), 2), 11);
        auto row = bundle.runtimes.conv_total_ms.find(v);
        out << pad_left(
            row == bundle.runtimes.conv_total_ms.end() ? "N/A" : fmt_fixed(row->second, 2), 11);
        auto ep = bundle.runtimes.epoch_ms.find(v);
        out << pad_left(
            ep == bundle.runtimes.epoch_ms.end() ? "N/A" : fmt_fixed(ep->second / 1000.0, 2),
            10);
        out << "\n";
    }

    out << "\nSpeedup vs naive\n";
    out << pad_right("variant", 11) << pad_left("fwd", 9) << pad_left("bwd_in", 9)
        << pad_left("bwd_k", 9) << pad_left("conv_total", 12) << "\n";
    for (const auto& row : bundle.speedups) {
        out << pad_right(model::to_string(row.variant), 11);
        for (ExecPath p : kPaths) {
            auto it = row.per_path.find(p);
            out << pad_left(it == row.per_path.end() ? "N/A" : fmt_fixed(it->second, 3), 9);
        }
        out << pad_left(fmt_fixed(row.conv_total, 3), 12) << "\n";
    }

    out << "\nEffective bandwidth (counter-free estimate; naive not estimable)\n";
    out << pad_right("variant", 11) << pad_left("eff_bw(GB/s)", 13) << pad_left("peak_util", 11)
        << pad_left("fwd", 9) << pad_left("bwd_in", 9) << pad_left("bwd_k", 9) << "\n";
    for (const auto& rep : bundle.bandwidth) {
        out << pad_right(model::to_string(rep.variant), 11)
            << pad_left(opt_fixed(rep.eff_bw_gbs, 2), 13)
            << pad_left(rep.peak_util ? fmt_fixed(*rep.peak_util * 100.0, 1) + "%" : "N/A", 11);
        for (ExecPath p : kPaths) {
            auto it = rep.per_path_gbs.find(p);
            out << pad_left(it == rep.per_path_gbs.end() ? "N/A" : fmt_fixed(it->second, 2), 9);
        }
        out << "\n";
    }

    if (!bundle.epochs.empty()) {
        out << "\nEpoch translation vs naive (fixed-overhead model)\n";
        out << pad_right("variant", 11) << pad_left("measured", 10) << pad_left("predicted", 11)
            << pad_left("nonkernel", 11) << "\n";
        for (const auto& row : bundle.epochs) {
            out << pad_right(model::to_string(row.variant), 11)
                << pad_left(fmt_fixed(row.translation.measured_speedup, 3), 10)
                << pad_left(fmt_fixed(row.translation.predicted_speedup, 3), 11)
                << pad_left(fmt_fixed(row.translation.nonkernel_share_variant * 100.0, 1) + "%",
                            11)
                << "\n";
        }
    }

    out << "\nRoofline points (GFLOP/s vs FLOP/byte)\n";
    out << pad_right("variant", 11) << pad_right("path", 8) << pad_left("AI", 8)
        << pad_left("GFLOP/s", 10) << pad_left("bound", 8) << pad_left("roof", 10) << "\n";
    for (const auto& pt : bundle.roofline) {
        out << pad_right(model::to_string(pt.variant), 11)
            << pad_right(model::to_string(pt.path), 8) << pad_left(fmt_fixed(pt.ai, 2), 8)
            << pad_left(fmt_fixed(pt.gflops, 2), 10)
            << pad_left(pt.bound == Bound::MemoryBound ? "memory" : "compute", 8)
            << pad_left(fmt_fixed(pt.roof_gflops, 2), 10)
            << (pt.ai_lower_bound ? "  (AI is a lower bound)" : "") << "\n";
    }
}

} // namespace kernelscope::cli

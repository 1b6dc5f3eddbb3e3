#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kernelscope/device_spec.hpp"
#include "kernelscope/exec_model.hpp"
#include "kernelscope/shape.hpp"

namespace kernelscope::analysis {

using model::ExecPath;
using model::TrafficEstimate;
using model::VariantId;

class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One measured kernel time.
struct RuntimeRecord {
    VariantId variant;
    ExecPath path;
    double runtime_ms = 0.0; // > 0
    std::optional<std::int64_t> run_id;
};

// Multiply-add pairs count as two floating-point operations.
// FWD and BWD_IN: B*H*L*2K; BWD_K: H*K*B*L*2 (same value, distinct formula).
std::uint64_t flops(ExecPath path, const ConvShape& shape);

double achieved_throughput_gflops(std::uint64_t flop_count, double runtime_ms);

double arithmetic_intensity(std::uint64_t flop_count, const TrafficEstimate& traffic);

// AI where the bandwidth ramp meets the compute ceiling: peak_fp32 / peak_bw.
double ridge_flop_per_byte(const DeviceSpec& d);

// --- Aggregated runtimes ---------------------------------------------------

// Per-(variant,path) mean runtimes. With >= 3 samples the first (warm-up)
// sample is dropped before averaging; order is by run_id when every sample
// carries one, input order otherwise.
struct RuntimeSet {
    std::map<std::pair<VariantId, ExecPath>, double> kernel_ms;
    std::map<VariantId, double> epoch_ms;      // optional epoch rows
    std::map<VariantId, double> conv_total_ms; // optional conv_total rows

    [[nodiscard]] std::optional<double> kernel(VariantId v, ExecPath p) const {
        auto it = kernel_ms.find({v, p});
        if (it == kernel_ms.end()) return std::nullopt;
        return it->second;
    }
    // Conv total recomputed from the three path runtimes.
    [[nodiscard]] std::optional<double> path_sum(VariantId v) const;
};

RuntimeSet aggregate(const std::vector<RuntimeRecord>& kernel_records,
                     const std::vector<RuntimeRecord>& epoch_records = {},
                     const std::vector<RuntimeRecord>& conv_total_records = {});

// --- Effective bandwidth ---------------------------------------------------

struct BandwidthReport {
    VariantId variant;
    // Mean of the FWD and BWD_IN per-path bandwidths; absent for Naive,
    // whose traffic estimate cannot support a bandwidth claim.
    std::optional<double> eff_bw_gbs;
    std::optional<double> peak_util; // fraction of d.peak_bw
    std::map<ExecPath, double> per_path_gbs;
};

BandwidthReport effective_bandwidth(VariantId v, const RuntimeSet& runtimes,
                                    const ConvShape& shape, const DeviceSpec& d);

// --- Roofline ----------------------------------------------------------------

enum class Bound { MemoryBound, ComputeBound };

struct RooflinePoint {
    VariantId variant;
    ExecPath path;
    double ai = 0.0;           // FLOP/byte
    double gflops = 0.0;       // achieved
    Bound bound = Bound::MemoryBound;
    double roof_gflops = 0.0;  // min(peak_fp32, ai*peak_bw)
    bool ai_lower_bound = false; // Naive: AI from logical traffic only
};

// One point per (variant,path) present in the runtime set, in canonical
// order (variant: naive..warp, path: fwd,bwd_in,bwd_k). A point sits on the
// memory side when ai <= ridge; equality classifies as memory-bound.
std::vector<RooflinePoint> roofline_points(const RuntimeSet& runtimes, const ConvShape& shape,
                                           const DeviceSpec& d);

// --- Speedups and epoch translation ---------------------------------------

struct SpeedupRow {
    VariantId variant;
    std::map<ExecPath, double> per_path;
    double conv_total = 0.0; // from path sums
};

std::vector<SpeedupRow> speedup_table(const RuntimeSet& runtimes,
                                      VariantId baseline = VariantId::Naive);

struct EpochRecord {
    VariantId variant;
    double epoch_s = 0.0;       // seconds
    double conv_total_ms = 0.0; // milliseconds, conv_total_ms/1000 < epoch_s

    EpochRecord(VariantId v, double epoch_seconds, double conv_ms);
};

struct EpochTranslation {
    double measured_speedup = 0.0;  // base epoch / variant epoch
    double predicted_speedup = 0.0; // fixed-overhead model
    double nonkernel_share_base = 0.0;
    double nonkernel_share_variant = 0.0;
};

// Fixed-overhead model: predicted = E_b / (E_b - (C_b - C_v)/1000); the gap
// to the measured speedup quantifies how much non-conv time also changed.
EpochTranslation epoch_translation(const EpochRecord& base, const EpochRecord& variant);

} // namespace kernelscope::analysis

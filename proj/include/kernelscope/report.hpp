#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kernelscope/analyzer.hpp"
#include "kernelscope/timing_log.hpp"

namespace kernelscope::cli {

struct Provenance {
    std::string timing_csv;
    std::string device_spec;
    ConvShape shape{1, 1, 1, 1};
    std::string device_name;
};

struct EpochRow {
    model::VariantId variant;
    analysis::EpochTranslation translation;
};

// Everything cmd_analyze derives from one timing log: every cell traces back
// to an input row or a model formula.
struct ReportBundle {
    Provenance provenance;
    analysis::RuntimeSet runtimes;
    std::vector<analysis::SpeedupRow> speedups;
    std::vector<analysis::BandwidthReport> bandwidth;
    std::vector<analysis::RooflinePoint> roofline;
    std::vector<EpochRow> epochs; // vs the naive baseline, when epoch rows exist
};

// Validates completeness (each variant present in the log must carry all of
// fwd/bwd_in/bwd_k) and runs the full analysis pipeline.
ReportBundle build_report(const TimingLog& log, const DeviceSpec& device,
                          const ConvShape& shape, const Provenance& provenance);

// Deterministic writers: fixed row order (variant naive<coalesced<shared<warp,
// path fwd<bwd_in<bwd_k) and fixed decimal formatting.
void write_speedups_csv(std::ostream& out, const ReportBundle& bundle);
void write_bandwidth_csv(std::ostream& out, const ReportBundle& bundle);
void write_roofline_csv(std::ostream& out, const ReportBundle& bundle);
void write_report_txt(std::ostream& out, const ReportBundle& bundle, const DeviceSpec& device);

// snprintf-based fixed-point formatting, locale-independent.
std::string fmt_fixed(double v, int decimals);

} // namespace kernelscope::cli

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kernelscope/analyzer.hpp"

namespace kernelscope::cli {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parsed timing CSV. Header `variant,path,runtime_ms,run_id` is required;
// all runtimes are milliseconds, including epoch rows. Blank lines and
// lines starting with '#' are skipped.
struct TimingLog {
    std::vector<analysis::RuntimeRecord> kernel;     // fwd / bwd_in / bwd_k rows
    std::vector<analysis::RuntimeRecord> epoch;      // path column "epoch"
    std::vector<analysis::RuntimeRecord> conv_total; // path column "conv_total"

    [[nodiscard]] bool empty() const {
        return kernel.empty() && epoch.empty() && conv_total.empty();
    }
};

TimingLog parse_timing_csv(const std::string& text);
TimingLog load_timing_csv(const std::string& path);

} // namespace kernelscope::cli

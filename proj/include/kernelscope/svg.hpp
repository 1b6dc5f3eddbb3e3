#pragma once

#include <iosfwd>
#include <vector>

#include "kernelscope/analyzer.hpp"

namespace kernelscope::cli {

// Log-log roofline chart: memory roof is the slope-1 line through
// (1, peak_bw), compute roof the horizontal at peak_fp32; one marker per
// (variant, path) point.
void write_roofline_svg(std::ostream& out, const std::vector<analysis::RooflinePoint>& points,
                        const DeviceSpec& device);

} // namespace kernelscope::cli

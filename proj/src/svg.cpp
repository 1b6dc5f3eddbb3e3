#include "kernelscope/svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "kernelscope/report.hpp"

namespace kernelscope::cli {

namespace {

using analysis::RooflinePoint;
using model::ExecPath;
using model::VariantId;

constexpr double kWidth = 760.0;
constexpr double kHeight = 560.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 30.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* variant_color(VariantId v) {
    switch (v) {
        case VariantId::Naive: return "#7f7f7f";
        case VariantId::Coalesced: return "#1f77b4";
        case VariantId::SharedTiled: return "#2ca02c";
        case VariantId::WarpTiled: return "#d62728";
    }
    return "#000000";
}

struct Axes {
    double x_min, x_max; // AI, log10
    double y_min, y_max; // GFLOP/s, log10

    [[nodiscard]] double px(double ai) const {
        return kLeft + (std::log10(ai) - x_min) / (x_max - x_min) *
                           (kWidth - kLeft - kRight);
    }
    [[nodiscard]] double py(double gflops) const {
        return kHeight - kBottom - (std::log10(gflops) - y_min) / (y_max - y_min) *
                                       (kHeight - kTop - kBottom);
    }
};

std::string num(double v) { return fmt_fixed(v, 2); }

void marker(std::ostream& out, ExecPath path, double x, double y, const char* color) {
    switch (path) {
        case ExecPath::FWD:
            out << "  <circle cx=\"" << num(x) << "\" cy=\"" << num(y)
                << "\" r=\"5\" fill=\"" << color << "\"/>\n";
            break;
        case ExecPath::BWD_IN:
            out << "  <rect x=\"" << num(x - 4.5) << "\" y=\"" << num(y - 4.5)
                << "\" width=\"9\" height=\"9\" fill=\"" << color << "\"/>\n";
            break;
        case ExecPath::BWD_K:
            out << "  <path d=\"M " << num(x) << " " << num(y - 5.5) << " L " << num(x + 5)
                << " " << num(y + 4.5) << " L " << num(x - 5) << " " << num(y + 4.5)
                << " Z\" fill=\"" << color << "\"/>\n";
            break;
    }
}

} // namespace

void write_roofline_svg(std::ostream& out, const std::vector<RooflinePoint>& points,
                        const DeviceSpec& device) {
    double ai_lo = 1e30, ai_hi = 0.0, gf_lo = 1e30;
    for (const auto& p : points) {
        ai_lo = std::min(ai_lo, p.ai);
        ai_hi = std::max(ai_hi, p.ai);
        gf_lo = std::min(gf_lo, p.gflops);
    }
    const double ridge = analysis::ridge_flop_per_byte(device);
    Axes ax;
    ax.x_min = std::floor(std::log10(std::min(ai_lo, 1.0) / 2.0));
    ax.x_max = std::ceil(std::log10(std::max(ai_hi, ridge) * 4.0));
    ax.y_min = std::floor(std::log10(std::min(gf_lo, device.peak_bw) / 2.0));
    ax.y_max = std::ceil(std::log10(device.peak_fp32 * 2.0));

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "  <text x=\"" << num(kWidth / 2)
        << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
        << "Roofline: " << device.name << "</text>\n";

    // Decade gridlines and tick labels.
    for (int e = static_cast<int>(ax.x_min); e <= static_cast<int>(ax.x_max); ++e) {
        const double v = std::pow(10.0, e);
        const double x = ax.px(v);
        out << "  <line x1=\"" << num(x) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x)
            << "\" y2=\"" << num(kHeight - kBottom)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "  <text x=\"" << num(x) << "\" y=\"" << num(kHeight - kBottom + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1e" << e
            << "</text>\n";
    }
    for (int e = static_cast<int>(ax.y_min); e <= static_cast<int>(ax.y_max); ++e) {
        const double v = std::pow(10.0, e);
        const double y = ax.py(v);
        out << "  <line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
            << num(kWidth - kRight) << "\" y2=\"" << num(y)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "  <text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << e
            << "</text>\n";
    }
    out << "  <text x=\"" << num(kWidth / 2) << "\" y=\"" << num(kHeight - 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << "Arithmetic intensity (FLOP/byte)</text>\n";
    out << "  <text x=\"20\" y=\"" << num(kHeight / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << num(kHeight / 2) << ")\">GFLOP/s</text>\n";

    // Attainable roof: bandwidth ramp up to the ridge, flat compute ceiling after.
    const double x0 = std::pow(10.0, ax.x_min);
    const double x1 = std::pow(10.0, ax.x_max);
    out << "  <polyline points=\"" << num(ax.px(x0)) << "," << num(ax.py(x0 * device.peak_bw))
        << " " << num(ax.px(ridge)) << "," << num(ax.py(device.peak_fp32)) << " "
        << num(ax.px(x1)) << "," << num(ax.py(device.peak_fp32))
        << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"2\"/>\n";
    out << "  <text x=\"" << num(ax.px(ridge)) << "\" y=\"" << num(ax.py(device.peak_fp32) - 8)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">ridge "
        << fmt_fixed(ridge, 2) << " FLOP/B</text>\n";

    for (const auto& p : points)
        marker(out, p.path, ax.px(p.ai), ax.py(p.gflops), variant_color(p.variant));

    // Legend: variant colors, then path marker shapes.
    double ly = kTop + 14;
    for (VariantId v : model::kAllVariants) {
        out << "  <rect x=\"" << num(kLeft + 12) << "\" y=\"" << num(ly - 9)
            << "\" width=\"10\" height=\"10\" fill=\"" << variant_color(v) << "\"/>\n";
        out << "  <text x=\"" << num(kLeft + 28) << "\" y=\"" << num(ly)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << model::to_string(v)
            << "</text>\n";
        ly += 16;
    }
    for (ExecPath p : model::kAllPaths) {
        marker(out, p, kLeft + 17, ly - 4, "#444444");
        out << "  <text x=\"" << num(kLeft + 28) << "\" y=\"" << num(ly)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << model::to_string(p)
            << "</text>\n";
        ly += 16;
    }
    out << "</svg>\n";
}

} // namespace kernelscope::cli

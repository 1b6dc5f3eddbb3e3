#include "kernelscope/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "kernelscope/conv_core.hpp"
#include "kernelscope/report.hpp"
#include "kernelscope/svg.hpp"

namespace kernelscope::cli {

namespace {

namespace fs = std::filesystem;
using conv::AccumulationScheme;

std::string fmt_exp(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

struct ShapeFlags {
    std::int64_t B = 16384, H = 128, L = 48, K = 48;

    void attach(CLI::App* cmd) {
        cmd->add_option("--B", B, "batch count")->check(CLI::PositiveNumber);
        cmd->add_option("--H", H, "channel count")->check(CLI::PositiveNumber);
        cmd->add_option("--L", L, "sequence length")->check(CLI::PositiveNumber);
        cmd->add_option("--K", K, "kernel length")->check(CLI::PositiveNumber);
    }
    [[nodiscard]] ConvShape shape() const { return {B, H, L, K}; }
};

std::vector<AccumulationScheme> parse_schemes(const std::string& list,
                                              std::int64_t chunk_size) {
    std::vector<AccumulationScheme> out;
    std::istringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item == "sequential")
            out.push_back(AccumulationScheme::sequential());
        else if (item == "pairwise")
            out.push_back(AccumulationScheme::pairwise());
        else if (item == "chunked")
            out.push_back(AccumulationScheme::chunked(chunk_size));
        else
            throw CLI::ValidationError("--schemes",
                                       "unknown scheme '" + item +
                                           "', allowed: sequential, pairwise, chunked");
    }
    if (out.empty()) throw CLI::ValidationError("--schemes", "at least one scheme required");
    return out;
}

std::string scheme_label(const AccumulationScheme& s) {
    std::string label = s.name();
    if (s.kind == conv::SumScheme::ChunkedTwoStage)
        label += "(" + std::to_string(s.chunk_size) + ")";
    return label;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path.string() + "'");
    out << content;
}

// --- validate ---------------------------------------------------------------

struct ValidateOptions {
    ShapeFlags shape{64, 8, 48, 48};
    std::uint64_t seed = 1;
    std::string schemes = "sequential,pairwise,chunked";
    std::int64_t chunk_size = 1024;
    double tol = 1e-5;
    bool sweep = false;
    int steps = 5;
    std::string csv_path;
};

int run_validate(const ValidateOptions& opt, std::ostream& out) {
    const auto schemes = parse_schemes(opt.schemes, opt.chunk_size);
    bool pass = true;

    if (!opt.sweep) {
        const auto rep = conv::validate(opt.shape.shape(), opt.seed, schemes);
        out << "validation shape B=" << rep.shape.B << " H=" << rep.shape.H
            << " L=" << rep.shape.L << " K=" << rep.shape.K << " seed=" << rep.seed << "\n";
        out << "fwd     max_abs " << fmt_exp(rep.fwd.max_abs) << "  max_rel "
            << fmt_exp(rep.fwd.max_rel) << "\n";
        out << "bwd_in  max_abs " << fmt_exp(rep.bwd_in.max_abs) << "  max_rel "
            << fmt_exp(rep.bwd_in.max_rel) << "\n";
        for (const auto& se : rep.dk)
            out << "dk[" << scheme_label(se.scheme) << "] max_abs " << fmt_exp(se.err.max_abs)
                << "  max_rel " << fmt_exp(se.err.max_rel) << "\n";
        out << "dk cross-scheme spread abs " << fmt_exp(rep.dk_spread_abs) << "  rel "
            << fmt_exp(rep.dk_spread_rel) << "\n";
        pass = rep.fwd.max_abs <= opt.tol && rep.bwd_in.max_abs <= opt.tol;
        if (!opt.csv_path.empty()) {
            std::ostringstream csv;
            csv << "path,max_abs,max_rel\n";
            csv << "fwd," << fmt_exp(rep.fwd.max_abs) << "," << fmt_exp(rep.fwd.max_rel) << "\n";
            csv << "bwd_in," << fmt_exp(rep.bwd_in.max_abs) << "," << fmt_exp(rep.bwd_in.max_rel)
                << "\n";
            for (const auto& se : rep.dk)
                csv << "dk_" << scheme_label(se.scheme) << "," << fmt_exp(se.err.max_abs) << ","
                    << fmt_exp(se.err.max_rel) << "\n";
            write_file(opt.csv_path, csv.str());
        }
    } else {
        const auto sweep =
            conv::validate_sweep(opt.shape.shape(), opt.seed, opt.steps, schemes);
        out << "error-vs-size sweep, B x4 per step, H=" << opt.shape.H << " L=" << opt.shape.L
            << " K=" << opt.shape.K << " seed=" << opt.seed << "\n";
        out << "step,B,H,L,K,flat_n,fwd_max_abs,bwd_in_max_abs,dk_max_abs,dk_spread_abs,dk_"
               "spread_rel\n";
        std::ostringstream csv;
        csv << "step,B,H,L,K,flat_n,fwd_max_abs,bwd_in_max_abs,dk_max_abs,dk_spread_abs,dk_"
               "spread_rel\n";
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            const auto& st = sweep[i];
            std::ostringstream row;
            row << i << "," << st.shape.B << "," << st.shape.H << "," << st.shape.L << ","
                << st.shape.K << "," << st.flat_n << "," << fmt_exp(st.fwd.max_abs) << ","
                << fmt_exp(st.bwd_in.max_abs) << "," << fmt_exp(st.dk_max_abs) << ","
                << fmt_exp(st.dk_spread_abs) << "," << fmt_exp(st.dk_spread_rel) << "\n";
            out << row.str();
            csv << row.str();
            pass = pass && st.fwd.max_abs <= opt.tol && st.bwd_in.max_abs <= opt.tol;
        }
        const int nondec = conv::sweep_nondecreasing_steps(sweep);
        const int required = std::max(0, opt.steps - 2); // one decrease allowed
        out << "dk error trend: non-decreasing in " << nondec << " of " << opt.steps - 1
            << " steps (required >= " << required << ")\n";
        pass = pass && nondec >= required;
        if (!opt.csv_path.empty()) write_file(opt.csv_path, csv.str());
    }

    out << (pass ? "PASS" : "FAIL") << " (tolerance " << fmt_exp(opt.tol) << ")\n";
    return pass ? kExitOk : kExitFailure;
}

// --- model ------------------------------------------------------------------

struct ModelOptions {
    std::string variant = "warp";
    std::string path = "fwd";
    ShapeFlags shape;
    std::string device_path;
};

int run_model(const ModelOptions& opt, std::ostream& out) {
    const auto variant = model::parse_variant(opt.variant);
    if (!variant)
        throw ParseError("unknown variant '" + opt.variant +
                         "', allowed: naive, coalesced, shared, warp");
    const auto path = model::parse_path(opt.path);
    if (!path) throw ParseError("unknown path '" + opt.path + "', allowed: fwd, bwd_in, bwd_k");
    const DeviceSpec device = opt.device_path.empty()
                                  ? DeviceSpec::tesla_p100()
                                  : load_device_spec(opt.device_path);
    const ConvShape shape = opt.shape.shape();

    const auto geom = model::launch_geometry(*variant, *path, shape);
    out << "variant: " << model::to_string(*variant) << "  path: " << model::to_string(*path)
        << "\n";
    out << "shape: B=" << shape.B << " H=" << shape.H << " L=" << shape.L << " K=" << shape.K
        << "\n";
    out << "grid: (" << geom.grid.x << ", " << geom.grid.y << ", " << geom.grid.z
        << ")  block: " << geom.block_threads << "\n";
    if (geom.tile) {
        out << "tile:";
        if (geom.tile->ttile) out << " TTILE=" << geom.tile->ttile;
        if (geom.tile->htile) out << " HTILE=" << geom.tile->htile;
        if (geom.tile->tpb) out << " TPB=" << geom.tile->tpb;
        if (geom.tile->warp) out << " W=" << geom.tile->warp;
        out << "\n";
    }

    const auto smem = model::shared_mem_footprint(*variant, shape);
    out << "shared memory per block: " << smem << " B\n";

    const auto check = model::resource_check(geom, smem, device);
    if (check.ok() && check.warnings.empty())
        out << "resource check (" << device.name << "): ok\n";
    for (const auto& v : check.violations)
        out << "resource violation: " << v << "\n";
    for (const auto& w : check.warnings) out << "resource warning: " << w << "\n";

    const auto traffic = model::memory_traffic(*variant, *path, shape);
    out << "traffic model: " << model::to_string(traffic.model) << "\n";
    out << "reads: " << traffic.reads << " B  writes: " << traffic.writes
        << " B  total: " << traffic.total << " B";
    if (traffic.uncertainty) out << "  (+/- " << traffic.uncertainty << " B)";
    out << "\n";
    if (!traffic.bandwidth_reliable)
        out << "effective bandwidth: N/A (logical lower bound only; redundant accesses "
               "not modeled)\n";
    return kExitOk;
}

// --- analyze / roofline -------------------------------------------------------

struct AnalyzeOptions {
    std::string csv_path;
    std::string device_path;
    ShapeFlags shape;
    std::string out_dir = ".";
    bool svg = false;
};

ReportBundle load_bundle(const AnalyzeOptions& opt, DeviceSpec& device) {
    const std::string csv =
        opt.csv_path.empty() ? fixture_dir() + "/table2.csv" : opt.csv_path;
    const std::string dev =
        opt.device_path.empty() ? fixture_dir() + "/p100.json" : opt.device_path;
    device = load_device_spec(dev);
    const TimingLog log = load_timing_csv(csv);
    Provenance prov{csv, dev, opt.shape.shape(), device.name};
    return build_report(log, device, opt.shape.shape(), prov);
}

int run_analyze(const AnalyzeOptions& opt, std::ostream& out) {
    DeviceSpec device;
    const ReportBundle bundle = load_bundle(opt, device);

    fs::create_directories(opt.out_dir);
    std::ostringstream speedups, bandwidth, roofline, report;
    write_speedups_csv(speedups, bundle);
    write_bandwidth_csv(bandwidth, bundle);
    write_roofline_csv(roofline, bundle);
    write_report_txt(report, bundle, device);
    write_file(fs::path(opt.out_dir) / "speedups.csv", speedups.str());
    write_file(fs::path(opt.out_dir) / "bandwidth.csv", bandwidth.str());
    write_file(fs::path(opt.out_dir) / "roofline.csv", roofline.str());
    write_file(fs::path(opt.out_dir) / "report.txt", report.str());

    out << report.str();
    out << "\nwrote speedups.csv, bandwidth.csv, roofline.csv, report.txt to " << opt.out_dir
        << "\n";
    return kExitOk;
}

int run_roofline(const AnalyzeOptions& opt, std::ostream& out) {
    DeviceSpec device;
    const ReportBundle bundle = load_bundle(opt, device);

    fs::create_directories(opt.out_dir);
    std::ostringstream roofline;
    write_roofline_csv(roofline, bundle);
    write_file(fs::path(opt.out_dir) / "roofline.csv", roofline.str());
    out << roofline.str();
    if (opt.svg) {
        std::ostringstream svg;
        write_roofline_svg(svg, bundle.roofline, device);
        write_file(fs::path(opt.out_dir) / "roofline.svg", svg.str());
        out << "wrote roofline.svg to " << opt.out_dir << "\n";
    }
    return kExitOk;
}

} // namespace

std::string fixture_dir() {
    if (const char* env = std::getenv("KERNELSCOPE_FIXTURES")) return env;
#ifdef KERNELSCOPE_FIXTURE_DIR
    return KERNELSCOPE_FIXTURE_DIR;
#else
    return "fixtures";
#endif
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"kernelscope: counter-free GPU kernel performance analysis for "
                 "depthwise 1D convolution"};
    app.require_subcommand(1);

    ValidateOptions vopt;
    auto* validate = app.add_subcommand(
        "validate", "check the reference operator against a double-precision oracle");
    vopt.shape.attach(validate);
    validate->add_option("--seed", vopt.seed, "rng seed (splitmix64)");
    validate->add_option("--schemes", vopt.schemes,
                         "comma list of accumulation schemes: sequential, pairwise, chunked");
    validate->add_option("--chunk-size", vopt.chunk_size, "chunked scheme stage-1 size")
        ->check(CLI::PositiveNumber);
    validate->add_option("--tol", vopt.tol,
                         "max abs tolerance for fwd/bwd_in (default covers K<=48 at "
                         "unit-range inputs)");
    validate->add_flag("--sweep", vopt.sweep,
                       "error-vs-size sweep: B grows x4 per step; trend check allows one "
                       "decreasing step");
    validate->add_option("--steps", vopt.steps, "sweep step count")->check(CLI::PositiveNumber);
    validate->add_option("--csv", vopt.csv_path, "write the report/sweep table as CSV");

    ModelOptions mopt;
    auto* model_cmd = app.add_subcommand(
        "model", "launch geometry, shared memory, resource checks, traffic estimate");
    model_cmd->add_option("--variant", mopt.variant, "naive | coalesced | shared | warp");
    model_cmd->add_option("--path", mopt.path, "fwd | bwd_in | bwd_k");
    mopt.shape.attach(model_cmd);
    model_cmd->add_option("--device", mopt.device_path, "device spec JSON (default: P100)");

    AnalyzeOptions aopt;
    auto* analyze = app.add_subcommand(
        "analyze", "timing CSV -> speedups, effective bandwidth, roofline, report");
    analyze->add_option("--csv", aopt.csv_path, "timing CSV (default: bundled table2.csv)");
    analyze->add_option("--device", aopt.device_path,
                        "device spec JSON (default: bundled p100.json)");
    aopt.shape.attach(analyze);
    analyze->add_option("--out", aopt.out_dir, "output directory");

    AnalyzeOptions ropt;
    auto* roofline = app.add_subcommand("roofline", "timing CSV -> roofline points (+SVG)");
    roofline->add_option("--csv", ropt.csv_path, "timing CSV (default: bundled table2.csv)");
    roofline->add_option("--device", ropt.device_path,
                         "device spec JSON (default: bundled p100.json)");
    ropt.shape.attach(roofline);
    roofline->add_option("--out", ropt.out_dir, "output directory");
    roofline->add_flag("--svg", ropt.svg, "also write roofline.svg");

    std::vector<std::string> argv_storage = args;
    std::vector<const char*> argv;
    argv.push_back("kernelscope");
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return run_validate(vopt, out);
        if (model_cmd->parsed()) return run_model(mopt, out);
        if (analyze->parsed()) return run_analyze(aopt, out);
        if (roofline->parsed()) return run_roofline(ropt, out);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    err << "usage error: no subcommand\n";
    return kExitUsage;
}

} // namespace kernelscope::cli

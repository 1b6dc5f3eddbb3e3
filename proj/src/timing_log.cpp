#include "kernelscope/timing_log.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace kernelscope::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    throw ParseError("timing CSV line " + std::to_string(line_no) + ": " + what);
}

} // namespace

TimingLog parse_timing_csv(const std::string& text) {
    TimingLog log;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (!header_seen) {
            if (t != "variant,path,runtime_ms,run_id")
                fail(line_no, "expected header 'variant,path,runtime_ms,run_id', got '" + t +
                                  "'");
            header_seen = true;
            continue;
        }
        const auto fields = split_csv_line(t);
        if (fields.size() < 3 || fields.size() > 4)
            fail(line_no, "expected 3 or 4 fields, got " + std::to_string(fields.size()));

        const auto variant = model::parse_variant(fields[0]);
        if (!variant)
            fail(line_no, "unknown variant '" + fields[0] +
                              "', allowed: naive, coalesced, shared, warp");

        const std::string& path_str = fields[1];
        const bool is_epoch = path_str == "epoch";
        const bool is_total = path_str == "conv_total";
        const auto path = model::parse_path(path_str);
        if (!path && !is_epoch && !is_total)
            fail(line_no, "unknown path '" + path_str +
                              "', allowed: fwd, bwd_in, bwd_k, epoch, conv_total");

        double runtime = 0.0;
        {
            const std::string& f = fields[2];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), runtime);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                fail(line_no, "bad runtime_ms '" + f + "'");
        }
        if (!(runtime > 0.0)) fail(line_no, "runtime_ms must be > 0");

        std::optional<std::int64_t> run_id;
        if (fields.size() == 4 && !fields[3].empty()) {
            const std::string& f = fields[3];
            std::int64_t id = 0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), id);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                fail(line_no, "bad run_id '" + f + "'");
            run_id = id;
        }

        analysis::RuntimeRecord rec{*variant, path.value_or(model::ExecPath::FWD), runtime,
                                    run_id};
        if (is_epoch)
            log.epoch.push_back(rec);
        else if (is_total)
            log.conv_total.push_back(rec);
        else
            log.kernel.push_back(rec);
    }
    if (!header_seen) throw ParseError("timing CSV: no records (missing header)");
    return log;
}

TimingLog load_timing_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("timing CSV: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_timing_csv(buf.str());
}

} // namespace kernelscope::cli

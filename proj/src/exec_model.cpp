#include "kernelscope/exec_model.hpp"

#include <algorithm>

namespace kernelscope::model {

namespace {

using std::int64_t;
using std::uint64_t;

constexpr int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

constexpr uint64_t kFloat = 4; // bytes per element

uint64_t bytes(int64_t elems) { return kFloat * static_cast<uint64_t>(elems); }

TrafficEstimate make_estimate(uint64_t reads, uint64_t writes, TrafficModel model,
                              uint64_t uncertainty = 0, bool reliable = true) {
    return {reads, writes, reads + writes, model, uncertainty, reliable};
}

// Distinct input elements one (b,h) row pulls from global memory, per variant.
int64_t input_row_elems(VariantId v, const ConvShape& s) {
    switch (v) {
        case VariantId::Coalesced:
            return s.L + s.K - 1;
        case VariantId::SharedTiled:
            return ceil_div(s.L, kTpb) * (std::min(kTpb, s.L) + s.K - 1);
        case VariantId::WarpTiled:
            return s.L + s.K; // staged slice: (L+K)*4 bytes per block
        case VariantId::Naive:
            break;
    }
    return s.L;
}

} // namespace

const char* to_string(VariantId v) {
    switch (v) {
        case VariantId::Naive: return "naive";
        case VariantId::Coalesced: return "coalesced";
        case VariantId::SharedTiled: return "shared";
        case VariantId::WarpTiled: return "warp";
    }
    return "?";
}

const char* to_string(ExecPath p) {
    switch (p) {
        case ExecPath::FWD: return "fwd";
        case ExecPath::BWD_IN: return "bwd_in";
        case ExecPath::BWD_K: return "bwd_k";
    }
    return "?";
}

std::optional<VariantId> parse_variant(const std::string& s) {
    for (VariantId v : kAllVariants)
        if (s == to_string(v)) return v;
    return std::nullopt;
}

std::optional<ExecPath> parse_path(const std::string& s) {
    for (ExecPath p : kAllPaths)
        if (s == to_string(p)) return p;
    return std::nullopt;
}

const char* to_string(TrafficModel m) {
    switch (m) {
        case TrafficModel::Logical: return "logical";
        case TrafficModel::DistinctRow: return "distinct_row";
        case TrafficModel::Staged: return "staged";
    }
    return "?";
}

LaunchGeometry launch_geometry(VariantId v, ExecPath path, const ConvShape& s) {
    if (path == ExecPath::BWD_K) {
        if (v == VariantId::Naive) {
            // One thread per (h,j) coefficient, sequential B*L accumulation.
            return {{ceil_div(s.K, kNaiveBlockThreads), s.H, 1}, kNaiveBlockThreads,
                    std::nullopt};
        }
        // Two-stage reduction: the B*L domain is partitioned into
        // kBwdkChunkCount blocks per channel, partials combined afterwards.
        return {{kBwdkChunkCount, s.H, 1}, kCoalescedBlockThreads,
                TileParams{0, 0, 0, kWarpSize}};
    }
    switch (v) {
        case VariantId::Naive:
            return {{ceil_div(s.L, kNaiveBlockThreads), s.H, s.B}, kNaiveBlockThreads,
                    std::nullopt};
        case VariantId::Coalesced:
            return {{ceil_div(s.L, kTTile), ceil_div(s.H, kHTile), s.B},
                    kCoalescedBlockThreads, TileParams{kTTile, kHTile, 0, kWarpSize}};
        case VariantId::SharedTiled:
            return {{ceil_div(s.L, kTpb), s.B * s.H, 1}, kTpb, TileParams{0, 0, kTpb, kWarpSize}};
        case VariantId::WarpTiled:
            return {{s.B, s.H, 1}, kWarpSize, TileParams{0, 0, 0, kWarpSize}};
    }
    return {};
}

std::optional<Element> naive_forward_index(const GridDim& block_idx, std::int64_t thread_idx,
                                           std::int64_t block_dim, const ConvShape& shape) {
    const int64_t t = block_idx.x * block_dim + thread_idx;
    if (t >= shape.L) return std::nullopt;
    return Element{block_idx.z, block_idx.y, t};
}

std::optional<Element> coalesced_index(const GridDim& block_idx, std::int64_t thread_idx,
                                       const ConvShape& shape) {
    const int64_t t = block_idx.x * kTTile + thread_idx % kTTile;
    const int64_t h = block_idx.y * kHTile + thread_idx / kTTile;
    if (t >= shape.L || h >= shape.H) return std::nullopt;
    return Element{block_idx.z, h, t};
}

std::optional<Element> shared_tiled_index(const GridDim& block_idx, std::int64_t thread_idx,
                                          const ConvShape& shape) {
    const int64_t t = block_idx.x * kTpb + thread_idx;
    if (t >= shape.L) return std::nullopt;
    const int64_t s = block_idx.y; // flattened b*H + h
    return Element{s / shape.H, s % shape.H, t};
}

std::vector<std::int64_t> warp_lane_positions(std::int64_t lane, std::int64_t L,
                                              std::int64_t W) {
    std::vector<int64_t> out;
    for (int64_t t = lane; t < L; t += W) out.push_back(t);
    return out;
}

std::int64_t shared_mem_footprint(VariantId v, const ConvShape& s) {
    switch (v) {
        case VariantId::Naive:
        case VariantId::Coalesced:
            return 0;
        case VariantId::SharedTiled:
            return 4 * ((kTpb + s.K - 1) + s.K);
        case VariantId::WarpTiled:
            return 4 * (s.L + s.K);
    }
    return 0;
}

ResourceReport resource_check(const LaunchGeometry& g, std::int64_t smem_bytes,
                              const DeviceSpec& d) {
    ResourceReport r;
    if (g.block_threads > d.max_threads_per_block)
        r.violations.push_back("threads per block: " + std::to_string(g.block_threads) +
                               " exceeds device limit " +
                               std::to_string(d.max_threads_per_block));
    if (smem_bytes > d.smem_per_block)
        r.violations.push_back("shared memory per block: " + std::to_string(smem_bytes) +
                               " B exceeds device limit " + std::to_string(d.smem_per_block) +
                               " B");
    if (d.warp_size > 0 && g.block_threads % d.warp_size != 0)
        r.warnings.push_back("block size " + std::to_string(g.block_threads) +
                             " is not a multiple of the warp size " +
                             std::to_string(d.warp_size));
    return r;
}

TrafficEstimate logical_traffic(ExecPath path, const ConvShape& s) {
    const uint64_t tensor = bytes(s.tensor_elems());
    const uint64_t kernel = bytes(s.kernel_elems());
    switch (path) {
        case ExecPath::FWD:    // x + k in, y out
        case ExecPath::BWD_IN: // gy + k in, dx out
            return make_estimate(tensor + kernel, tensor, TrafficModel::Logical);
        case ExecPath::BWD_K:  // gy + x in, dk out
            return make_estimate(2 * tensor, kernel, TrafficModel::Logical);
    }
    return {};
}

TrafficEstimate memory_traffic(VariantId v, ExecPath path, const ConvShape& s) {
    if (v == VariantId::Naive) {
        // Redundant window loads are not observable without counters; the
        // logical count is a lower bound and bandwidth derived from it is
        // flagged unreliable.
        TrafficEstimate t = logical_traffic(path, s);
        t.bandwidth_reliable = false;
        return t;
    }

    const uint64_t tensor = bytes(s.tensor_elems());
    const uint64_t kernel = bytes(s.kernel_elems());
    const uint64_t rows = static_cast<uint64_t>(s.B) * static_cast<uint64_t>(s.H);
    const uint64_t input_reads = rows * bytes(input_row_elems(v, s));
    const TrafficModel tag =
        v == VariantId::WarpTiled ? TrafficModel::Staged : TrafficModel::DistinctRow;

    if (path == ExecPath::FWD || path == ExecPath::BWD_IN)
        return make_estimate(input_reads + kernel, tensor, tag);

    // BWD_K, two stages: stage one reads gy plus the variant's distinct or
    // staged x footprint and writes chunk_count*H*K partials; stage two reads
    // the partials back and writes the final H*K gradient.
    const uint64_t partials = bytes(kBwdkChunkCount * s.kernel_elems());
    const uint64_t reads = tensor + input_reads + partials;
    const uint64_t writes = partials + kernel;
    return make_estimate(reads, writes, TrafficModel::Staged, 2 * partials);
}

} // namespace kernelscope::model

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kernelscope/device_spec.hpp"
#include "kernelscope/shape.hpp"

namespace kernelscope::model {

// The four kernel designs, from plain one-thread-per-output to warp-centric.
enum class VariantId { Naive, Coalesced, SharedTiled, WarpTiled };

enum class ExecPath { FWD, BWD_IN, BWD_K };

inline constexpr VariantId kAllVariants[] = {VariantId::Naive, VariantId::Coalesced,
                                             VariantId::SharedTiled, VariantId::WarpTiled};
inline constexpr ExecPath kAllPaths[] = {ExecPath::FWD, ExecPath::BWD_IN, ExecPath::BWD_K};

// Canonical spellings used in CSV logs and reports.
const char* to_string(VariantId v);   // naive | coalesced | shared | warp
const char* to_string(ExecPath p);    // fwd | bwd_in | bwd_k
std::optional<VariantId> parse_variant(const std::string& s);
std::optional<ExecPath> parse_path(const std::string& s);

// Fixed mapping parameters of the modeled kernels.
inline constexpr std::int64_t kNaiveBlockThreads = 512;
inline constexpr std::int64_t kCoalescedBlockThreads = 256;
inline constexpr std::int64_t kTTile = 32; // coalesced temporal tile (warp-sized)
inline constexpr std::int64_t kHTile = 8;  // coalesced channel tile
inline constexpr std::int64_t kTpb = 256;  // shared-memory temporal tile length
inline constexpr std::int64_t kWarpSize = 32;
// Two-stage weight-gradient reduction: blocks per channel in stage one.
inline constexpr std::int64_t kBwdkChunkCount = 64;

struct GridDim {
    std::int64_t x = 1;
    std::int64_t y = 1;
    std::int64_t z = 1;
    bool operator==(const GridDim&) const = default;
};

struct TileParams {
    std::int64_t ttile = 0;
    std::int64_t htile = 0;
    std::int64_t tpb = 0;
    std::int64_t warp = 0;
};

struct LaunchGeometry {
    GridDim grid;
    std::int64_t block_threads = 1;
    std::optional<TileParams> tile;

    [[nodiscard]] std::int64_t blocks() const { return grid.x * grid.y * grid.z; }
    [[nodiscard]] std::int64_t threads() const { return blocks() * block_threads; }
};

LaunchGeometry launch_geometry(VariantId v, ExecPath path, const ConvShape& shape);

// --- Thread-to-element mappings (FWD / BWD_IN) ---------------------------

struct Element {
    std::int64_t b = 0;
    std::int64_t h = 0;
    std::int64_t t = 0;
    bool operator==(const Element&) const = default;
};

// b = blockIdx.z, h = blockIdx.y, t = blockIdx.x*blockDim + tid.
// nullopt marks an inactive thread (t >= L).
std::optional<Element> naive_forward_index(const GridDim& block_idx, std::int64_t thread_idx,
                                           std::int64_t block_dim, const ConvShape& shape);

// t = blockIdx.x*TTILE + tid%TTILE, h = blockIdx.y*HTILE + tid/TTILE, b = blockIdx.z.
std::optional<Element> coalesced_index(const GridDim& block_idx, std::int64_t thread_idx,
                                       const ConvShape& shape);

// Flattened s = blockIdx.y = b*H + h; t = blockIdx.x*TPB + tid.
std::optional<Element> shared_tiled_index(const GridDim& block_idx, std::int64_t thread_idx,
                                          const ConvShape& shape);

// Temporal positions handled by one lane of the (b,h) warp: lane + i*W < L.
// For L <= 2W this is the two-position mapping {lane, lane+W if < L}.
std::vector<std::int64_t> warp_lane_positions(std::int64_t lane, std::int64_t L,
                                              std::int64_t W);

// --- Shared memory and hardware limits -----------------------------------

// Bytes of shared memory per block: 0 for Naive/Coalesced,
// 4*((TPB+K-1) + K) for SharedTiled, 4*(L+K) for WarpTiled.
std::int64_t shared_mem_footprint(VariantId v, const ConvShape& shape);

struct ResourceReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
    [[nodiscard]] bool ok() const { return violations.empty(); }
};

ResourceReport resource_check(const LaunchGeometry& g, std::int64_t smem_bytes,
                              const DeviceSpec& d);

// --- Memory-traffic models ------------------------------------------------

enum class TrafficModel { Logical, DistinctRow, Staged };

const char* to_string(TrafficModel m);

struct TrafficEstimate {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t total = 0; // always reads + writes
    TrafficModel model = TrafficModel::Logical;
    // Two-stage reductions carry an uncertainty band from the unspecified
    // partial-sum layout; zero elsewhere.
    std::uint64_t uncertainty = 0;
    // False when effective bandwidth cannot be derived from this estimate
    // (naive kernels: redundant transactions depend on cache behavior).
    bool bandwidth_reliable = true;
};

// Element-granular byte counts: one tensor read/write per touched element,
// no transaction-size rounding.
TrafficEstimate logical_traffic(ExecPath path, const ConvShape& shape);
TrafficEstimate memory_traffic(VariantId v, ExecPath path, const ConvShape& shape);

} // namespace kernelscope::model

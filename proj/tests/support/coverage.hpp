#pragma once

// Brute-force enumeration of every active thread of a modeled launch,
// counting touches per output element. Coverage is proven when every count
// is exactly one.

#include <vector>

#include "kernelscope/exec_model.hpp"

namespace coverage {

using kernelscope::ConvShape;
namespace model = kernelscope::model;

inline std::vector<int> histogram(model::VariantId v, model::ExecPath path,
                                  const ConvShape& s) {
    const auto geom = model::launch_geometry(v, path, s);
    std::vector<int> counts(static_cast<std::size_t>(s.tensor_elems()), 0);
    auto touch = [&](const model::Element& e) {
        counts[static_cast<std::size_t>((e.b * s.H + e.h) * s.L + e.t)] += 1;
    };
    for (std::int64_t gz = 0; gz < geom.grid.z; ++gz)
        for (std::int64_t gy = 0; gy < geom.grid.y; ++gy)
            for (std::int64_t gx = 0; gx < geom.grid.x; ++gx) {
                const model::GridDim block{gx, gy, gz};
                if (v == model::VariantId::WarpTiled) {
                    for (std::int64_t lane = 0; lane < geom.block_threads; ++lane)
                        for (std::int64_t t :
                             model::warp_lane_positions(lane, s.L, geom.block_threads))
                            touch({gx, gy, t});
                    continue;
                }
                for (std::int64_t tid = 0; tid < geom.block_threads; ++tid) {
                    std::optional<model::Element> e;
                    switch (v) {
                        case model::VariantId::Naive:
                            e = model::naive_forward_index(block, tid, geom.block_threads, s);
                            break;
                        case model::VariantId::Coalesced:
                            e = model::coalesced_index(block, tid, s);
                            break;
                        case model::VariantId::SharedTiled:
                            e = model::shared_tiled_index(block, tid, s);
                            break;
                        case model::VariantId::WarpTiled:
                            break;
                    }
                    if (e) touch(*e);
                }
            }
    return counts;
}

inline bool exactly_once(model::VariantId v, model::ExecPath path, const ConvShape& s) {
    for (int c : histogram(v, path, s))
        if (c != 1) return false;
    return true;
}

} // namespace coverage

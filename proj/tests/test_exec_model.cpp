#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kernelscope/exec_model.hpp"
#include "support/coverage.hpp"

using namespace kernelscope;
using namespace kernelscope::model;

namespace {
const ConvShape kBenchShape(16384, 128, 48, 48);
}

TEST_CASE("launch_geometry: benchmark configuration") {
    const auto naive = launch_geometry(VariantId::Naive, ExecPath::FWD, kBenchShape);
    CHECK(naive.grid == GridDim{1, 128, 16384});
    CHECK(naive.block_threads == 512);

    const auto gmc = launch_geometry(VariantId::Coalesced, ExecPath::FWD, kBenchShape);
    CHECK(gmc.grid == GridDim{2, 16, 16384});
    CHECK(gmc.block_threads == 256);
    REQUIRE(gmc.tile.has_value());
    CHECK(gmc.tile->ttile == 32);
    CHECK(gmc.tile->htile == 8);

    const auto shared = launch_geometry(VariantId::SharedTiled, ExecPath::FWD, kBenchShape);
    CHECK(shared.grid == GridDim{1, 16384 * 128, 1});
    CHECK(shared.block_threads == 256);

    const auto warp = launch_geometry(VariantId::WarpTiled, ExecPath::FWD, kBenchShape);
    CHECK(warp.grid == GridDim{16384, 128, 1});
    CHECK(warp.block_threads == 32);

    const auto naive_dk = launch_geometry(VariantId::Naive, ExecPath::BWD_K, kBenchShape);
    CHECK(naive_dk.grid == GridDim{1, 128, 1});
    CHECK(naive_dk.block_threads == 512);

    const auto warp_dk = launch_geometry(VariantId::WarpTiled, ExecPath::BWD_K, kBenchShape);
    CHECK(warp_dk.grid.x == kBwdkChunkCount);
    CHECK(warp_dk.grid.y == 128);
}

TEST_CASE("naive_forward_index") {
    const ConvShape s(16, 8, 48, 3);
    const auto e = naive_forward_index({0, 5, 7}, 13, 512, s);
    REQUIRE(e.has_value());
    CHECK(*e == Element{7, 5, 13});
    CHECK_FALSE(naive_forward_index({1, 0, 0}, 0, 512, s).has_value()); // t = 512 >= 48
}

TEST_CASE("coalesced_index") {
    const ConvShape s(4, 16, 64, 3);
    const auto e = coalesced_index({1, 0, 0}, 40, s);
    REQUIRE(e.has_value());
    CHECK(*e == Element{0, 1, 40});

    // lanes of one warp hit 32 consecutive t within one (b,h) row
    for (std::int64_t warp = 0; warp < 8; ++warp) {
        std::optional<Element> first;
        for (std::int64_t lane = 0; lane < 32; ++lane) {
            const auto el = coalesced_index({0, 1, 2}, warp * 32 + lane, s);
            REQUIRE(el.has_value());
            if (!first) first = el;
            CHECK(el->b == first->b);
            CHECK(el->h == first->h);
            CHECK(el->t == first->t + lane);
        }
    }
}

TEST_CASE("warp_lane_positions") {
    CHECK(warp_lane_positions(5, 48, 32) == std::vector<std::int64_t>{5, 37});
    CHECK(warp_lane_positions(20, 48, 32) == std::vector<std::int64_t>{20});

    std::vector<int> counts(48, 0);
    for (std::int64_t lane = 0; lane < 32; ++lane)
        for (std::int64_t t : warp_lane_positions(lane, 48, 32)) counts[t]++;
    for (int c : counts) CHECK(c == 1);
}

TEST_CASE("coverage: every mapping touches each element exactly once") {
    const ConvShape shapes[] = {{2, 3, 70, 5}, {2, 9, 33, 4}, {1, 1, 48, 48}};
    for (const auto& s : shapes)
        for (VariantId v : kAllVariants)
            for (ExecPath p : {ExecPath::FWD, ExecPath::BWD_IN})
                CHECK(coverage::exactly_once(v, p, s));
}

TEST_CASE("shared_mem_footprint") {
    CHECK(shared_mem_footprint(VariantId::WarpTiled, ConvShape(1, 1, 48, 48)) == 384);
    CHECK(shared_mem_footprint(VariantId::SharedTiled, ConvShape(1, 1, 48, 48)) == 1404);
    CHECK(shared_mem_footprint(VariantId::WarpTiled, ConvShape(1, 1, 1, 1)) == 8);
    CHECK(shared_mem_footprint(VariantId::Naive, kBenchShape) == 0);
    CHECK(shared_mem_footprint(VariantId::Coalesced, kBenchShape) == 0);

    // every variant fits the P100 limit at the benchmark shape
    const auto p100 = DeviceSpec::tesla_p100();
    for (VariantId v : kAllVariants)
        CHECK(shared_mem_footprint(v, kBenchShape) <= p100.smem_per_block);
}

TEST_CASE("resource_check") {
    const auto p100 = DeviceSpec::tesla_p100();
    const auto warp = launch_geometry(VariantId::WarpTiled, ExecPath::FWD, kBenchShape);
    CHECK(resource_check(warp, 384, p100).ok());

    LaunchGeometry too_many{{1, 1, 1}, 2048, std::nullopt};
    const auto r1 = resource_check(too_many, 0, p100);
    REQUIRE(r1.violations.size() == 1);
    CHECK(r1.violations[0].find("threads per block") != std::string::npos);

    LaunchGeometry ok_threads{{1, 1, 1}, 256, std::nullopt};
    const auto r2 = resource_check(ok_threads, 65536, p100);
    REQUIRE(r2.violations.size() == 1);
    CHECK(r2.violations[0].find("shared memory per block") != std::string::npos);

    LaunchGeometry ragged{{1, 1, 1}, 48, std::nullopt};
    const auto r3 = resource_check(ragged, 0, p100);
    CHECK(r3.ok());
    CHECK(r3.warnings.size() == 1);
}

TEST_CASE("logical_traffic") {
    const auto fwd = logical_traffic(ExecPath::FWD, kBenchShape);
    CHECK(fwd.reads == 402677760);  // 4*B*H*L + 4*H*K
    CHECK(fwd.writes == 402653184); // 4*B*H*L
    CHECK(fwd.total == fwd.reads + fwd.writes);

    const auto bwd_k = logical_traffic(ExecPath::BWD_K, kBenchShape);
    CHECK(bwd_k.reads == 805306368);
    CHECK(bwd_k.writes == 24576);

    const auto unit = logical_traffic(ExecPath::FWD, ConvShape(1, 1, 1, 1));
    CHECK(unit.reads == 8);
    CHECK(unit.writes == 4);
}

TEST_CASE("memory_traffic: benchmark configuration totals") {
    const auto warp = memory_traffic(VariantId::WarpTiled, ExecPath::FWD, kBenchShape);
    CHECK(warp.total == 1207984128ull);
    CHECK(warp.model == TrafficModel::Staged);
    CHECK(warp.bandwidth_reliable);

    const auto gmc = memory_traffic(VariantId::Coalesced, ExecPath::FWD, kBenchShape);
    CHECK(gmc.total == 1199595520ull);
    CHECK(gmc.model == TrafficModel::DistinctRow);

    // TPB >= L so the shared tile equals the coalesced distinct-row count
    const auto shared = memory_traffic(VariantId::SharedTiled, ExecPath::FWD, kBenchShape);
    CHECK(shared.total == gmc.total);

    const auto naive = memory_traffic(VariantId::Naive, ExecPath::FWD, kBenchShape);
    CHECK(naive.total == logical_traffic(ExecPath::FWD, kBenchShape).total);
    CHECK(naive.model == TrafficModel::Logical);
    CHECK_FALSE(naive.bandwidth_reliable);
}

TEST_CASE("memory_traffic: two-stage weight gradient") {
    const auto warp = memory_traffic(VariantId::WarpTiled, ExecPath::BWD_K, kBenchShape);
    // gy + staged x + partial read-back; partial writes + final gradient
    CHECK(warp.reads == 402653184ull + 805306368ull + 1572864ull);
    CHECK(warp.writes == 1572864ull + 24576ull);
    CHECK(warp.uncertainty == 2 * 1572864ull);

    const auto naive = memory_traffic(VariantId::Naive, ExecPath::BWD_K, kBenchShape);
    CHECK(naive.total == logical_traffic(ExecPath::BWD_K, kBenchShape).total);
}

TEST_CASE("memory_traffic: K=1 collapses to the logical bound") {
    const ConvShape s(8, 4, 96, 1);
    for (VariantId v : {VariantId::Naive, VariantId::Coalesced, VariantId::SharedTiled}) {
        const auto t = memory_traffic(v, ExecPath::FWD, s);
        CHECK(t.reads == logical_traffic(ExecPath::FWD, s).reads);
    }
    const auto warp = memory_traffic(VariantId::WarpTiled, ExecPath::FWD, s);
    CHECK(warp.reads >= logical_traffic(ExecPath::FWD, s).reads);
}

TEST_CASE("memory_traffic: lower bound and monotonicity properties") {
    const ConvShape shapes[] = {{1, 1, 1, 1},   {3, 2, 17, 5},  {2, 4, 300, 9},
                                {5, 3, 256, 48}, {2, 2, 257, 3}, {16, 8, 48, 48}};
    for (const auto& s : shapes) {
        for (VariantId v : kAllVariants) {
            for (ExecPath p : kAllPaths) {
                const auto t = memory_traffic(v, p, s);
                CHECK(t.total == t.reads + t.writes);
                CHECK(t.total >= logical_traffic(p, s).total);

                // non-decreasing in each dimension
                for (int axis = 0; axis < 4; ++axis) {
                    ConvShape bigger = s;
                    (axis == 0 ? bigger.B : axis == 1 ? bigger.H : axis == 2 ? bigger.L
                                                                             : bigger.K) += 1;
                    CHECK(memory_traffic(v, p, bigger).total >= t.total);
                }
            }
        }
    }
}

TEST_CASE("variant and path names round-trip") {
    for (VariantId v : kAllVariants) CHECK(parse_variant(to_string(v)) == v);
    for (ExecPath p : kAllPaths) CHECK(parse_path(to_string(p)) == p);
    CHECK_FALSE(parse_variant("pytorch").has_value());
    CHECK_FALSE(parse_path("epoch").has_value());
}

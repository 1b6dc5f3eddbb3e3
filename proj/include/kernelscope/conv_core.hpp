#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kernelscope/shape.hpp"
#include "kernelscope/tensor.hpp"

namespace kernelscope::conv {

// Association order of the weight-gradient reduction over the flattened
// B*L domain. Results are bitwise deterministic for a fixed scheme.
enum class SumScheme {
    Sequential,      // ascending flat index b*L + t
    PairwiseTree,    // balanced binary tree over flat indices
    ChunkedTwoStage, // sequential per-chunk partials, then sequential over partials
};

struct AccumulationScheme {
    SumScheme kind = SumScheme::Sequential;
    std::int64_t chunk_size = 1024; // only meaningful for ChunkedTwoStage

    static AccumulationScheme sequential() { return {SumScheme::Sequential, 0}; }
    static AccumulationScheme pairwise() { return {SumScheme::PairwiseTree, 0}; }
    static AccumulationScheme chunked(std::int64_t chunk = 1024) {
        if (chunk < 1)
            throw DimensionError("AccumulationScheme: chunk_size must be >= 1, got " +
                                 std::to_string(chunk));
        return {SumScheme::ChunkedTwoStage, chunk};
    }

    [[nodiscard]] const char* name() const {
        switch (kind) {
            case SumScheme::Sequential: return "sequential";
            case SumScheme::PairwiseTree: return "pairwise";
            case SumScheme::ChunkedTwoStage: return "chunked";
        }
        return "?";
    }
};

// Multiply-add rounding: Separate performs two rounded operations (the
// portable default), Fused contracts each pair like the GPU kernels do.
enum class MulAddMode { Separate, Fused };

// y[b,h,t] = sum_j xpad[b,h,t+j-p] * k[h,j], p = floor(K/2), zero padding,
// inner sum evaluated left-to-right in j.
Tensor3 forward(const Tensor3& x, const Kernel2& k, const ConvShape& shape,
                MulAddMode mode = MulAddMode::Separate);
Tensor3d forward(const Tensor3d& x, const Kernel2d& k, const ConvShape& shape,
                 MulAddMode mode = MulAddMode::Separate);

// Exact adjoint of forward with respect to x:
// dx[b,h,t] = sum_j gypad[b,h,t+j-q] * k[h,K-1-j] with q = K-1-p (== p for odd K).
Tensor3 backward_input(const Tensor3& gy, const Kernel2& k, const ConvShape& shape,
                       MulAddMode mode = MulAddMode::Separate);
Tensor3d backward_input(const Tensor3d& gy, const Kernel2d& k, const ConvShape& shape,
                        MulAddMode mode = MulAddMode::Separate);

// dk[h,j] = sum_{b,t} gy[b,h,t] * xpad[b,h,t+j-p]; the association order of
// the B*L reduction is dictated by the scheme. chunk_size > B*L degenerates
// to Sequential.
Kernel2 backward_weight(const Tensor3& gy, const Tensor3& x, const ConvShape& shape,
                        const AccumulationScheme& scheme,
                        MulAddMode mode = MulAddMode::Separate);
Kernel2d backward_weight(const Tensor3d& gy, const Tensor3d& x, const ConvShape& shape,
                         const AccumulationScheme& scheme,
                         MulAddMode mode = MulAddMode::Separate);

// --- Validation ---------------------------------------------------------

inline constexpr double kRelErrFloor = 1e-12;

struct ErrorStat {
    double max_abs = 0.0;
    // Per-element relative error, denominator max(|reference|, kRelErrFloor).
    double max_rel = 0.0;
};

struct SchemeError {
    AccumulationScheme scheme;
    ErrorStat err; // single-precision dk vs the double-precision sequential oracle
};

struct ValidationReport {
    ConvShape shape;
    std::uint64_t seed = 0;
    ErrorStat fwd;
    ErrorStat bwd_in;
    std::vector<SchemeError> dk;
    // Largest elementwise |dk_a - dk_b| over all scheme pairs, and the same
    // value normalized by the largest oracle gradient magnitude.
    double dk_spread_abs = 0.0;
    double dk_spread_rel = 0.0;
};

// Generates seeded inputs uniform in [-1,1], runs all three paths in single
// precision, and scores them against a double-precision Sequential oracle
// rounded to single before differencing.
ValidationReport validate(const ConvShape& shape, std::uint64_t seed,
                          std::span<const AccumulationScheme> schemes);

struct SweepStep {
    ConvShape shape;
    std::int64_t flat_n; // B*L accumulation depth
    ErrorStat fwd;
    ErrorStat bwd_in;
    double dk_max_abs = 0.0;
    double dk_spread_abs = 0.0;
    double dk_spread_rel = 0.0;
};

// Geometric error-vs-size sweep: B grows x4 per step from base.B, H/L/K fixed.
std::vector<SweepStep> validate_sweep(const ConvShape& base, std::uint64_t seed,
                                      int steps, std::span<const AccumulationScheme> schemes);

// Counts steps where dk_max_abs does not decrease.
int sweep_nondecreasing_steps(std::span<const SweepStep> sweep);

} // namespace kernelscope::conv

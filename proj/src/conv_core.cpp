#include "kernelscope/conv_core.hpp"

#include <algorithm>
#include <cmath>

#include "kernelscope/rng.hpp"

namespace kernelscope::conv {

namespace {

using std::int64_t;

template <typename T>
inline T mul_add(T acc, T a, T b, MulAddMode mode) {
    // Separate relies on the library being built with contraction disabled,
    // so the multiply and the add each round once.
    return mode == MulAddMode::Fused ? std::fma(a, b, acc) : acc + a * b;
}

template <typename T>
Tensor3T<T> forward_impl(const Tensor3T<T>& x, const Kernel2T<T>& k, const ConvShape& s,
                         MulAddMode mode) {
    check_tensor3(x, s, "forward: x");
    check_kernel2(k, s, "forward: k");
    const int64_t p = s.pad();
    Tensor3T<T> y(s.B, s.H, s.L);
    for (int64_t b = 0; b < s.B; ++b) {
        for (int64_t h = 0; h < s.H; ++h) {
            const auto xr = x.row(b, h);
            const auto kr = k.row(h);
            auto yr = y.row(b, h);
            for (int64_t t = 0; t < s.L; ++t) {
                // In-range window: 0 <= t+j-p < L; out-of-range taps are zero.
                const int64_t j_lo = std::max<int64_t>(0, p - t);
                const int64_t j_hi = std::min<int64_t>(s.K, s.L + p - t);
                T acc{};
                for (int64_t j = j_lo; j < j_hi; ++j)
                    acc = mul_add(acc, xr[static_cast<std::size_t>(t + j - p)],
                                  kr[static_cast<std::size_t>(j)], mode);
                yr[static_cast<std::size_t>(t)] = acc;
            }
        }
    }
    return y;
}

template <typename T>
Tensor3T<T> backward_input_impl(const Tensor3T<T>& gy, const Kernel2T<T>& k, const ConvShape& s,
                                MulAddMode mode) {
    check_tensor3(gy, s, "backward_input: gy");
    check_kernel2(k, s, "backward_input: k");
    // The gradient window is offset by q = K-1-p, which equals p for odd K
    // and makes the computation the exact adjoint of forward for every K
    // (with even K the two paddings are asymmetric).
    const int64_t q = s.K - 1 - s.pad();
    Tensor3T<T> dx(s.B, s.H, s.L);
    for (int64_t b = 0; b < s.B; ++b) {
        for (int64_t h = 0; h < s.H; ++h) {
            const auto gr = gy.row(b, h);
            const auto kr = k.row(h);
            auto dr = dx.row(b, h);
            for (int64_t t = 0; t < s.L; ++t) {
                const int64_t j_lo = std::max<int64_t>(0, q - t);
                const int64_t j_hi = std::min<int64_t>(s.K, s.L + q - t);
                T acc{};
                for (int64_t j = j_lo; j < j_hi; ++j)
                    acc = mul_add(acc, gr[static_cast<std::size_t>(t + j - q)],
                                  kr[static_cast<std::size_t>(s.K - 1 - j)], mode);
                dr[static_cast<std::size_t>(t)] = acc;
            }
        }
    }
    return dx;
}

// One (h,j) weight-gradient coefficient. The reduction domain is the full
// flattened B*L index range; positions whose x tap falls outside [0,L)
// contribute an exact zero and may be skipped without changing the rounding.
template <typename T>
struct WeightTerm {
    const Tensor3T<T>& gy;
    const Tensor3T<T>& x;
    int64_t h;
    int64_t d; // tap offset j - p
    int64_t L;

    T operator()(int64_t flat, MulAddMode mode) const {
        const int64_t b = flat / L;
        const int64_t t = flat - b * L;
        const int64_t xi = t + d;
        if (xi < 0 || xi >= L) return T{};
        (void)mode;
        return gy.at(b, h, t) * x.at(b, h, xi);
    }
};

template <typename T>
T reduce_sequential(const WeightTerm<T>& term, int64_t b_count, MulAddMode mode) {
    const int64_t L = term.L;
    T acc{};
    for (int64_t b = 0; b < b_count; ++b) {
        const int64_t t_lo = std::max<int64_t>(0, -term.d);
        const int64_t t_hi = std::min<int64_t>(L, L - term.d);
        const T* gr = &term.gy.at(b, term.h, 0);
        const T* xr = &term.x.at(b, term.h, 0);
        for (int64_t t = t_lo; t < t_hi; ++t)
            acc = mul_add(acc, gr[t], xr[t + term.d], mode);
    }
    return acc;
}

template <typename T>
T reduce_pairwise(const WeightTerm<T>& term, int64_t lo, int64_t hi, MulAddMode mode) {
    if (hi - lo == 1) return term(lo, mode);
    const int64_t mid = lo + (hi - lo) / 2;
    return reduce_pairwise(term, lo, mid, mode) + reduce_pairwise(term, mid, hi, mode);
}

// Chunk boundaries are fixed multiples of chunk_size in the flat domain;
// zero-only chunks contribute an exact zero partial.
template <typename T>
T reduce_chunked(const WeightTerm<T>& term, int64_t b_count, int64_t chunk_size,
                 MulAddMode mode) {
    const int64_t L = term.L;
    const int64_t t_lo = std::max<int64_t>(0, -term.d);
    const int64_t t_hi = std::min<int64_t>(L, L - term.d);
    T total{};
    T partial{};
    int64_t current_chunk = 0;
    for (int64_t b = 0; b < b_count; ++b) {
        const T* gr = &term.gy.at(b, term.h, 0);
        const T* xr = &term.x.at(b, term.h, 0);
        for (int64_t t = t_lo; t < t_hi; ++t) {
            const int64_t chunk = (b * L + t) / chunk_size;
            if (chunk != current_chunk) {
                total += partial;
                partial = T{};
                current_chunk = chunk;
            }
            partial = mul_add(partial, gr[t], xr[t + term.d], mode);
        }
    }
    total += partial;
    return total;
}

template <typename T>
Kernel2T<T> backward_weight_impl(const Tensor3T<T>& gy, const Tensor3T<T>& x,
                                 const ConvShape& s, const AccumulationScheme& scheme,
                                 MulAddMode mode) {
    check_tensor3(gy, s, "backward_weight: gy");
    check_tensor3(x, s, "backward_weight: x");
    if (scheme.kind == SumScheme::ChunkedTwoStage && scheme.chunk_size < 1)
        throw DimensionError("backward_weight: chunk_size must be >= 1, got " +
                             std::to_string(scheme.chunk_size));
    const int64_t p = s.pad();
    const int64_t flat_n = s.flat_reduction();
    Kernel2T<T> dk(s.H, s.K);
    for (int64_t h = 0; h < s.H; ++h) {
        for (int64_t j = 0; j < s.K; ++j) {
            WeightTerm<T> term{gy, x, h, j - p, s.L};
            T acc{};
            switch (scheme.kind) {
                case SumScheme::Sequential:
                    acc = reduce_sequential(term, s.B, mode);
                    break;
                case SumScheme::PairwiseTree:
                    acc = reduce_pairwise(term, 0, flat_n, mode);
                    break;
                case SumScheme::ChunkedTwoStage:
                    acc = scheme.chunk_size >= flat_n
                              ? reduce_sequential(term, s.B, mode)
                              : reduce_chunked(term, s.B, scheme.chunk_size, mode);
                    break;
            }
            dk.at(h, j) = acc;
        }
    }
    return dk;
}

Tensor3d widen(const Tensor3& t) {
    Tensor3d out(t.B, t.H, t.L);
    for (std::size_t i = 0; i < t.data.size(); ++i) out.data[i] = t.data[i];
    return out;
}

Kernel2d widen(const Kernel2& k) {
    Kernel2d out(k.H, k.K);
    for (std::size_t i = 0; i < k.data.size(); ++i) out.data[i] = k.data[i];
    return out;
}

// Scores a single-precision result against the double oracle rounded to
// single, per element.
template <typename Container, typename ContainerD>
ErrorStat score(const Container& got, const ContainerD& oracle) {
    ErrorStat e;
    for (std::size_t i = 0; i < got.data.size(); ++i) {
        const double ref = static_cast<double>(static_cast<float>(oracle.data[i]));
        const double diff = std::abs(static_cast<double>(got.data[i]) - ref);
        e.max_abs = std::max(e.max_abs, diff);
        e.max_rel = std::max(e.max_rel, diff / std::max(std::abs(ref), kRelErrFloor));
    }
    return e;
}

} // namespace

Tensor3 forward(const Tensor3& x, const Kernel2& k, const ConvShape& shape, MulAddMode mode) {
    return forward_impl(x, k, shape, mode);
}
Tensor3d forward(const Tensor3d& x, const Kernel2d& k, const ConvShape& shape, MulAddMode mode) {
    return forward_impl(x, k, shape, mode);
}

Tensor3 backward_input(const Tensor3& gy, const Kernel2& k, const ConvShape& shape,
                       MulAddMode mode) {
    return backward_input_impl(gy, k, shape, mode);
}
Tensor3d backward_input(const Tensor3d& gy, const Kernel2d& k, const ConvShape& shape,
                        MulAddMode mode) {
    return backward_input_impl(gy, k, shape, mode);
}

Kernel2 backward_weight(const Tensor3& gy, const Tensor3& x, const ConvShape& shape,
                        const AccumulationScheme& scheme, MulAddMode mode) {
    return backward_weight_impl(gy, x, shape, scheme, mode);
}
Kernel2d backward_weight(const Tensor3d& gy, const Tensor3d& x, const ConvShape& shape,
                         const AccumulationScheme& scheme, MulAddMode mode) {
    return backward_weight_impl(gy, x, shape, scheme, mode);
}

ValidationReport validate(const ConvShape& shape, std::uint64_t seed,
                          std::span<const AccumulationScheme> schemes) {
    if (schemes.empty())
        throw DimensionError("validate: at least one accumulation scheme required");

    SplitMix64 rng(seed);
    Tensor3 x(shape.B, shape.H, shape.L);
    Kernel2 k(shape.H, shape.K);
    Tensor3 gy(shape.B, shape.H, shape.L);
    fill_pm1(rng, x);
    fill_pm1(rng, k);
    fill_pm1(rng, gy);

    const Tensor3d xd = widen(x);
    const Kernel2d kd = widen(k);
    const Tensor3d gyd = widen(gy);

    ValidationReport rep{shape, seed, {}, {}, {}, 0.0, 0.0};

    rep.fwd = score(forward(x, k, shape), forward(xd, kd, shape));
    rep.bwd_in = score(backward_input(gy, k, shape), backward_input(gyd, kd, shape));

    const Kernel2d dk_oracle =
        backward_weight(gyd, xd, shape, AccumulationScheme::sequential());
    double oracle_peak = 0.0;
    for (double v : dk_oracle.data) oracle_peak = std::max(oracle_peak, std::abs(v));

    std::vector<Kernel2> dks;
    dks.reserve(schemes.size());
    for (const auto& scheme : schemes) {
        dks.push_back(backward_weight(gy, x, shape, scheme));
        rep.dk.push_back({scheme, score(dks.back(), dk_oracle)});
    }
    for (std::size_t a = 0; a < dks.size(); ++a) {
        for (std::size_t b = a + 1; b < dks.size(); ++b) {
            for (std::size_t i = 0; i < dks[a].data.size(); ++i) {
                const double d = std::abs(static_cast<double>(dks[a].data[i]) -
                                          static_cast<double>(dks[b].data[i]));
                rep.dk_spread_abs = std::max(rep.dk_spread_abs, d);
            }
        }
    }
    rep.dk_spread_rel = rep.dk_spread_abs / std::max(oracle_peak, kRelErrFloor);
    return rep;
}

std::vector<SweepStep> validate_sweep(const ConvShape& base, std::uint64_t seed, int steps,
                                      std::span<const AccumulationScheme> schemes) {
    std::vector<SweepStep> out;
    std::int64_t B = base.B;
    for (int i = 0; i < steps; ++i, B *= 4) {
        const ConvShape s(B, base.H, base.L, base.K);
        const ValidationReport rep = validate(s, seed + static_cast<std::uint64_t>(i), schemes);
        double dk_max_abs = 0.0;
        for (const auto& se : rep.dk) dk_max_abs = std::max(dk_max_abs, se.err.max_abs);
        out.push_back({s, s.flat_reduction(), rep.fwd, rep.bwd_in, dk_max_abs,
                       rep.dk_spread_abs, rep.dk_spread_rel});
    }
    return out;
}

int sweep_nondecreasing_steps(std::span<const SweepStep> sweep) {
    int n = 0;
    for (std::size_t i = 1; i < sweep.size(); ++i)
        if (sweep[i].dk_max_abs >= sweep[i - 1].dk_max_abs) ++n;
    return n;
}

} // namespace kernelscope::conv

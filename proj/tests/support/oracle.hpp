#pragma once

// Independent brute-force reference for the depthwise convolution operator:
// direct transcription of the defining sums with explicit zero-padding
// guards, evaluated in double (or exact int64 for integer-valued data).
// Deliberately shares no code with the library implementation.

#include <cstdint>
#include <vector>

#include "kernelscope/shape.hpp"
#include "kernelscope/tensor.hpp"

namespace oracle {

using kernelscope::ConvShape;
using kernelscope::Kernel2;
using kernelscope::Kernel2d;
using kernelscope::Tensor3;
using kernelscope::Tensor3d;

inline Tensor3d forward(const Tensor3d& x, const Kernel2d& k, const ConvShape& s) {
    const std::int64_t p = s.K / 2;
    Tensor3d y(s.B, s.H, s.L);
    for (std::int64_t b = 0; b < s.B; ++b)
        for (std::int64_t h = 0; h < s.H; ++h)
            for (std::int64_t t = 0; t < s.L; ++t) {
                double acc = 0.0;
                for (std::int64_t j = 0; j < s.K; ++j) {
                    const std::int64_t xi = t + j - p;
                    if (xi >= 0 && xi < s.L) acc += x.at(b, h, xi) * k.at(h, j);
                }
                y.at(b, h, t) = acc;
            }
    return y;
}

// Adjoint of forward, derived directly from d y[t] / d x[u] = k[u-t+p]:
// dx[u] = sum_i gypad[u+p-i] * k[i].
inline Tensor3d backward_input(const Tensor3d& gy, const Kernel2d& k, const ConvShape& s) {
    const std::int64_t p = s.K / 2;
    Tensor3d dx(s.B, s.H, s.L);
    for (std::int64_t b = 0; b < s.B; ++b)
        for (std::int64_t h = 0; h < s.H; ++h)
            for (std::int64_t u = 0; u < s.L; ++u) {
                double acc = 0.0;
                for (std::int64_t i = 0; i < s.K; ++i) {
                    const std::int64_t gi = u + p - i;
                    if (gi >= 0 && gi < s.L) acc += gy.at(b, h, gi) * k.at(h, i);
                }
                dx.at(b, h, u) = acc;
            }
    return dx;
}

inline Kernel2d backward_weight(const Tensor3d& gy, const Tensor3d& x, const ConvShape& s) {
    const std::int64_t p = s.K / 2;
    Kernel2d dk(s.H, s.K);
    for (std::int64_t h = 0; h < s.H; ++h)
        for (std::int64_t j = 0; j < s.K; ++j) {
            double acc = 0.0;
            for (std::int64_t b = 0; b < s.B; ++b)
                for (std::int64_t t = 0; t < s.L; ++t) {
                    const std::int64_t xi = t + j - p;
                    if (xi >= 0 && xi < s.L) acc += gy.at(b, h, t) * x.at(b, h, xi);
                }
            dk.at(h, j) = acc;
        }
    return dk;
}

// Exact weight gradient for integer-valued float inputs.
inline std::vector<std::int64_t> backward_weight_int(const Tensor3& gy, const Tensor3& x,
                                                     const ConvShape& s) {
    const std::int64_t p = s.K / 2;
    std::vector<std::int64_t> dk(static_cast<std::size_t>(s.H * s.K), 0);
    for (std::int64_t h = 0; h < s.H; ++h)
        for (std::int64_t j = 0; j < s.K; ++j) {
            std::int64_t acc = 0;
            for (std::int64_t b = 0; b < s.B; ++b)
                for (std::int64_t t = 0; t < s.L; ++t) {
                    const std::int64_t xi = t + j - p;
                    if (xi >= 0 && xi < s.L)
                        acc += static_cast<std::int64_t>(gy.at(b, h, t)) *
                               static_cast<std::int64_t>(x.at(b, h, xi));
                }
            dk[static_cast<std::size_t>(h * s.K + j)] = acc;
        }
    return dk;
}

inline Tensor3d widen(const Tensor3& t) {
    Tensor3d out(t.B, t.H, t.L);
    for (std::size_t i = 0; i < t.data.size(); ++i) out.data[i] = t.data[i];
    return out;
}

inline Kernel2d widen(const Kernel2& k) {
    Kernel2d out(k.H, k.K);
    for (std::size_t i = 0; i < k.data.size(); ++i) out.data[i] = k.data[i];
    return out;
}

inline double dot(const Tensor3d& a, const Tensor3d& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) acc += a.data[i] * b.data[i];
    return acc;
}

template <typename C>
double max_abs(const C& c) {
    double m = 0.0;
    for (auto v : c.data) m = std::max(m, std::abs(static_cast<double>(v)));
    return m;
}

// Largest |a - b| with the double container rounded to float first.
template <typename CF, typename CD>
double max_abs_diff_rounded(const CF& got, const CD& ref) {
    double m = 0.0;
    for (std::size_t i = 0; i < got.data.size(); ++i) {
        const double r = static_cast<double>(static_cast<float>(ref.data[i]));
        m = std::max(m, std::abs(static_cast<double>(got.data[i]) - r));
    }
    return m;
}

} // namespace oracle

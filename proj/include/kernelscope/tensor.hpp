#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kernelscope/shape.hpp"

namespace kernelscope {

// Dense [B,H,L] value container, row-major, t is the stride-1 dimension.
// Element (b,h,t) lives at flat index (b*H + h)*L + t.
template <typename T>
struct Tensor3T {
    std::int64_t B = 0;
    std::int64_t H = 0;
    std::int64_t L = 0;
    std::vector<T> data;

    Tensor3T() = default;
    Tensor3T(std::int64_t b, std::int64_t h, std::int64_t l)
        : B(b), H(h), L(l), data(static_cast<std::size_t>(b * h * l), T{}) {}

    [[nodiscard]] std::int64_t size() const { return B * H * L; }

    T& at(std::int64_t b, std::int64_t h, std::int64_t t) {
        return data[static_cast<std::size_t>((b * H + h) * L + t)];
    }
    const T& at(std::int64_t b, std::int64_t h, std::int64_t t) const {
        return data[static_cast<std::size_t>((b * H + h) * L + t)];
    }

    // Contiguous temporal row for fixed (b,h).
    [[nodiscard]] std::span<T> row(std::int64_t b, std::int64_t h) {
        return {data.data() + (b * H + h) * L, static_cast<std::size_t>(L)};
    }
    [[nodiscard]] std::span<const T> row(std::int64_t b, std::int64_t h) const {
        return {data.data() + (b * H + h) * L, static_cast<std::size_t>(L)};
    }
};

// Dense [H,K] kernel weights, row-major, j stride-1; row h is one channel filter.
template <typename T>
struct Kernel2T {
    std::int64_t H = 0;
    std::int64_t K = 0;
    std::vector<T> data;

    Kernel2T() = default;
    Kernel2T(std::int64_t h, std::int64_t k)
        : H(h), K(k), data(static_cast<std::size_t>(h * k), T{}) {}

    [[nodiscard]] std::int64_t size() const { return H * K; }

    T& at(std::int64_t h, std::int64_t j) {
        return data[static_cast<std::size_t>(h * K + j)];
    }
    const T& at(std::int64_t h, std::int64_t j) const {
        return data[static_cast<std::size_t>(h * K + j)];
    }

    [[nodiscard]] std::span<T> row(std::int64_t h) {
        return {data.data() + h * K, static_cast<std::size_t>(K)};
    }
    [[nodiscard]] std::span<const T> row(std::int64_t h) const {
        return {data.data() + h * K, static_cast<std::size_t>(K)};
    }
};

using Tensor3 = Tensor3T<float>;
using Kernel2 = Kernel2T<float>;
using Tensor3d = Tensor3T<double>;
using Kernel2d = Kernel2T<double>;

// Checks an input tensor against the shape contract; axis names appear in the
// error so callers can tell which extent disagreed.
template <typename T>
void check_tensor3(const Tensor3T<T>& t, const ConvShape& s, const std::string& name) {
    if (t.B != s.B)
        throw DimensionError(name + ": axis B is " + std::to_string(t.B) +
                             ", shape expects " + std::to_string(s.B));
    if (t.H != s.H)
        throw DimensionError(name + ": axis H is " + std::to_string(t.H) +
                             ", shape expects " + std::to_string(s.H));
    if (t.L != s.L)
        throw DimensionError(name + ": axis L is " + std::to_string(t.L) +
                             ", shape expects " + std::to_string(s.L));
    if (static_cast<std::int64_t>(t.data.size()) != t.size())
        throw DimensionError(name + ": data length " + std::to_string(t.data.size()) +
                             " does not match B*H*L");
}

template <typename T>
void check_kernel2(const Kernel2T<T>& k, const ConvShape& s, const std::string& name) {
    if (k.H != s.H)
        throw DimensionError(name + ": axis H is " + std::to_string(k.H) +
                             ", shape expects " + std::to_string(s.H));
    if (k.K != s.K)
        throw DimensionError(name + ": axis K is " + std::to_string(k.K) +
                             ", shape expects " + std::to_string(s.K));
    if (static_cast<std::int64_t>(k.data.size()) != k.size())
        throw DimensionError(name + ": data length " + std::to_string(k.data.size()) +
                             " does not match H*K");
}

} // namespace kernelscope

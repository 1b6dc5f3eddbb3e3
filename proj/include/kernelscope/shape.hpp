#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kernelscope {

// Thrown on tensor extent mismatches; the message names the offending axis.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Padding width p = floor(K/2).
constexpr std::int64_t pad_width(std::int64_t K) { return K / 2; }

// Problem dimensions of the depthwise 1D convolution: batch B, channels H,
// sequence length L, kernel length K. Padding is always derived from K.
struct ConvShape {
    std::int64_t B = 1;
    std::int64_t H = 1;
    std::int64_t L = 1;
    std::int64_t K = 1;

    ConvShape(std::int64_t b, std::int64_t h, std::int64_t l, std::int64_t k)
        : B(b), H(h), L(l), K(k) {
        if (B < 1) throw DimensionError("ConvShape: B must be >= 1, got " + std::to_string(B));
        if (H < 1) throw DimensionError("ConvShape: H must be >= 1, got " + std::to_string(H));
        if (L < 1) throw DimensionError("ConvShape: L must be >= 1, got " + std::to_string(L));
        if (K < 1) throw DimensionError("ConvShape: K must be >= 1, got " + std::to_string(K));
    }

    [[nodiscard]] std::int64_t pad() const { return pad_width(K); }
    [[nodiscard]] std::int64_t tensor_elems() const { return B * H * L; }
    [[nodiscard]] std::int64_t kernel_elems() const { return H * K; }
    [[nodiscard]] std::int64_t flat_reduction() const { return B * L; }

    bool operator==(const ConvShape&) const = default;
};

} // namespace kernelscope

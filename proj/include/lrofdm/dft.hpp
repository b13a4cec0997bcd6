#pragma once
#include <numbers>
#include <stdexcept>
#include <utility>

#include "dsp.hpp"

namespace lrofdm {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace detail {

// iterative radix-2, in place; caller guarantees power-of-two length
inline void fft_radix2(Samples& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const cplx wstep = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wstep;
            }
        }
    }
}

inline void unitary_scale(Samples& a) {
    const double s = 1.0 / std::sqrt(static_cast<double>(a.size()));
    for (auto& v : a) v *= s;
}

} // namespace detail

// Unitary transform pair: 1/sqrt(K) in both directions, so signal power
// is identical in time and frequency domain and dft/idft are exact
// inverses of each other.
inline Samples dft(Samples v) {
    if (!is_pow2(v.size())) throw std::invalid_argument("dft: length must be a power of two");
    detail::fft_radix2(v, false);
    detail::unitary_scale(v);
    return v;
}

inline Samples idft(Samples v) {
    if (!is_pow2(v.size())) throw std::invalid_argument("idft: length must be a power of two");
    detail::fft_radix2(v, true);
    detail::unitary_scale(v);
    return v;
}

} // namespace lrofdm

#pragma once
#include <cstdint>
#include <stdexcept>

#include "dsp.hpp"

namespace lrofdm {

// Gray mapping: first bit selects the I sign, second bit the Q sign,
// 0 -> +, 1 -> -. All four points have unit modulus:
//   00 -> (+1+j)/sqrt2   01 -> (+1-j)/sqrt2
//   10 -> (-1+j)/sqrt2   11 -> (-1-j)/sqrt2
// Adjacent points differ in exactly one bit.
inline constexpr double inv_sqrt2 = 0.70710678118654752440;

inline cplx qpsk_point(int b0, int b1) {
    return cplx{b0 ? -inv_sqrt2 : inv_sqrt2, b1 ? -inv_sqrt2 : inv_sqrt2};
}

inline Samples qpsk_map(const std::vector<std::uint8_t>& bits) {
    if (bits.size() % 2 != 0) throw std::invalid_argument("qpsk_map: odd bit count");
    Samples out(bits.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = qpsk_point(bits[2 * i], bits[2 * i + 1]);
    return out;
}

// Minimum-distance decision is a quadrant test. Values exactly on a
// decision boundary resolve to bit 0, i.e. toward the 00 point.
inline void qpsk_demap_into(const cplx& s, std::uint8_t* out2) {
    out2[0] = s.real() < 0.0 ? 1 : 0;
    out2[1] = s.imag() < 0.0 ? 1 : 0;
}

inline std::vector<std::uint8_t> qpsk_demap(const Samples& syms) {
    std::vector<std::uint8_t> bits(2 * syms.size());
    for (std::size_t i = 0; i < syms.size(); ++i) qpsk_demap_into(syms[i], &bits[2 * i]);
    return bits;
}

// decision feedback target: the constellation point the demap picks
inline cplx qpsk_snap(const cplx& s) {
    return cplx{s.real() < 0.0 ? -inv_sqrt2 : inv_sqrt2, s.imag() < 0.0 ? -inv_sqrt2 : inv_sqrt2};
}

} // namespace lrofdm

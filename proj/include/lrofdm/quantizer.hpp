#pragma once
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dsp.hpp"
#include "rrc.hpp"

namespace lrofdm {

// Uniform symmetric mid-riser quantizer. With V = 2^bits the output
// levels are (i - 1/2 - V/2) * step for i = 1..V: symmetric about zero,
// no zero level, extremes at +-(V - 1) * step / 2.
struct QuantizerSpec {
    int bits = 8;
    double step = 1.0;

    int levels() const { return 1 << bits; }
    double max_level() const { return (levels() - 1) * step / 2.0; }

    void validate() const {
        if (bits < 1 || bits > 16) throw std::invalid_argument("quantizer: bits must be in 1..16");
        if (!(step > 0.0)) throw std::invalid_argument("quantizer: step must be positive");
    }
};

// Staircase with saturation. Threshold ties (y an exact multiple of
// step) resolve upward via the floor convention.
inline double quantize_real(double y, const QuantizerSpec& q) {
    if (std::isnan(y)) throw std::domain_error("quantize_real: NaN input");
    const double v = q.step * (std::floor(y / q.step) + 0.5);
    return std::clamp(v, -q.max_level(), q.max_level());
}

inline Samples quantize_complex(const Samples& in, const QuantizerSpec& q) {
    q.validate();
    Samples out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i)
        out[i] = cplx{quantize_real(in[i].real(), q), quantize_real(in[i].imag(), q)};
    return out;
}

// Loading rule: full scale spans +-clip_sigma standard deviations of one
// real dimension, sigma = sqrt(avg_power / 2). Samples beyond that
// saturate.
inline QuantizerSpec auto_step(const Samples& in, int bits, double clip_sigma = 3.0) {
    if (!(clip_sigma > 0.0)) throw std::invalid_argument("auto_step: clip_sigma must be positive");
    const double p = avg_power(in); // throws on empty
    if (p <= 0.0) throw std::domain_error("auto_step: zero-power input");
    QuantizerSpec q;
    q.bits = bits;
    q.step = 2.0 * clip_sigma * std::sqrt(p / 2.0) / static_cast<double>(1 << bits);
    q.validate();
    return q;
}

struct RrcParams {
    double roll_off = 0.35;
    int span_symbols = 11;
    int samples_per_symbol = 2;
};

// The converter front end as one stage: optional reconstruction filter,
// then the complex quantizer.
inline Samples adc_block(const Samples& in, const QuantizerSpec& q, bool with_rrc,
                         const RrcParams& rrc = {}) {
    if (!with_rrc) return quantize_complex(in, q);
    return quantize_complex(rrc_filter(in, rrc.roll_off, rrc.span_symbols, rrc.samples_per_symbol),
                            q);
}

} // namespace lrofdm

#pragma once
#include <numbers>
#include <stdexcept>

#include "dsp.hpp"

namespace lrofdm {

// Root-raised-cosine FIR prototype, unit energy, odd length
// span_symbols * samples_per_symbol + 1 centered on the main lobe.
inline std::vector<double> rrc_taps(double roll_off, int span_symbols, int samples_per_symbol) {
    if (!(roll_off > 0.0 && roll_off <= 1.0))
        throw std::invalid_argument("rrc_taps: roll_off must be in (0, 1]");
    if (span_symbols < 2) throw std::invalid_argument("rrc_taps: span_symbols must be >= 2");
    if (samples_per_symbol < 1)
        throw std::invalid_argument("rrc_taps: samples_per_symbol must be >= 1");

    using std::numbers::pi;
    const double b = roll_off;
    const int len = span_symbols * samples_per_symbol + 1;
    const int mid = (len - 1) / 2;
    std::vector<double> h(len);
    for (int n = 0; n < len; ++n) {
        const double t = static_cast<double>(n - mid) / samples_per_symbol;
        if (std::abs(t) < 1e-12) {
            h[n] = 1.0 - b + 4.0 * b / pi;
        } else if (std::abs(std::abs(t) - 1.0 / (4.0 * b)) < 1e-9) {
            // removable singularity of the generic branch
            h[n] = (b / std::sqrt(2.0)) *
                   ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * b)) +
                    (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * b)));
        } else {
            h[n] = (std::sin(pi * t * (1.0 - b)) + 4.0 * b * t * std::cos(pi * t * (1.0 + b))) /
                   (pi * t * (1.0 - 16.0 * b * b * t * t));
        }
    }
    double e = 0.0;
    for (double v : h) e += v * v;
    const double s = 1.0 / std::sqrt(e);
    for (double& v : h) v *= s;
    return h;
}

// Same-size filtering: full convolution with the group delay of the
// symmetric FIR compensated, so output[i] lines up with input[i].
inline Samples rrc_filter(const Samples& in, double roll_off, int span_symbols,
                          int samples_per_symbol) {
    const auto h = rrc_taps(roll_off, span_symbols, samples_per_symbol);
    if (in.empty()) return {};
    const Samples full = convolve_full(in, h);
    const std::size_t delay = (h.size() - 1) / 2;
    return Samples(full.begin() + delay, full.begin() + delay + in.size());
}

} // namespace lrofdm

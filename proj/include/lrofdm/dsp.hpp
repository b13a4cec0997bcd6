#pragma once
#include <complex>
#include <stdexcept>
#include <vector>

namespace lrofdm {

using cplx = std::complex<double>;
using Samples = std::vector<cplx>;

inline double avg_power(const Samples& x) {
    if (x.empty()) throw std::domain_error("avg_power: empty stream");
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return acc / static_cast<double>(x.size());
}

// full linear convolution, output length n + m - 1
template <typename T>
inline Samples convolve_full(const Samples& x, const std::vector<T>& h) {
    if (x.empty() || h.empty()) throw std::domain_error("convolve_full: empty input");
    Samples y(x.size() + h.size() - 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j)
            y[i + j] += x[i] * h[j];
    return y;
}

inline double db10(double ratio) { return 10.0 * std::log10(ratio); }
inline double undb10(double db) { return std::pow(10.0, db / 10.0); }
inline double undb20(double db) { return std::pow(10.0, db / 20.0); }

} // namespace lrofdm

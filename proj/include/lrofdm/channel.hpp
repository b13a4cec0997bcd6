#pragma once
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "dsp.hpp"
#include "rng.hpp"

namespace lrofdm {

struct PathSpec {
    double delay_us = 0.0;      // >= 0
    double attenuation_db = 0.0; // loss, >= 0
};

enum class PhaseMode { real_positive, seeded_random };

// Sample-spaced FIR channel plus optional AWGN at a requested SNR.
struct ChannelSpec {
    std::vector<std::pair<int, cplx>> taps; // (index, gain), indices strictly increasing
    std::optional<double> snr_db;           // empty = noiseless

    int max_index() const { return taps.empty() ? 0 : taps.back().first; }

    void validate() const {
        if (taps.empty()) throw std::invalid_argument("channel: no taps");
        int prev = -1;
        for (const auto& [idx, g] : taps) {
            if (idx <= prev) throw std::invalid_argument("channel: tap indices must increase");
            if (std::abs(g) <= 0.0) throw std::invalid_argument("channel: zero-gain tap");
            prev = idx;
        }
    }
};

// Delay/attenuation rows to sample-spaced taps: index = round(delay * fs),
// |gain| = 10^(-att/20). Delays that round to the same sample add as
// complex gains. Phases are 0 in real_positive mode, uniform otherwise.
inline ChannelSpec taps_from_paths(const std::vector<PathSpec>& paths, double sample_rate_hz,
                                   PhaseMode phase_mode, Rng& rng) {
    if (paths.empty()) throw std::invalid_argument("channel: at least one path required");
    std::vector<cplx> dense;
    for (const auto& p : paths) {
        const int idx = static_cast<int>(std::lround(p.delay_us * sample_rate_hz * 1e-6));
        const double mag = undb20(-p.attenuation_db);
        const double ph = phase_mode == PhaseMode::seeded_random
                              ? 2.0 * std::numbers::pi * rng.uniform()
                              : 0.0;
        if (static_cast<std::size_t>(idx) >= dense.size()) dense.resize(idx + 1, cplx{0, 0});
        dense[static_cast<std::size_t>(idx)] += std::polar(mag, ph);
    }
    ChannelSpec ch;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense[i] != cplx{0, 0}) ch.taps.emplace_back(static_cast<int>(i), dense[i]);
    ch.validate();
    return ch;
}

// K-bin frequency response of the tap set (circular, unnormalized), the
// per-carrier gain seen by one OFDM symbol when max_index < cp_len.
inline Samples channel_freq_response(const ChannelSpec& ch, int k) {
    Samples h(static_cast<std::size_t>(k), cplx{0, 0});
    for (int bin = 0; bin < k; ++bin) {
        cplx acc{0, 0};
        for (const auto& [idx, g] : ch.taps)
            acc += g * std::polar(1.0, -2.0 * std::numbers::pi * bin * idx / static_cast<double>(k));
        h[static_cast<std::size_t>(bin)] = acc;
    }
    return h;
}

struct ChannelResult {
    Samples out;
    double measured_snr_db = std::numeric_limits<double>::infinity();
    double noise_power = 0.0;
};

// y = x * h (full convolution, output length = input length + max tap
// index), then circularly symmetric Gaussian noise sized against the
// measured post-channel signal power: sigma^2 = avg_power(y) / 10^(snr/10).
inline ChannelResult apply_channel(const Samples& in, const ChannelSpec& ch, Rng& rng) {
    if (in.empty()) throw std::domain_error("channel: empty input");
    ch.validate();
    ChannelResult r;
    r.out.assign(in.size() + static_cast<std::size_t>(ch.max_index()), cplx{0, 0});
    for (std::size_t i = 0; i < in.size(); ++i)
        for (const auto& [idx, g] : ch.taps) r.out[i + static_cast<std::size_t>(idx)] += in[i] * g;

    if (ch.snr_db) {
        const double psig = avg_power(r.out);
        const double sigma2 = psig / undb10(*ch.snr_db);
        const double sd = std::sqrt(sigma2 / 2.0);
        double pnoise = 0.0;
        for (auto& v : r.out) {
            const cplx n{sd * rng.gaussian(), sd * rng.gaussian()};
            pnoise += std::norm(n);
            v += n;
        }
        pnoise /= static_cast<double>(r.out.size());
        r.noise_power = pnoise;
        r.measured_snr_db = db10(psig / pnoise);
    }
    return r;
}

} // namespace lrofdm

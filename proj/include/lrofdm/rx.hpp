#pragma once
#include <stdexcept>
#include <string>

#include "carrier_map.hpp"
#include "channel.hpp"
#include "dft.hpp"
#include "qpsk.hpp"
#include "tx.hpp"

namespace lrofdm {

struct sync_failure : std::runtime_error {
    double peak;
    explicit sync_failure(double p)
        : std::runtime_error("synchronize: correlation peak " + std::to_string(p) +
                             " below threshold"),
          peak(p) {}
};

struct equalizer_singularity : std::runtime_error {
    equalizer_singularity() : std::runtime_error("equalizer: channel estimate collapsed to zero") {}
};

struct SyncResult {
    std::size_t frame_start = 0;
    double peak = 0.0;
    Samples initial_channel; // per bin, 0 on nulls
};

// Initial per-carrier channel estimate from the received preamble
// window: DFT(window)[k] / preamble[k] on occupied carriers.
inline Samples estimate_channel(const Samples& rx, std::size_t frame_start, const CarrierMap& map,
                                int cp_len, const Samples& preamble_freq) {
    const std::size_t body = frame_start + static_cast<std::size_t>(cp_len);
    if (body + static_cast<std::size_t>(map.k) > rx.size())
        throw std::invalid_argument("estimate_channel: window out of bounds");
    Samples win(rx.begin() + body, rx.begin() + body + map.k);
    const Samples f = dft(std::move(win));
    Samples h(static_cast<std::size_t>(map.k), cplx{0, 0});
    for (int bin = 0; bin < map.k; ++bin)
        if (map.is_occupied(bin))
            h[static_cast<std::size_t>(bin)] =
                f[static_cast<std::size_t>(bin)] / preamble_freq[static_cast<std::size_t>(bin)];
    return h;
}

// Known-preamble synchronization: the frame start is the offset with the
// largest normalized cross correlation against the CP-extended preamble.
// A peak below the threshold means no credible frame; the caller drops
// the capture and accounts for it.
inline SyncResult synchronize(const Samples& rx, const CarrierMap& map, int cp_len,
                              const Samples& preamble_freq, double threshold = 0.5) {
    const Samples pre_body = idft(preamble_freq);
    Samples pre;
    pre.reserve(static_cast<std::size_t>(map.k + cp_len));
    pre.insert(pre.end(), pre_body.end() - cp_len, pre_body.end());
    pre.insert(pre.end(), pre_body.begin(), pre_body.end());

    const std::size_t L = pre.size();
    if (rx.size() < 2 * L) throw std::invalid_argument("synchronize: capture shorter than two symbols");

    double pre_energy = 0.0;
    for (const auto& v : pre) pre_energy += std::norm(v);
    const double pre_norm = std::sqrt(pre_energy);

    // prefix sums of |rx|^2 for O(1) window energies
    std::vector<double> cum(rx.size() + 1, 0.0);
    for (std::size_t i = 0; i < rx.size(); ++i) cum[i + 1] = cum[i] + std::norm(rx[i]);

    SyncResult best;
    const std::size_t last = rx.size() - L;
    for (std::size_t off = 0; off <= last; ++off) {
        cplx acc{0, 0};
        for (std::size_t i = 0; i < L; ++i) acc += rx[off + i] * std::conj(pre[i]);
        const double wnorm = std::sqrt(cum[off + L] - cum[off]);
        if (wnorm <= 0.0) continue;
        const double rho = std::abs(acc) / (wnorm * pre_norm);
        if (rho > best.peak) {
            best.peak = rho;
            best.frame_start = off;
        }
    }
    if (best.peak < threshold) throw sync_failure(best.peak);
    best.initial_channel = estimate_channel(rx, best.frame_start, map, cp_len, preamble_freq);
    return best;
}

struct EqualizerState {
    Samples h;          // running per-bin estimate
    double alpha = 0.1; // weight kept from the previous estimate
    bool update = true; // false freezes h (one-shot zero-forcing)
};

// One-tap-per-carrier decision feedback equalizer. Each carrier is
// equalized with the estimate held before this symbol, then the estimate
// is refreshed from the raw bin: pilots divide by the known pilot
// symbol, data carriers by the decision the equalized value snaps to.
// Returns the pre-snap equalized bins; null carriers pass through.
inline Samples dfe_equalize_symbol(const Samples& bins, EqualizerState& st, const CarrierMap& map) {
    Samples eq(bins.size(), cplx{0, 0});
    for (std::size_t p = 0; p < map.pilots.size(); ++p) {
        const auto bin = static_cast<std::size_t>(map.pilots[p]);
        if (std::abs(st.h[bin]) < 1e-12) throw equalizer_singularity();
        eq[bin] = bins[bin] / st.h[bin];
        if (st.update) st.h[bin] = st.alpha * st.h[bin] + (1.0 - st.alpha) * bins[bin] / map.pilot_vals[p];
    }
    for (int d : map.data) {
        const auto bin = static_cast<std::size_t>(d);
        if (std::abs(st.h[bin]) < 1e-12) throw equalizer_singularity();
        eq[bin] = bins[bin] / st.h[bin];
        if (st.update) {
            const cplx dec = qpsk_snap(eq[bin]);
            st.h[bin] = st.alpha * st.h[bin] + (1.0 - st.alpha) * bins[bin] / dec;
        }
    }
    return eq;
}

enum class SyncMode { correlate, perfect };
enum class EqMode { sdfe, static_zf };
enum class InitMode { preamble, ideal };

struct RxOptions {
    SyncMode sync_mode = SyncMode::correlate;
    EqMode eq_mode = EqMode::sdfe;
    InitMode init_mode = InitMode::preamble;
    double sync_threshold = 0.5;
    double alpha = 0.1;
};

struct RxDiagnostics {
    SyncResult sync;
    std::vector<double> evm; // per-symbol rms over data carriers
    int symbol_count = 0;

    double evm_rms() const {
        if (evm.empty()) return 0.0;
        double acc = 0.0;
        for (double e : evm) acc += e * e;
        return std::sqrt(acc / static_cast<double>(evm.size()));
    }
};

// Full receive chain: sync, per-symbol CP strip and DFT, equalize,
// demap the data carriers. Trailing samples that do not fill a whole
// symbol are discarded. `true_channel` backs the ideal init mode and
// perfect sync assumes the frame begins at sample 0.
inline std::vector<std::uint8_t> demodulate(const Samples& rx, const CarrierMap& map, int cp_len,
                                            const Samples& preamble_freq, const RxOptions& opts,
                                            RxDiagnostics* diag = nullptr,
                                            const ChannelSpec* true_channel = nullptr) {
    SyncResult sync;
    if (opts.sync_mode == SyncMode::perfect) {
        sync.frame_start = 0;
        sync.peak = 1.0;
        sync.initial_channel = estimate_channel(rx, 0, map, cp_len, preamble_freq);
    } else {
        sync = synchronize(rx, map, cp_len, preamble_freq, opts.sync_threshold);
    }

    EqualizerState st;
    st.alpha = opts.alpha;
    st.update = opts.eq_mode == EqMode::sdfe;
    if (opts.init_mode == InitMode::ideal) {
        if (!true_channel) throw std::invalid_argument("demodulate: ideal init needs the channel");
        st.h = channel_freq_response(*true_channel, map.k);
        for (int bin = 0; bin < map.k; ++bin)
            if (!map.is_occupied(bin)) st.h[static_cast<std::size_t>(bin)] = cplx{0, 0};
    } else {
        st.h = sync.initial_channel;
    }

    const auto sym_len = static_cast<std::size_t>(map.k + cp_len);
    const std::size_t body = sync.frame_start + sym_len; // first data symbol
    const std::size_t nsym = rx.size() >= body + sym_len ? (rx.size() - body) / sym_len : 0;

    std::vector<std::uint8_t> bits;
    bits.reserve(nsym * 2 * map.data.size());
    if (diag) {
        diag->sync = sync;
        diag->symbol_count = static_cast<int>(nsym);
        diag->evm.clear();
        diag->evm.reserve(nsym);
    }

    Samples win(static_cast<std::size_t>(map.k));
    for (std::size_t t = 0; t < nsym; ++t) {
        const std::size_t at = body + t * sym_len + static_cast<std::size_t>(cp_len);
        std::copy(rx.begin() + at, rx.begin() + at + map.k, win.begin());
        const Samples binsf = dft(win);
        const Samples eq = dfe_equalize_symbol(binsf, st, map);
        double acc = 0.0;
        for (int d : map.data) {
            const cplx v = eq[static_cast<std::size_t>(d)];
            std::uint8_t b2[2];
            qpsk_demap_into(v, b2);
            bits.push_back(b2[0]);
            bits.push_back(b2[1]);
            acc += std::norm(v - qpsk_snap(v));
        }
        if (diag) diag->evm.push_back(std::sqrt(acc / static_cast<double>(map.data.size())));
    }
    return bits;
}

} // namespace lrofdm

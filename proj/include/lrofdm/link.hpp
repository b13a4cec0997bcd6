#pragma once
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "channel.hpp"
#include "quantizer.hpp"
#include "rx.hpp"
#include "tx.hpp"

namespace lrofdm {

// Everything a single link run needs besides the operating point.
struct LinkConfig {
    CarrierMap map = default_map_64();
    int cp_len = 16;
    std::uint64_t preamble_seed = 0xA5A5;
    double sample_rate_hz = 1.8e6;

    std::vector<PathSpec> paths = {{0.15, 0.1}, {0.63, 3.8}, {2.22, 2.6}, {3.05, 1.3}};
    PhaseMode phase_mode = PhaseMode::real_positive;

    bool auto_loading = true;
    double clip_sigma = 3.0;
    double fixed_step = 1.0;
    bool with_rrc = false;
    RrcParams rrc;

    RxOptions rx;

    void validate() const {
        map.validate();
        if (!is_pow2(static_cast<std::size_t>(map.k)))
            throw std::invalid_argument("link: k must be a power of two");
        if (cp_len < 0 || cp_len >= map.k) throw std::invalid_argument("link: cp_len out of range");
        if (!(sample_rate_hz > 0)) throw std::invalid_argument("link: sample rate must be positive");
        if (paths.empty()) throw std::invalid_argument("link: empty path table");
        if (!(clip_sigma > 0)) throw std::invalid_argument("link: clip_sigma must be positive");
        if (!auto_loading && !(fixed_step > 0))
            throw std::invalid_argument("link: fixed step must be positive");
    }
};

constexpr int kHardwareBits = 0; // depth code for the no-quantizer baseline

struct SweepConfig {
    std::vector<double> snr_points_db;    // empty = single noiseless point
    std::vector<int> bit_depths = {3, 4, 5, kHardwareBits};
    int files_per_point = 10;
    int file_size_bytes = 50;
    int repetitions = 300;
    std::uint64_t master_seed = 1;
    int jobs = 1;

    void validate() const {
        for (int b : bit_depths)
            if (b != kHardwareBits && (b < 1 || b > 16))
                throw std::invalid_argument("sweep: bit depth out of range");
        if (bit_depths.empty()) throw std::invalid_argument("sweep: no bit depths");
        if (files_per_point < 1 || file_size_bytes < 1 || repetitions < 1)
            throw std::invalid_argument("sweep: counts must be >= 1");
        if (jobs < 1) throw std::invalid_argument("sweep: jobs must be >= 1");
    }
};

struct BerRecord {
    int bits = kHardwareBits; // 0 means hardware
    std::optional<double> requested_snr_db;
    double measured_snr_db = std::numeric_limits<double>::infinity();
    double ber = 0.0;
    long long bit_count = 0;
    int sync_failures = 0;
    bool degenerate = false;
    double evm_rms = 0.0;
    double wall_s = 0.0;
    std::vector<double> file_bers; // per synchronized file, in file order
};

struct PowerRecord {
    int bits;
    double f_s;
    double c;
    double p_adc; // watts
};

// Eb/N0 of a data bit at the demapper given the post-channel SNR, from
// 2 bits per QPSK symbol and the occupied-to-total carrier ratio; the
// cyclic prefix is stripped before the DFT and does not enter.
inline double ebn0_to_snr_db(double ebn0_db, const CarrierMap& map) {
    return ebn0_db + db10(2.0 * map.occupied() / static_cast<double>(map.k));
}

// One (bit depth, SNR) measurement: files_per_point independent payload
// files, each transmitted `repetitions` times back to back in one frame,
// per-file BER averaged across the files that synchronized. Dropped
// files are counted, not compared. The point rng fans out one substream
// per file, so files and points are independent and reorderable.
inline BerRecord measure_ber(const LinkConfig& link, int bits_code, std::optional<double> snr_db,
                             const Rng& point_rng, int files_per_point, int file_size_bytes,
                             int repetitions) {
    link.validate();
    const Samples preamble = build_preamble(link.map, link.preamble_seed);

    BerRecord rec;
    rec.bits = bits_code;
    rec.requested_snr_db = snr_db;

    double ber_sum = 0.0, snr_lin_sum = 0.0, evm_sq_sum = 0.0;
    int ok_files = 0;

    for (int f = 0; f < files_per_point; ++f) {
        Rng frng = point_rng.derive(0xF17E, static_cast<std::uint64_t>(f));

        std::vector<std::uint8_t> payload(static_cast<std::size_t>(file_size_bytes));
        for (auto& b : payload) b = frng.byte();

        ChannelSpec ch = taps_from_paths(link.paths, link.sample_rate_hz, link.phase_mode, frng);
        ch.snr_db = snr_db;

        const Frame frame = modulate(payload, repetitions, link.map, link.cp_len, preamble);
        const ChannelResult chr = apply_channel(frame.samples, ch, frng);

        Samples rx_in;
        if (bits_code == kHardwareBits) {
            rx_in = chr.out;
        } else {
            const QuantizerSpec q = link.auto_loading
                                        ? auto_step(chr.out, bits_code, link.clip_sigma)
                                        : QuantizerSpec{bits_code, link.fixed_step};
            rx_in = adc_block(chr.out, q, link.with_rrc, link.rrc);
        }

        try {
            RxDiagnostics diag;
            const auto bits = demodulate(rx_in, link.map, link.cp_len, preamble, link.rx, &diag, &ch);

            const auto truth = bytes_to_bits(payload);
            const std::size_t total = truth.size() * static_cast<std::size_t>(repetitions);
            const std::size_t compared = std::min(total, bits.size());
            long long errs = 0;
            for (std::size_t i = 0; i < compared; ++i)
                errs += bits[i] != truth[i % truth.size()];

            if (compared == 0) throw sync_failure(0.0);
            const double fber = static_cast<double>(errs) / static_cast<double>(compared);
            ber_sum += fber;
            rec.file_bers.push_back(fber);
            rec.bit_count += static_cast<long long>(compared);
            snr_lin_sum += undb10(chr.measured_snr_db);
            evm_sq_sum += diag.evm_rms() * diag.evm_rms();
            ++ok_files;
        } catch (const sync_failure&) {
            ++rec.sync_failures;
        } catch (const equalizer_singularity&) {
            ++rec.sync_failures;
        }
    }

    if (ok_files == 0) {
        rec.degenerate = true;
        rec.ber = std::numeric_limits<double>::quiet_NaN();
        rec.measured_snr_db = std::numeric_limits<double>::quiet_NaN();
        return rec;
    }
    rec.ber = ber_sum / ok_files;
    rec.measured_snr_db = snr_db ? db10(snr_lin_sum / ok_files)
                                 : std::numeric_limits<double>::infinity();
    rec.evm_rms = std::sqrt(evm_sq_sum / ok_files);
    return rec;
}

// Grid of measure_ber over bit_depths x snr_points. Rows come back in
// deterministic (depth, snr) order and every point derives its rng from
// (master_seed, depth code, snr index) regardless of worker scheduling.
inline std::vector<BerRecord> run_sweep(const LinkConfig& link, const SweepConfig& sweep) {
    link.validate();
    sweep.validate();

    struct Point {
        int bits;
        std::optional<double> snr;
        std::uint64_t snr_index;
    };
    std::vector<Point> grid;
    for (int b : sweep.bit_depths) {
        if (sweep.snr_points_db.empty()) grid.push_back({b, std::nullopt, 0});
        for (std::size_t i = 0; i < sweep.snr_points_db.size(); ++i)
            grid.push_back({b, sweep.snr_points_db[i], i});
    }

    const Rng master(sweep.master_seed);
    std::vector<BerRecord> out(grid.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr fail;
    std::mutex fail_mu;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            try {
                const auto& p = grid[i];
                const Rng prng =
                    master.derive(static_cast<std::uint64_t>(p.bits), p.snr_index, 0x9017);
                const auto t0 = std::chrono::steady_clock::now();
                out[i] = measure_ber(link, p.bits, p.snr, prng, sweep.files_per_point,
                                     sweep.file_size_bytes, sweep.repetitions);
                out[i].wall_s = std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - t0)
                                    .count();
            } catch (...) {
                std::lock_guard<std::mutex> lk(fail_mu);
                if (!fail) fail = std::current_exception();
                return;
            }
        }
    };

    const int n = std::min<int>(sweep.jobs, static_cast<int>(grid.size()));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (fail) std::rethrow_exception(fail);
    return out;
}

// p = c * f_s * 2^bits, exact
inline std::vector<PowerRecord> power_curve(int bits_min, int bits_max, double f_s, double c) {
    if (bits_min < 1 || bits_max > 16 || bits_min > bits_max)
        throw std::invalid_argument("power_curve: bit range must satisfy 1 <= min <= max <= 16");
    if (!(f_s > 0) || !(c > 0))
        throw std::invalid_argument("power_curve: f_s and c must be positive");
    std::vector<PowerRecord> out;
    for (int b = bits_min; b <= bits_max; ++b)
        out.push_back({b, f_s, c, c * f_s * std::ldexp(1.0, b)});
    return out;
}

} // namespace lrofdm

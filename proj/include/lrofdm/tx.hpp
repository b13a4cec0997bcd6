#pragma once
#include <cstdint>
#include <stdexcept>

#include "carrier_map.hpp"
#include "dft.hpp"
#include "qpsk.hpp"
#include "rng.hpp"

namespace lrofdm {

struct Frame {
    Samples samples;  // preamble symbol first, then data symbols, each with CP
    int symbol_count = 0;
    int sym_len = 0; // k + cp_len
};

// MSB-first bit expansion; the inverse of bits_to_bytes in io.hpp.
inline std::vector<std::uint8_t> bytes_to_bits(const std::vector<std::uint8_t>& bytes) {
    std::vector<std::uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t b : bytes)
        for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1);
    return bits;
}

// BPSK preamble on the occupied carriers, zero on nulls. The sequence
// is a pure function of the seed so the receiver regenerates it.
inline Samples build_preamble(const CarrierMap& map, std::uint64_t seed) {
    Rng rng(seed);
    Samples f(static_cast<std::size_t>(map.k), cplx{0, 0});
    for (int bin = 0; bin < map.k; ++bin)
        if (map.is_occupied(bin)) f[static_cast<std::size_t>(bin)] = rng.bit() ? cplx{-1, 0} : cplx{1, 0};
    return f;
}

namespace detail {

inline void append_with_cp(Samples& out, const Samples& sym_time, int cp_len) {
    out.insert(out.end(), sym_time.end() - cp_len, sym_time.end());
    out.insert(out.end(), sym_time.begin(), sym_time.end());
}

} // namespace detail

// Payload bits (bytes expanded MSB first, repeated `repetitions` times,
// zero padded to fill the last symbol) onto data carriers, pilots
// inserted, unitary IDFT, CP prepended per symbol, preamble first.
inline Frame modulate(const std::vector<std::uint8_t>& payload, int repetitions,
                      const CarrierMap& map, int cp_len, const Samples& preamble_freq) {
    if (payload.empty()) throw std::invalid_argument("modulate: empty payload");
    if (repetitions < 1) throw std::invalid_argument("modulate: repetitions must be >= 1");
    if (cp_len < 0 || cp_len >= map.k) throw std::invalid_argument("modulate: cp_len out of range");

    const auto file_bits = bytes_to_bits(payload);
    const std::size_t bits_per_sym = 2 * map.data.size();
    const std::size_t total = file_bits.size() * static_cast<std::size_t>(repetitions);
    const std::size_t nsym = (total + bits_per_sym - 1) / bits_per_sym;

    std::vector<std::uint8_t> bits(nsym * bits_per_sym, 0);
    for (std::size_t i = 0; i < total; ++i) bits[i] = file_bits[i % file_bits.size()];

    Frame fr;
    fr.symbol_count = static_cast<int>(nsym);
    fr.sym_len = map.k + cp_len;
    fr.samples.reserve((nsym + 1) * static_cast<std::size_t>(fr.sym_len));

    detail::append_with_cp(fr.samples, idft(preamble_freq), cp_len);

    Samples f(static_cast<std::size_t>(map.k));
    for (std::size_t t = 0; t < nsym; ++t) {
        std::fill(f.begin(), f.end(), cplx{0, 0});
        for (std::size_t d = 0; d < map.data.size(); ++d) {
            const std::size_t i = t * bits_per_sym + 2 * d;
            f[static_cast<std::size_t>(map.data[d])] = qpsk_point(bits[i], bits[i + 1]);
        }
        for (std::size_t p = 0; p < map.pilots.size(); ++p)
            f[static_cast<std::size_t>(map.pilots[p])] = map.pilot_vals[p];
        detail::append_with_cp(fr.samples, idft(f), cp_len);
    }
    return fr;
}

} // namespace lrofdm

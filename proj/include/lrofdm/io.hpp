#pragma once
#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>

#include "link.hpp"

namespace lrofdm {

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

inline void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

namespace detail {

inline void push_f32_le(std::vector<std::uint8_t>& out, float v) {
    const auto u = std::bit_cast<std::uint32_t>(v);
    out.push_back(static_cast<std::uint8_t>(u & 0xff));
    out.push_back(static_cast<std::uint8_t>((u >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((u >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((u >> 24) & 0xff));
}

inline float pull_f32_le(const std::uint8_t* p) {
    const std::uint32_t u = static_cast<std::uint32_t>(p[0]) |
                            (static_cast<std::uint32_t>(p[1]) << 8) |
                            (static_cast<std::uint32_t>(p[2]) << 16) |
                            (static_cast<std::uint32_t>(p[3]) << 24);
    return std::bit_cast<float>(u);
}

} // namespace detail

// Interleaved little-endian float32 I/Q, the lingua franca of SDR tools.
inline void write_iq_f32(const std::string& path, const Samples& s) {
    std::vector<std::uint8_t> raw;
    raw.reserve(s.size() * 8);
    for (const auto& v : s) {
        detail::push_f32_le(raw, static_cast<float>(v.real()));
        detail::push_f32_le(raw, static_cast<float>(v.imag()));
    }
    write_file_bytes(path, raw);
}

inline Samples read_iq_f32(const std::string& path) {
    const auto raw = read_file_bytes(path);
    if (raw.size() % 8 != 0) throw std::runtime_error(path + ": not a float32 I/Q stream");
    Samples s(raw.size() / 8);
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = cplx{detail::pull_f32_le(&raw[8 * i]), detail::pull_f32_le(&raw[8 * i + 4])};
    return s;
}

// 6 significant digits, the CSV contract
inline std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string ber_csv(const std::vector<BerRecord>& recs) {
    std::string out = "bits,requested_snr_db,measured_snr_db,ber,bit_count,sync_failures\n";
    for (const auto& r : recs) {
        out += r.bits == kHardwareBits ? "hardware" : std::to_string(r.bits);
        out += ',';
        out += r.requested_snr_db ? fmt6(*r.requested_snr_db) : "inf";
        out += ',';
        out += fmt6(r.measured_snr_db);
        out += ',';
        out += fmt6(r.ber);
        out += ',';
        out += std::to_string(r.bit_count);
        out += ',';
        out += std::to_string(r.sync_failures);
        out += '\n';
    }
    return out;
}

inline std::string power_csv(const std::vector<PowerRecord>& recs) {
    std::string out = "nbits,power_w\n";
    for (const auto& r : recs) {
        out += std::to_string(r.bits);
        out += ',';
        out += fmt6(r.p_adc);
        out += '\n';
    }
    return out;
}

inline std::string meta_text(std::uint64_t seed, const std::string& cfg_hash,
                             const std::vector<BerRecord>& recs) {
    std::string out;
    out += "seed = " + std::to_string(seed) + "\n";
    out += "config_hash = " + cfg_hash + "\n";
    for (const auto& r : recs) {
        out += "point bits=";
        out += r.bits == kHardwareBits ? "hardware" : std::to_string(r.bits);
        out += " snr=";
        out += r.requested_snr_db ? fmt6(*r.requested_snr_db) : "inf";
        out += " wall_s=" + fmt6(r.wall_s);
        if (r.degenerate) out += " degenerate=1";
        out += "\n";
    }
    return out;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

} // namespace lrofdm

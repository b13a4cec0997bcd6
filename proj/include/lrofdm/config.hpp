#pragma once
#include <cstdio>
#include <istream>
#include <sstream>
#include <string>

#include "link.hpp"

namespace lrofdm {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline double to_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (...) {
        throw config_error("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw config_error("not a number: '" + s + "'");
    return v;
}

inline long long to_ll(const std::string& s) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (...) {
        throw config_error("not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw config_error("not an integer: '" + s + "'");
    return v;
}

inline std::uint64_t to_u64(const std::string& s) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos, 0);
    } catch (...) {
        throw config_error("not an unsigned integer: '" + s + "'");
    }
    if (pos != s.size()) throw config_error("not an unsigned integer: '" + s + "'");
    return v;
}

inline bool to_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw config_error("not a boolean: '" + s + "'");
}

inline std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace detail

// Flat dotted-key run configuration. Every key here maps one to one to
// a --set override on the command line, so a config file plus the meta
// sidecar reproduces a run exactly.
struct RunConfig {
    // ofdm.*
    int k = 64;
    int cp_len = 16;
    int occupied_half = 26;
    std::vector<int> pilot_offsets = {-21, -7, 7, 21};
    std::vector<double> pilot_values = {1, 1, 1, -1};
    std::uint64_t preamble_seed = 0xA5A5;
    double sample_rate_hz = 1.8e6;

    // channel.*
    std::vector<PathSpec> paths = {{0.15, 0.1}, {0.63, 3.8}, {2.22, 2.6}, {3.05, 1.3}};
    PhaseMode phase_mode = PhaseMode::real_positive;

    // quantizer.*
    bool auto_loading = true;
    double clip_sigma = 3.0;
    double fixed_step = 1.0;
    bool with_rrc = false;
    RrcParams rrc;

    // rx.*
    RxOptions rx;

    // sweep.*
    SweepConfig sweep = [] {
        SweepConfig s;
        for (int v = 10; v <= 30; ++v) s.snr_points_db.push_back(v);
        return s;
    }();

    // output.*
    std::string out_dir = ".";
    std::string basename = "ber";

    LinkConfig make_link() const {
        LinkConfig l;
        std::vector<cplx> pv;
        for (double v : pilot_values) pv.emplace_back(v, 0.0);
        try {
            l.map = make_symmetric_map(k, occupied_half, pilot_offsets, pv);
        } catch (const std::invalid_argument& e) {
            throw config_error(e.what());
        }
        l.cp_len = cp_len;
        l.preamble_seed = preamble_seed;
        l.sample_rate_hz = sample_rate_hz;
        l.paths = paths;
        l.phase_mode = phase_mode;
        l.auto_loading = auto_loading;
        l.clip_sigma = clip_sigma;
        l.fixed_step = fixed_step;
        l.with_rrc = with_rrc;
        l.rrc = rrc;
        l.rx = rx;
        try {
            l.validate();
        } catch (const std::invalid_argument& e) {
            throw config_error(e.what());
        }
        return l;
    }

    void apply(const std::string& key, const std::string& value);
    std::string dump() const;
};

inline void RunConfig::apply(const std::string& key, const std::string& raw) {
    using namespace detail;
    const std::string value = trim(raw);
    try {
        if (key == "ofdm.k") k = static_cast<int>(to_ll(value));
        else if (key == "ofdm.cp_len") cp_len = static_cast<int>(to_ll(value));
        else if (key == "ofdm.occupied_half") occupied_half = static_cast<int>(to_ll(value));
        else if (key == "ofdm.pilot_offsets") {
            pilot_offsets.clear();
            for (const auto& s : split(value, ',')) pilot_offsets.push_back(static_cast<int>(to_ll(s)));
        } else if (key == "ofdm.pilot_values") {
            pilot_values.clear();
            for (const auto& s : split(value, ',')) pilot_values.push_back(to_double(s));
        } else if (key == "ofdm.preamble_seed") preamble_seed = to_u64(value);
        else if (key == "ofdm.sample_rate_hz") sample_rate_hz = to_double(value);
        else if (key == "channel.paths") {
            paths.clear();
            for (const auto& item : split(value, ',')) {
                const auto parts = split(item, ':');
                if (parts.size() != 2) throw config_error("path entry must be delay_us:att_db");
                paths.push_back({to_double(parts[0]), to_double(parts[1])});
            }
        } else if (key == "channel.phase_mode") {
            if (value == "real_positive") phase_mode = PhaseMode::real_positive;
            else if (value == "seeded_random") phase_mode = PhaseMode::seeded_random;
            else throw config_error("phase_mode must be real_positive or seeded_random");
        } else if (key == "quantizer.loading") {
            if (value == "auto") auto_loading = true;
            else if (value == "fixed") auto_loading = false;
            else throw config_error("loading must be auto or fixed");
        } else if (key == "quantizer.clip_sigma") clip_sigma = to_double(value);
        else if (key == "quantizer.step") fixed_step = to_double(value);
        else if (key == "quantizer.with_rrc") with_rrc = to_bool(value);
        else if (key == "quantizer.rrc_roll_off") rrc.roll_off = to_double(value);
        else if (key == "quantizer.rrc_span_symbols") rrc.span_symbols = static_cast<int>(to_ll(value));
        else if (key == "quantizer.rrc_samples_per_symbol")
            rrc.samples_per_symbol = static_cast<int>(to_ll(value));
        else if (key == "rx.sync_mode") {
            if (value == "correlate") rx.sync_mode = SyncMode::correlate;
            else if (value == "perfect") rx.sync_mode = SyncMode::perfect;
            else throw config_error("sync_mode must be correlate or perfect");
        } else if (key == "rx.eq_mode") {
            if (value == "sdfe") rx.eq_mode = EqMode::sdfe;
            else if (value == "static") rx.eq_mode = EqMode::static_zf;
            else throw config_error("eq_mode must be sdfe or static");
        } else if (key == "rx.init_mode") {
            if (value == "preamble") rx.init_mode = InitMode::preamble;
            else if (value == "ideal") rx.init_mode = InitMode::ideal;
            else throw config_error("init_mode must be preamble or ideal");
        } else if (key == "rx.sync_threshold") rx.sync_threshold = to_double(value);
        else if (key == "rx.alpha") rx.alpha = to_double(value);
        else if (key == "sweep.snr_points_db") {
            sweep.snr_points_db.clear();
            if (value != "noiseless") {
                const auto items = split(value, ',');
                if (items.size() == 1 && split(items[0], ':').size() == 3) {
                    const auto r = split(items[0], ':');
                    const double a = to_double(r[0]), b = to_double(r[1]), s = to_double(r[2]);
                    if (!(s > 0)) throw config_error("snr range step must be positive");
                    for (double v = a; v <= b + 1e-9; v += s) sweep.snr_points_db.push_back(v);
                } else {
                    for (const auto& s : items) sweep.snr_points_db.push_back(to_double(s));
                }
            }
        } else if (key == "sweep.bit_depths") {
            sweep.bit_depths.clear();
            for (const auto& s : split(value, ','))
                sweep.bit_depths.push_back(s == "hardware" ? kHardwareBits
                                                           : static_cast<int>(to_ll(s)));
        } else if (key == "sweep.files_per_point") sweep.files_per_point = static_cast<int>(to_ll(value));
        else if (key == "sweep.file_size_bytes") sweep.file_size_bytes = static_cast<int>(to_ll(value));
        else if (key == "sweep.repetitions") sweep.repetitions = static_cast<int>(to_ll(value));
        else if (key == "sweep.master_seed") sweep.master_seed = to_u64(value);
        else if (key == "output.directory") out_dir = value;
        else if (key == "output.basename") basename = value;
        else throw config_error("unknown key");
    } catch (const config_error& e) {
        throw config_error("key '" + key + "': " + e.what());
    }
}

inline std::string RunConfig::dump() const {
    using detail::fmt_g;
    std::ostringstream o;
    o << "ofdm.k = " << k << "\n";
    o << "ofdm.cp_len = " << cp_len << "\n";
    o << "ofdm.occupied_half = " << occupied_half << "\n";
    o << "ofdm.pilot_offsets = ";
    for (std::size_t i = 0; i < pilot_offsets.size(); ++i)
        o << (i ? "," : "") << pilot_offsets[i];
    o << "\n";
    o << "ofdm.pilot_values = ";
    for (std::size_t i = 0; i < pilot_values.size(); ++i)
        o << (i ? "," : "") << fmt_g(pilot_values[i]);
    o << "\n";
    o << "ofdm.preamble_seed = " << preamble_seed << "\n";
    o << "ofdm.sample_rate_hz = " << fmt_g(sample_rate_hz) << "\n";
    o << "channel.paths = ";
    for (std::size_t i = 0; i < paths.size(); ++i)
        o << (i ? "," : "") << fmt_g(paths[i].delay_us) << ":" << fmt_g(paths[i].attenuation_db);
    o << "\n";
    o << "channel.phase_mode = "
      << (phase_mode == PhaseMode::real_positive ? "real_positive" : "seeded_random") << "\n";
    o << "quantizer.loading = " << (auto_loading ? "auto" : "fixed") << "\n";
    o << "quantizer.clip_sigma = " << fmt_g(clip_sigma) << "\n";
    o << "quantizer.step = " << fmt_g(fixed_step) << "\n";
    o << "quantizer.with_rrc = " << (with_rrc ? "true" : "false") << "\n";
    o << "quantizer.rrc_roll_off = " << fmt_g(rrc.roll_off) << "\n";
    o << "quantizer.rrc_span_symbols = " << rrc.span_symbols << "\n";
    o << "quantizer.rrc_samples_per_symbol = " << rrc.samples_per_symbol << "\n";
    o << "rx.sync_mode = " << (rx.sync_mode == SyncMode::correlate ? "correlate" : "perfect")
      << "\n";
    o << "rx.eq_mode = " << (rx.eq_mode == EqMode::sdfe ? "sdfe" : "static") << "\n";
    o << "rx.init_mode = " << (rx.init_mode == InitMode::preamble ? "preamble" : "ideal") << "\n";
    o << "rx.sync_threshold = " << fmt_g(rx.sync_threshold) << "\n";
    o << "rx.alpha = " << fmt_g(rx.alpha) << "\n";
    o << "sweep.snr_points_db = ";
    if (sweep.snr_points_db.empty()) {
        o << "noiseless";
    } else {
        for (std::size_t i = 0; i < sweep.snr_points_db.size(); ++i)
            o << (i ? "," : "") << fmt_g(sweep.snr_points_db[i]);
    }
    o << "\n";
    o << "sweep.bit_depths = ";
    for (std::size_t i = 0; i < sweep.bit_depths.size(); ++i) {
        o << (i ? "," : "");
        if (sweep.bit_depths[i] == kHardwareBits) o << "hardware";
        else o << sweep.bit_depths[i];
    }
    o << "\n";
    o << "sweep.files_per_point = " << sweep.files_per_point << "\n";
    o << "sweep.file_size_bytes = " << sweep.file_size_bytes << "\n";
    o << "sweep.repetitions = " << sweep.repetitions << "\n";
    o << "sweep.master_seed = " << sweep.master_seed << "\n";
    o << "output.directory = " << out_dir << "\n";
    o << "output.basename = " << basename << "\n";
    return o.str();
}

// line oriented: 'key = value', '#' comments, blank lines ignored
inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        try {
            cfg.apply(key, value);
        } catch (const config_error& e) {
            throw config_error("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

inline RunConfig parse_config_string(const std::string& text) {
    std::istringstream ss(text);
    return parse_config(ss);
}

// FNV-1a over the canonical dump; stable run fingerprint for the meta file
inline std::string config_hash(const RunConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : cfg.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace lrofdm

// Command line front end: sweep / power / single / dump-config.
// Exit codes: 0 ok, 1 runtime or degenerate result, 2 usage or config.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "lrofdm/config.hpp"
#include "lrofdm/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    std::string basename;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("-c,--config", a.config_path, "run configuration file");
    cmd->add_option("--set", a.sets, "override a config key, e.g. --set ofdm.k=64")->take_all();
    cmd->add_option("-o,--out", a.out_dir, "output directory (else $LROFDM_OUTPUT_DIR or .)");
    cmd->add_option("--basename", a.basename, "output file basename");
}

lrofdm::RunConfig load_config(const CommonArgs& a) {
    lrofdm::RunConfig cfg;
    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in) throw lrofdm::config_error("cannot open config file: " + a.config_path);
        cfg = lrofdm::parse_config(in);
    }
    for (const auto& s : a.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw lrofdm::config_error("--set needs key=value, got '" + s + "'");
        cfg.apply(lrofdm::detail::trim(s.substr(0, eq)), s.substr(eq + 1));
    }
    if (!a.out_dir.empty()) {
        cfg.out_dir = a.out_dir;
    } else if (cfg.out_dir == ".") {
        if (const char* env = std::getenv("LROFDM_OUTPUT_DIR")) cfg.out_dir = env;
    }
    if (!a.basename.empty()) cfg.basename = a.basename;
    return cfg;
}

std::string out_path(const lrofdm::RunConfig& cfg, const std::string& ext) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / (cfg.basename + ext)).string();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"link-level simulator for OFDM receivers with low-resolution ADCs"};
    app.require_subcommand(1);

    CommonArgs sweep_args, power_args, single_args, dump_args;

    auto* sweep = app.add_subcommand("sweep", "BER grid over bit depths and SNR points");
    add_common(sweep, sweep_args);
    std::string sweep_bits, sweep_snr, sweep_seed;
    int sweep_jobs = 0;
    bool allow_degenerate = false;
    sweep->add_option("--bits", sweep_bits, "bit depth list, e.g. 3,4,5,hardware");
    sweep->add_option("--snr", sweep_snr, "SNR points, e.g. 16,20,24 or 10:30:1 or noiseless");
    sweep->add_option("--seed", sweep_seed, "master seed");
    sweep->add_option("--jobs", sweep_jobs, "worker threads");
    sweep->add_flag("--allow-degenerate", allow_degenerate,
                    "exit 0 even if a point lost every frame");

    auto* power = app.add_subcommand("power", "converter power model CSV");
    add_common(power, power_args);
    int bits_min = 1, bits_max = 8;
    double fs = 1.8e6, cconst = 496e-15;
    power->add_option("--min", bits_min, "lowest bit depth");
    power->add_option("--max", bits_max, "highest bit depth");
    power->add_option("--fs", fs, "sampling rate in Hz");
    power->add_option("--cstep", cconst, "energy per conversion step in J");

    auto* single = app.add_subcommand("single", "one measurement point, human readable");
    add_common(single, single_args);
    std::string single_bits = "hardware", single_snr = "noiseless", single_seed;
    single->add_option("--bits", single_bits, "1..16 or hardware");
    single->add_option("--snr", single_snr, "SNR in dB or noiseless");
    single->add_option("--seed", single_seed, "master seed");

    auto* dump = app.add_subcommand("dump-config", "print the effective configuration");
    add_common(dump, dump_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sweep->parsed()) {
            auto cfg = load_config(sweep_args);
            if (!sweep_bits.empty()) cfg.apply("sweep.bit_depths", sweep_bits);
            if (!sweep_snr.empty()) cfg.apply("sweep.snr_points_db", sweep_snr);
            if (!sweep_seed.empty()) cfg.apply("sweep.master_seed", sweep_seed);
            if (sweep_jobs > 0) cfg.sweep.jobs = sweep_jobs;

            const auto link = cfg.make_link();
            cfg.sweep.validate();
            const auto records = lrofdm::run_sweep(link, cfg.sweep);

            const auto csv_path = out_path(cfg, ".csv");
            lrofdm::write_text(csv_path, lrofdm::ber_csv(records));
            lrofdm::write_text(
                out_path(cfg, ".meta"),
                lrofdm::meta_text(cfg.sweep.master_seed, lrofdm::config_hash(cfg), records));

            int degenerate = 0;
            for (const auto& r : records) degenerate += r.degenerate;
            std::cout << records.size() << " points -> " << csv_path << "\n";
            if (degenerate > 0) {
                std::cerr << degenerate << " degenerate point(s): every frame failed sync\n";
                if (!allow_degenerate) return kExitRuntime;
            }
            return kExitOk;
        }

        if (power->parsed()) {
            auto cfg = load_config(power_args);
            if (cfg.basename == "ber") cfg.basename = "power";
            const auto records = lrofdm::power_curve(bits_min, bits_max, fs, cconst);
            const auto csv_path = out_path(cfg, ".csv");
            lrofdm::write_text(csv_path, lrofdm::power_csv(records));
            lrofdm::write_text(
                out_path(cfg, ".meta"),
                lrofdm::meta_text(cfg.sweep.master_seed, lrofdm::config_hash(cfg), {}));
            std::cout << records.size() << " rows -> " << csv_path << "\n";
            return kExitOk;
        }

        if (single->parsed()) {
            auto cfg = load_config(single_args);
            if (!single_seed.empty()) cfg.apply("sweep.master_seed", single_seed);

            int bits = lrofdm::kHardwareBits;
            if (single_bits != "hardware") {
                try {
                    bits = static_cast<int>(lrofdm::detail::to_ll(single_bits));
                } catch (...) {
                    throw lrofdm::config_error("--bits takes 1..16 or 'hardware'");
                }
                if (bits < 1 || bits > 16)
                    throw lrofdm::config_error("--bits takes 1..16 or 'hardware'");
            }
            std::optional<double> snr;
            if (single_snr != "noiseless") snr = lrofdm::detail::to_double(single_snr);

            const auto link = cfg.make_link();
            const auto point_rng =
                lrofdm::Rng(cfg.sweep.master_seed)
                    .derive(static_cast<std::uint64_t>(bits), 0, 0x9017);
            const auto rec =
                lrofdm::measure_ber(link, bits, snr, point_rng, cfg.sweep.files_per_point,
                                    cfg.sweep.file_size_bytes, cfg.sweep.repetitions);

            std::cout << "bits          : "
                      << (bits == lrofdm::kHardwareBits ? "hardware" : std::to_string(bits)) << "\n"
                      << "requested_snr : " << (snr ? lrofdm::fmt6(*snr) + " dB" : "noiseless")
                      << "\n"
                      << "measured_snr  : " << lrofdm::fmt6(rec.measured_snr_db) << " dB\n"
                      << "ber           : " << lrofdm::fmt6(rec.ber) << "\n"
                      << "bits_compared : " << rec.bit_count << "\n"
                      << "sync_failures : " << rec.sync_failures << "\n"
                      << "evm_rms       : " << lrofdm::fmt6(rec.evm_rms) << "\n";
            return rec.degenerate ? kExitRuntime : kExitOk;
        }

        if (dump->parsed()) {
            const auto cfg = load_config(dump_args);
            cfg.make_link(); // full validation before printing
            cfg.sweep.validate();
            std::cout << cfg.dump();
            return kExitOk;
        }
    } catch (const lrofdm::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

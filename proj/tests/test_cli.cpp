#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "lrofdm_cli_test";

struct WorkDir {
    WorkDir() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
    ~WorkDir() { fs::remove_all(kWork); }
};

std::string p(const std::string& name) { return (kWork / name).string(); }

int run(const std::string& args, const std::string& stdout_file = "") {
    const std::string out = stdout_file.empty() ? p("discard.log") : stdout_file;
    const std::string cmd = std::string(LROFDM_CLI_PATH) + " " + args + " > '" + out + "' 2> '" +
                            out + ".err'";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WEXITSTATUS(rc);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

long line_count(const std::string& text) { return std::count(text.begin(), text.end(), '\n'); }

// small but fully synchronizable workload
const std::string kTinyLoad = "--set sweep.files_per_point=2 --set sweep.file_size_bytes=20 "
                              "--set sweep.repetitions=2 ";

} // namespace

TEST_CASE("usage errors exit with status 2") {
    WorkDir wd;
    REQUIRE(run("") == 2);
    REQUIRE(run("frobnicate") == 2);
    REQUIRE(run("sweep -c " + p("missing.cfg")) == 2);
    REQUIRE(run("dump-config --set nope=1") == 2);
    REQUIRE(run("dump-config --set ofdm.k") == 2); // no '=' in override
    REQUIRE(run("single --bits 25") == 2);
    REQUIRE(run("sweep --snr banana") == 2);
}

TEST_CASE("help is a success") {
    WorkDir wd;
    REQUIRE(run("--help", p("help.txt")) == 0);
    const std::string help = read_text(p("help.txt"));
    for (const char* sub : {"sweep", "power", "single", "dump-config"})
        REQUIRE_THAT(help, ContainsSubstring(sub));
}

TEST_CASE("power writes the defaults table") {
    WorkDir wd;
    REQUIRE(run("power -o '" + p("out") + "'") == 0);
    const std::string csv = read_text(p("out") + "/power.csv");
    REQUIRE_THAT(csv, StartsWith("nbits,power_w\n"));
    REQUIRE(line_count(csv) == 9);
    REQUIRE_THAT(csv, ContainsSubstring("8,0.000228557\n"));
    REQUIRE(fs::exists(p("out") + "/power.meta"));

    REQUIRE(run("power --min 2 --max 4 -o '" + p("out2") + "' --basename small") == 0);
    REQUIRE(line_count(read_text(p("out2") + "/small.csv")) == 4);
}

TEST_CASE("dump-config round trips through a file") {
    WorkDir wd;
    REQUIRE(run("dump-config", p("a.cfg")) == 0);
    const std::string a = read_text(p("a.cfg"));
    REQUIRE_THAT(a, ContainsSubstring("ofdm.k = 64\n"));
    REQUIRE_THAT(a, ContainsSubstring("sweep.bit_depths = 3,4,5,hardware\n"));

    REQUIRE(run("dump-config -c '" + p("a.cfg") + "'", p("b.cfg")) == 0);
    REQUIRE(read_text(p("b.cfg")) == a);

    REQUIRE(run("dump-config --set ofdm.k=128", p("c.cfg")) == 0);
    REQUIRE_THAT(read_text(p("c.cfg")), ContainsSubstring("ofdm.k = 128\n"));

    REQUIRE(run("dump-config --set ofdm.k=60") == 2); // validated before printing
}

TEST_CASE("sweep covers the default grid") {
    WorkDir wd;
    const int rc = run("sweep --set sweep.files_per_point=1 --set sweep.file_size_bytes=12 "
                       "--set sweep.repetitions=1 --allow-degenerate -o '" +
                       p("grid") + "'");
    REQUIRE(rc == 0);
    const std::string csv = read_text(p("grid") + "/ber.csv");
    // 4 depths x 21 SNR points plus the header
    REQUIRE(line_count(csv) == 85);
    REQUIRE_THAT(csv, StartsWith("bits,requested_snr_db,measured_snr_db,ber,bit_count,sync_failures\n"));
    REQUIRE_THAT(csv, ContainsSubstring("\nhardware,"));
    REQUIRE_THAT(csv, ContainsSubstring("\n3,10,"));
    REQUIRE_THAT(csv, ContainsSubstring("\n5,30,"));
}

TEST_CASE("sweep outputs repeat byte for byte under one seed") {
    WorkDir wd;
    const std::string common = "sweep --bits hardware --snr 16 " + kTinyLoad + "--seed 7 -o '";
    REQUIRE(run(common + p("d1") + "'") == 0);
    REQUIRE(run(common + p("d2") + "'") == 0);
    const std::string a = read_text(p("d1") + "/ber.csv");
    REQUIRE(a == read_text(p("d2") + "/ber.csv"));
    REQUIRE_THAT(a, ContainsSubstring("hardware,16,"));

    REQUIRE(run("sweep --bits hardware --snr 16 " + kTinyLoad + "--seed 8 -o '" + p("d3") + "'") ==
            0);
    REQUIRE(a != read_text(p("d3") + "/ber.csv"));

    const std::string meta = read_text(p("d1") + "/ber.meta");
    REQUIRE_THAT(meta, StartsWith("seed = 7\n"));
    REQUIRE_THAT(meta, ContainsSubstring("config_hash = "));
    REQUIRE_THAT(meta, ContainsSubstring("point bits=hardware snr=16 wall_s="));
}

TEST_CASE("a sweep that cannot sync reports failure") {
    WorkDir wd;
    const std::string args = "sweep --bits 4 --snr 16 " + kTinyLoad +
                             "--set rx.sync_threshold=1.5 -o '" + p("deg") + "'";
    REQUIRE(run(args) == 1);
    REQUIRE(run(args + " --allow-degenerate") == 0);
    const std::string csv = read_text(p("deg") + "/ber.csv");
    REQUIRE_THAT(csv, ContainsSubstring("4,16,nan,nan,0,2\n"));
}

TEST_CASE("single prints a deterministic report") {
    WorkDir wd;
    const std::string args = "single --bits 4 --snr 20 --seed 3 " + kTinyLoad +
                             "--set rx.sync_mode=perfect";
    REQUIRE(run(args, p("r1.txt")) == 0);
    REQUIRE(run(args, p("r2.txt")) == 0);
    const std::string r = read_text(p("r1.txt"));
    REQUIRE(r == read_text(p("r2.txt")));
    REQUIRE_THAT(r, ContainsSubstring("bits          : 4"));
    REQUIRE_THAT(r, ContainsSubstring("requested_snr : 20 dB"));
    REQUIRE_THAT(r, ContainsSubstring("sync_failures : 0"));

    REQUIRE(run("single " + kTinyLoad, p("hw.txt")) == 0); // hardware, noiseless defaults
    const std::string hw = read_text(p("hw.txt"));
    REQUIRE_THAT(hw, ContainsSubstring("bits          : hardware"));
    REQUIRE_THAT(hw, ContainsSubstring("requested_snr : noiseless"));
    REQUIRE_THAT(hw, ContainsSubstring("ber           : 0\n"));

    REQUIRE(run("single --bits 4 --snr 16 " + kTinyLoad + "--set rx.sync_threshold=1.5") == 1);
}

TEST_CASE("environment variable supplies the output directory") {
    WorkDir wd;
    const std::string cmd = std::string("LROFDM_OUTPUT_DIR='") + p("envout") + "' " +
                            LROFDM_CLI_PATH + " power > /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    REQUIRE(fs::exists(p("envout") + "/power.csv"));

    // an explicit -o wins over the environment
    const std::string cmd2 = std::string("LROFDM_OUTPUT_DIR='") + p("envlose") + "' " +
                             LROFDM_CLI_PATH + " power -o '" + p("explicit") +
                             "' > /dev/null 2>&1";
    REQUIRE(std::system(cmd2.c_str()) == 0);
    REQUIRE(fs::exists(p("explicit") + "/power.csv"));
    REQUIRE_FALSE(fs::exists(p("envlose") + "/power.csv"));
}

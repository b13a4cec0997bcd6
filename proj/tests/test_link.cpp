#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lrofdm/link.hpp"

using namespace lrofdm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

LinkConfig awgn_link() {
    LinkConfig l;
    l.paths = {{0.0, 0.0}}; // single full-strength tap
    l.rx.sync_mode = SyncMode::perfect;
    l.rx.eq_mode = EqMode::static_zf;
    l.rx.init_mode = InitMode::ideal;
    return l;
}

double file_sd(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(x.size() - 1));
}

} // namespace

TEST_CASE("snr offset for the bit-energy operating point") {
    const CarrierMap map = default_map_64();
    // 2 bits per symbol on 52 of 64 carriers
    REQUIRE_THAT(ebn0_to_snr_db(4.0, map), WithinAbs(6.1085, 1e-3));
    REQUIRE_THAT(ebn0_to_snr_db(0.0, map), WithinAbs(2.1085, 1e-3));
}

TEST_CASE("awgn error rate tracks the matched-filter bound") {
    const LinkConfig link = awgn_link();
    const double ebn0_db = 4.0;
    const double snr = ebn0_to_snr_db(ebn0_db, link.map);
    const Rng prng = Rng(1).derive(kHardwareBits, 0, 0x9017);
    const BerRecord rec = measure_ber(link, kHardwareBits, snr, prng, 10, 50, 250);

    REQUIRE(rec.bit_count == 1000000);
    REQUIRE(rec.sync_failures == 0);
    const double theory = 0.5 * std::erfc(std::sqrt(undb10(ebn0_db)));
    REQUIRE_THAT(rec.ber, WithinRel(theory, 0.10));
    REQUIRE_THAT(rec.measured_snr_db, WithinAbs(snr, 0.1));
}

TEST_CASE("noiseless identity channel is error free end to end") {
    LinkConfig link;
    link.paths = {{0.0, 0.0}};
    const Rng prng = Rng(3).derive(kHardwareBits, 0, 0x9017);
    const BerRecord rec = measure_ber(link, kHardwareBits, std::nullopt, prng, 3, 10, 2);
    REQUIRE(rec.ber == 0.0);
    REQUIRE(rec.sync_failures == 0);
    REQUIRE(rec.bit_count == 3 * 160);
    REQUIRE(rec.measured_snr_db == std::numeric_limits<double>::infinity());
    REQUIRE(rec.file_bers == std::vector<double>{0.0, 0.0, 0.0});
    REQUIRE_FALSE(rec.degenerate);
}

TEST_CASE("a point repeats bit for bit from its seed") {
    LinkConfig link;
    link.rx.sync_mode = SyncMode::perfect;
    const Rng prng = Rng(5).derive(4, 0, 0x9017);
    const BerRecord a = measure_ber(link, 4, 16.0, prng, 2, 10, 3);
    const BerRecord b = measure_ber(link, 4, 16.0, prng, 2, 10, 3);
    REQUIRE(a.ber == b.ber);
    REQUIRE(a.measured_snr_db == b.measured_snr_db);
    REQUIRE(a.file_bers == b.file_bers);
    REQUIRE(a.evm_rms == b.evm_rms);
}

TEST_CASE("sweep rows are ordered and independent of worker count") {
    LinkConfig link;
    link.rx.sync_mode = SyncMode::perfect;
    SweepConfig sw;
    sw.snr_points_db = {16.0, 20.0};
    sw.bit_depths = {4, kHardwareBits};
    sw.files_per_point = 2;
    sw.file_size_bytes = 10;
    sw.repetitions = 3;
    sw.master_seed = 7;

    sw.jobs = 1;
    const auto serial = run_sweep(link, sw);
    sw.jobs = 4;
    const auto parallel = run_sweep(link, sw);

    REQUIRE(serial.size() == 4);
    REQUIRE(serial[0].bits == 4);
    REQUIRE(serial[1].bits == 4);
    REQUIRE(serial[2].bits == kHardwareBits);
    REQUIRE(serial[3].bits == kHardwareBits);
    REQUIRE(*serial[0].requested_snr_db == 16.0);
    REQUIRE(*serial[1].requested_snr_db == 20.0);

    for (std::size_t i = 0; i < serial.size(); ++i) {
        REQUIRE(serial[i].bits == parallel[i].bits);
        REQUIRE(serial[i].ber == parallel[i].ber);
        REQUIRE(serial[i].measured_snr_db == parallel[i].measured_snr_db);
        REQUIRE(serial[i].bit_count == parallel[i].bit_count);
        REQUIRE(serial[i].sync_failures == parallel[i].sync_failures);
        REQUIRE(serial[i].file_bers == parallel[i].file_bers);
    }
}

TEST_CASE("empty snr list runs one noiseless point per depth") {
    LinkConfig link;
    link.paths = {{0.0, 0.0}};
    SweepConfig sw;
    sw.snr_points_db.clear();
    sw.bit_depths = {kHardwareBits, 8};
    sw.files_per_point = 1;
    sw.file_size_bytes = 10;
    sw.repetitions = 1;
    const auto recs = run_sweep(link, sw);
    REQUIRE(recs.size() == 2);
    for (const auto& r : recs) {
        REQUIRE_FALSE(r.requested_snr_db.has_value());
        REQUIRE(r.measured_snr_db == std::numeric_limits<double>::infinity());
    }
    REQUIRE(recs[0].ber == 0.0); // unquantized, clean channel
}

TEST_CASE("only transmitted payload bits are compared") {
    LinkConfig link;
    link.paths = {{0.0, 0.0}};
    link.rx.sync_mode = SyncMode::perfect;
    const Rng prng = Rng(9).derive(kHardwareBits, 0, 0x9017);
    // 8 payload bits ride in a 96-bit symbol; the padding is not scored
    const BerRecord rec = measure_ber(link, kHardwareBits, std::nullopt, prng, 3, 1, 1);
    REQUIRE(rec.bit_count == 3 * 8);
}

TEST_CASE("averaging more repetitions tightens the file spread") {
    LinkConfig link; // multipath defaults
    link.rx.sync_mode = SyncMode::perfect;
    const Rng prng = Rng(11).derive(4, 0, 0x9017);
    const BerRecord narrow = measure_ber(link, 4, 16.0, prng, 10, 50, 300);
    const BerRecord wide = measure_ber(link, 4, 16.0, prng, 10, 50, 75);
    REQUIRE(narrow.file_bers.size() == 10);
    REQUIRE(wide.file_bers.size() == 10);
    // same operating point measured twice: means agree loosely, spread shrinks
    REQUIRE_THAT(narrow.ber, WithinRel(wide.ber, 0.35));
    REQUIRE(file_sd(narrow.file_bers) < file_sd(wide.file_bers));
}

TEST_CASE("an impossible sync threshold degenerates the point") {
    LinkConfig link;
    link.rx.sync_threshold = 1.5; // correlation is normalized to <= 1
    const Rng prng = Rng(13).derive(4, 0, 0x9017);
    const BerRecord rec = measure_ber(link, 4, 16.0, prng, 3, 10, 2);
    REQUIRE(rec.degenerate);
    REQUIRE(rec.sync_failures == 3);
    REQUIRE(std::isnan(rec.ber));
    REQUIRE(rec.bit_count == 0);
}

TEST_CASE("power model is exact") {
    const auto recs = power_curve(1, 8, 1.8e6, 496e-15);
    REQUIRE(recs.size() == 8);
    for (int b = 1; b <= 8; ++b) {
        REQUIRE(recs[b - 1].bits == b);
        REQUIRE(recs[b - 1].p_adc == 496e-15 * 1.8e6 * std::ldexp(1.0, b));
    }
    for (int i = 1; i < 8; ++i) REQUIRE(recs[i].p_adc / recs[i - 1].p_adc == 2.0);
    REQUIRE_THROWS_AS(power_curve(0, 8, 1.8e6, 496e-15), std::invalid_argument);
    REQUIRE_THROWS_AS(power_curve(4, 2, 1.8e6, 496e-15), std::invalid_argument);
    REQUIRE_THROWS_AS(power_curve(1, 8, 0.0, 496e-15), std::invalid_argument);
}

TEST_CASE("configuration validation rejects impossible links and sweeps") {
    LinkConfig link;
    link.cp_len = 64;
    REQUIRE_THROWS_AS(link.validate(), std::invalid_argument);

    LinkConfig odd;
    odd.map = make_symmetric_map(60, 26, {7}, {cplx{1, 0}});
    REQUIRE_THROWS_AS(odd.validate(), std::invalid_argument); // not a power of two

    SweepConfig sw;
    sw.jobs = 0;
    REQUIRE_THROWS_AS(sw.validate(), std::invalid_argument);
    sw.jobs = 1;
    sw.bit_depths = {17};
    REQUIRE_THROWS_AS(sw.validate(), std::invalid_argument);
    sw.bit_depths.clear();
    REQUIRE_THROWS_AS(sw.validate(), std::invalid_argument);
    sw.bit_depths = {4};
    sw.files_per_point = 0;
    REQUIRE_THROWS_AS(sw.validate(), std::invalid_argument);
}

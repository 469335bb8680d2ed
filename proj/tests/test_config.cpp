#include <doctest.h>

#include <string>

#include "subnyq/config.hpp"
#include "subnyq/errors.hpp"
#include "subnyq/rng.hpp"

using namespace subnyq;

namespace {

const std::string kBaseConfig = R"(
# comment
[run]
sample_rate = 5G
duration = 100u
master_seed = 7

[soi]
kind = qam16_real
symbol_rate = 200M

[interference]
kind = gaussian
bandwidth = 200M
rms = 1.0

[mixing]
a11 = 1.0
a12 = 0.5
a21 = 0.3
a22 = 1.0

[pulse]
rep_rate = 3.9968M
width = 100f
)";

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("parse_si_number handles suffixes and rejects junk") {
    CHECK(parse_si_number("200M") == 200e6);
    CHECK(parse_si_number("5n") == 5e-9);
    CHECK(parse_si_number("1.5k") == 1500.0);
    CHECK(parse_si_number("100f") == 100e-15);
    CHECK(parse_si_number("-3.2u") == -3.2e-6);
    CHECK(parse_si_number("2.5G") == 2.5e9);
    CHECK(parse_si_number("4T") == 4e12);
    CHECK(parse_si_number("7m") == 7e-3);
    CHECK(parse_si_number("12p") == 12e-12);
    CHECK(parse_si_number("42") == 42.0);
    CHECK(parse_si_number("1e-2") == 1e-2);
    CHECK(parse_si_number(" 10 ") == 10.0);
    CHECK_THROWS_AS(parse_si_number(""), ConfigError);
    CHECK_THROWS_AS(parse_si_number("abc"), ConfigError);
    CHECK_THROWS_AS(parse_si_number("5X"), ConfigError);
    CHECK_THROWS_AS(parse_si_number("5MM"), ConfigError);
}

TEST_CASE("a complete config parses with defaults applied") {
    const ScenarioConfig cfg = parse_config_text(kBaseConfig, "test");
    CHECK(cfg.sample_rate_hz == 5e9);
    CHECK(cfg.duration_s == 100 * 1e-6);  // SI parse: value times suffix factor
    CHECK(cfg.master_seed == 7);
    CHECK(cfg.soi.kind == SourceKind::qam16_real);
    CHECK(cfg.soi.rms == 1.0);  // default
    CHECK(cfg.interference.kind == SourceKind::gaussian);
    CHECK(cfg.mixing.a12 == 0.5);
    CHECK(cfg.pulse.shape == PulseShape::rect);  // default
    CHECK(cfg.pulse.offset_s == 0.0);
    CHECK(cfg.theta_grid.angles_deg == std::vector<double>{0.0, 45.0, 90.0, 135.0});
    CHECK(cfg.phi_grid.angles_deg.size() == 8);
    CHECK(cfg.signal_bandwidth_hz() == 200e6);
    CHECK(cfg.warnings().empty());
}

TEST_CASE("config errors carry path-qualified messages") {
    SUBCASE("unknown key") {
        const std::string bad = kBaseConfig + "\n[run]\nbogus = 1\n";
        CHECK_THROWS_WITH_AS(parse_config_text(bad, "t"), doctest::Contains("run.bogus"),
                             ConfigError);
    }
    SUBCASE("missing required key") {
        const std::string bad = replace_line(kBaseConfig, "rep_rate = 3.9968M", "");
        CHECK_THROWS_WITH_AS(parse_config_text(bad, "t"), doctest::Contains("pulse.rep_rate"),
                             ConfigError);
    }
    SUBCASE("singular mixing matrix") {
        std::string bad = replace_line(kBaseConfig, "a12 = 0.5", "a12 = 1.0");
        bad = replace_line(bad, "a21 = 0.3", "a21 = 1.0");
        CHECK_THROWS_WITH_AS(parse_config_text(bad, "t"), doctest::Contains("mixing"),
                             ConfigError);
    }
    SUBCASE("overlapping pulses") {
        const std::string bad = replace_line(kBaseConfig, "width = 100f", "width = 1u");
        CHECK_THROWS_WITH_AS(parse_config_text(bad, "t"), doctest::Contains("pulse.width"),
                             ConfigError);
    }
    SUBCASE("non-integer samples per symbol") {
        const std::string bad = replace_line(kBaseConfig, "symbol_rate = 200M",
                                             "symbol_rate = 173M");
        CHECK_THROWS_WITH_AS(parse_config_text(bad, "t"), doctest::Contains("soi"), ConfigError);
    }
    SUBCASE("both symbol_rate and bandwidth") {
        const std::string bad = replace_line(kBaseConfig, "kind = qam16_real",
                                             "kind = qam16_real\nbandwidth = 1M");
        CHECK_THROWS_AS(parse_config_text(bad, "t"), ConfigError);
    }
    SUBCASE("malformed syntax") {
        CHECK_THROWS_AS(parse_config_text("[run\nsample_rate = 1G\n", "t"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("key_without_section = 1\n", "t"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("[run]\nnot a pair\n", "t"), ConfigError);
    }
    SUBCASE("grid angles outside [0, 180)") {
        const std::string bad = kBaseConfig + "\n[grids]\ntheta = 0,45,90,180\n";
        CHECK_THROWS_WITH_AS(parse_config_text(bad, "t"), doctest::Contains("grids.theta"),
                             ConfigError);
    }
    SUBCASE("too few distinct phi angles") {
        const std::string bad = kBaseConfig + "\n[grids]\nphi = 0,30,60,90\n";
        CHECK_THROWS_WITH_AS(parse_config_text(bad, "t"), doctest::Contains("grids.phi"),
                             ConfigError);
    }
}

TEST_CASE("phase-coverage warning fires when periods share a factor") {
    // 4 MHz at 5 GS/s: period 1250 samples, symbol 25 samples, gcd 25
    const std::string aligned = replace_line(kBaseConfig, "rep_rate = 3.9968M", "rep_rate = 4M");
    const ScenarioConfig cfg = parse_config_text(aligned, "t");
    const auto warnings = cfg.warnings();
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("pulse.rep_rate") != std::string::npos);
}

TEST_CASE("seed derivation is deterministic and spreads") {
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(5, 1, 2) != derive_seed(5, 2, 1));
}

TEST_CASE("missing config file raises IoError") {
    CHECK_THROWS_AS(parse_config_file("/nonexistent/path.cfg"), IoError);
}

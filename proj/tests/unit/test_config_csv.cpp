#include <doctest.h>

#include "pbundle/config.hpp"
#include "pbundle/csv.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace pbundle;

TEST_CASE("key/value parsing handles comments and blank lines") {
    const auto kv = parse_key_values("# header\n\nomega = 0.708  # trap\nOmega=0.708\n  delta = 0.025\n");
    CHECK(kv.size() == 3);
    CHECK(kv.at("omega") == "0.708");
    CHECK(kv.at("delta") == "0.025");
}

TEST_CASE("unknown, duplicate and empty keys are errors with line numbers") {
    CHECK_THROWS_WITH_AS(parse_key_values("omega = 1\nomgea = 2\n", "f.cfg"), doctest::Contains("f.cfg:2"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("omega = 1\nomega = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("omega =\n"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("just words\n"), ConfigError);
    CHECK_THROWS_AS(resolve_config({}, {{"bogus", "1"}}), ConfigError);
}

TEST_CASE("overrides replace file values") {
    const RunConfig c = resolve_config({{"omega", "0.5"}, {"n_max", "12"}}, {{"omega", "0.7"}});
    CHECK(c.model.omega == 0.7);
    CHECK(c.n_max == 12);
    CHECK(c.units == UnitSystem::model);
    CHECK(c.echo.at("omega") == "0.7");
}

TEST_CASE("defaults are the single-phonon blockade point") {
    const RunConfig c = resolve_config({});
    CHECK(c.model.omega == 1.0);
    CHECK(c.model.Omega == 1.0);
    CHECK(c.model.g_k == 1.0);
    CHECK(c.model.delta == 0.005);
    CHECK(c.dissipation.kappa_d == 0.005);
    CHECK(c.dissipation.gamma_d == 0.0005);
    CHECK(c.dissipation.kappa_e == 1.1e-8);
}

TEST_CASE("laboratory units divide by g_x") {
    const RunConfig c = resolve_config({{"g_x", "20 kHz"}, {"omega", "10kHz"}, {"delta", "0.5 kHz"}, {"kappa_d", "0.1 kHz"}});
    CHECK(c.units == UnitSystem::laboratory);
    CHECK(c.g_x_kHz == 20.0);
    CHECK(c.model.omega == doctest::Approx(0.5));
    CHECK(c.model.delta == doctest::Approx(0.025));
    CHECK(c.dissipation.kappa_d == doctest::Approx(0.005));
    CHECK(c.model.g_x == 1.0);
}

TEST_CASE("mixing unit systems is rejected") {
    CHECK_THROWS_AS(resolve_config({{"g_x", "20 kHz"}, {"omega", "10 kHz"}, {"delta", "0.1"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({{"omega", "10 kHz"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({{"g_x", "20 kHz"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({{"g_x", "2"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({{"phi", "30 deg"}}), ConfigError);
}

TEST_CASE("tilt angle sets g_k in laboratory units") {
    const RunConfig c0 = resolve_config({{"g_x", "21.6 kHz"}, {"omega", "100 kHz"}, {"phi", "0 deg"}});
    CHECK(c0.model.g_k == doctest::Approx(1.0).epsilon(0.01));
    const RunConfig c90 = resolve_config({{"g_x", "21.6 kHz"}, {"omega", "100 kHz"}, {"phi", "90"}});
    CHECK(std::abs(c90.model.g_k) < 1e-12);
    CHECK_THROWS_AS(resolve_config({{"g_x", "21.6 kHz"}, {"omega", "100 kHz"}, {"phi", "200 deg"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({{"g_x", "21.6 kHz"}, {"omega", "100 kHz"}, {"phi", "10 deg"}, {"g_k", "1 kHz"}}),
                    ConfigError);
}

TEST_CASE("invalid values are rejected") {
    CHECK_THROWS_AS(resolve_config({{"omega", "-1"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({{"omega", "abc"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({{"kappa_d", "-0.1"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({{"n_max", "0"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({{"adaptive_truncation", "maybe"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({{"axis1", "omega 0 1"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({{"axis1", "g_x 0 1 5"}}), ConfigError);
    CHECK_THROWS_AS(resolve_config({{"axis2", "omega 0 1 5"}}), ConfigError);
}

TEST_CASE("sweep axes and lists") {
    const RunConfig c = resolve_config({{"axis1", "Omega -1.5 1.5 121"}, {"axis2", "kappa_e 1e-9 1e-6 4 log"},
                                        {"bind", "g_k=Omega"}, {"n_list", "1, 2,3"}, {"delta_list", "0,0.025"}});
    REQUIRE(c.axes.size() == 2);
    CHECK(c.axes[0].name == "Omega");
    CHECK(c.axes[0].count == 121);
    CHECK(c.axes[1].log_scale);
    CHECK(c.bindings == std::vector<std::string>{"g_k=Omega"});
    CHECK(c.n_list == std::vector<int>{1, 2, 3});
    CHECK(c.delta_list == std::vector<double>{0.0, 0.025});
}

TEST_CASE("config files are read from disk") {
    const auto path = std::filesystem::temp_directory_path() / "pbundle_test_config.cfg";
    {
        std::ofstream os(path);
        os << "omega = 0.58\nOmega = 0.58\ndelta = 0.1\nn_max = 40\n";
    }
    const RunConfig c = resolve_config(read_config_file(path.string()));
    CHECK(c.model.omega == 0.58);
    CHECK(c.n_max == 40);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_config_file(path.string()), ConfigError);
}

TEST_CASE("quantities and booleans") {
    CHECK(parse_quantity("21.6 kHz", "x").unit == "kHz");
    CHECK(parse_quantity("21.6kHz", "x").value == 21.6);
    CHECK(parse_quantity("30 deg", "x").unit == "deg");
    CHECK(parse_quantity("1e-3", "x").unit.empty());
    CHECK_THROWS_AS(parse_quantity("3 MHz", "x"), ConfigError);
    CHECK(parse_bool("true", "x"));
    CHECK_FALSE(parse_bool("false", "x"));
}

TEST_CASE("shortest round-trip number formatting") {
    for (double x : {0.1, 1.0 / 3.0, 1.1e-8, -2.5e300, 0.708}) {
        const std::string s = format_double(x);
        CHECK(std::stod(s) == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("CSV tables round-trip") {
    CsvTable t({"x", "y", "label"});
    t.add_row({"1", "2", "ok"});
    t.add_numeric_row({0.1, 1.0 / 3.0, 7.0});
    CHECK_THROWS_AS(t.add_row({"only one"}), std::invalid_argument);
    std::ostringstream os;
    t.write(os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,y,label");
    std::getline(is, line);
    CHECK(line == "1,2,ok");
    std::getline(is, line);
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    CHECK(std::stod(line.substr(0, c1)) == 0.1);
    CHECK(std::stod(line.substr(c1 + 1, c2 - c1 - 1)) == 1.0 / 3.0);
}

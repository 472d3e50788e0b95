#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "pcfpair/dispersion.hpp"
#include "pcfpair/errors.hpp"
#include "pcfpair/fibre.hpp"

using namespace pcfpair;

namespace {

// Reference values from an independent script: direct Sellmeier sum and
// central differences (h = 0.01 nm) on the shipped coefficients.
constexpr double kSilicaN705 = 1.45517947;
constexpr double kSilicaGroup705 = 1.47098458;
constexpr double kSilicaZdw = 1272.754;
constexpr double kPcfaZdw = 781.999;

const std::string kPresets = std::string(PCFPAIR_SOURCE_DIR) + "/data/presets";

DispersionModel silica() { return SellmeierModel::fused_silica(); }

DispersionModel constant_table(double n) {
  std::vector<double> x, y;
  for (int k = 0; k < 8; ++k) {
    x.push_back(500.0 + 50.0 * k);
    y.push_back(n);
  }
  return TabulatedModel(x, y);
}

double fd_group_index(const DispersionModel& m, double l, double h = 0.01) {
  return phase_index(m, l) - l * (phase_index(m, l + h) - phase_index(m, l - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("phase index of fused silica at 705 nm") {
  CHECK(phase_index(silica(), 705.0) == doctest::Approx(1.4552).epsilon(0.0005 / 1.4552));
  CHECK(std::abs(phase_index(silica(), 705.0) - kSilicaN705) < 1e-8);
}

TEST_CASE("constant tabulated index") {
  const auto m = constant_table(1.45);
  for (double l : {500.0, 612.3, 777.7, 850.0}) CHECK(std::abs(phase_index(m, l) - 1.45) < 1e-14);
  CHECK(std::abs(group_index(m, 640.0) - 1.45) < 1e-14);
}

TEST_CASE("axis model with zero corrections equals its base") {
  const AxisModel axis{SellmeierModel::fused_silica(), {}, {}};
  CHECK(phase_index(axis, 705.0) == phase_index(silica(), 705.0));
  CHECK(group_index(axis, 705.0) == group_index(silica(), 705.0));
}

TEST_CASE("group index of fused silica matches the finite-difference reference") {
  CHECK(std::abs(group_index(silica(), 705.0) - kSilicaGroup705) < 1e-6);
}

TEST_CASE("linear index model has group index equal to its intercept") {
  // Empty Sellmeier sum gives n = 1; the polynomial supplies a + bλ.
  const double a = 1.5, b = -0.02;
  const AxisModel lin{SellmeierModel({}, 400.0, 1200.0), Polynomial{{a - 1.0, b}}, {}};
  for (double l : {450.0, 705.0, 1100.0}) CHECK(group_index(lin, l) == doctest::Approx(a).epsilon(1e-13));
}

TEST_CASE("range errors") {
  CHECK_THROWS_AS(phase_index(silica(), 150.0), RangeError);
  CHECK_THROWS_AS(phase_index(silica(), 4000.0), RangeError);
  CHECK_NOTHROW(phase_index(silica(), 210.0));
  CHECK_THROWS_AS(group_index(silica(), 210.0), RangeError);
  CHECK_THROWS_AS(group_index(silica(), 3710.0), RangeError);
  try {
    phase_index(silica(), 5000.0);
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find("210") != std::string::npos);
    CHECK(std::string(e.what()).find("3710") != std::string::npos);
  }
}

TEST_CASE("zero dispersion wavelengths") {
  CHECK(zero_dispersion_wavelength(silica(), 1000.0, 1500.0) == doctest::Approx(1273.0).epsilon(5.0 / 1273.0));
  CHECK(std::abs(zero_dispersion_wavelength(silica(), 1000.0, 1500.0) - kSilicaZdw) < 0.01);

  const auto pcfa = load_preset(kPresets + "/pcf-a.json");
  const double z = zero_dispersion_wavelength(pcfa.fast_axis, 700.0, 900.0);
  CHECK(z >= 780.0);
  CHECK(z <= 800.0);
  CHECK(std::abs(z - kPcfaZdw) < 0.01);

  CHECK_THROWS_AS(zero_dispersion_wavelength(silica(), 700.0, 900.0), BracketError);
}

TEST_CASE("tabulated loader") {
  SUBCASE("eight monotone rows echo their samples") {
    std::stringstream ss("lambda_nm,n\n500,1.46\n550,1.459\n600,1.458\n650,1.4565\n700,1.4555\n750,1.4546\n800,1.4538\n850,1.4531\n");
    const auto m = parse_tabulated(ss);
    for (std::size_t k = 0; k < m.lambdas().size(); ++k)
      CHECK(phase_index(m, m.lambdas()[k]) == doctest::Approx(m.values()[k]).epsilon(1e-15));
  }
  SUBCASE("duplicated wavelength names the row") {
    std::stringstream ss("lambda_nm,n\n500,1.46\n550,1.459\n600,1.458\n600,1.4565\n700,1.4555\n750,1.4546\n800,1.4538\n850,1.4531\n");
    try {
      parse_tabulated(ss);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.row() == 5);
    }
  }
  SUBCASE("too few rows and malformed numbers") {
    std::stringstream few("lambda_nm,n\n500,1.46\n550,1.459\n");
    CHECK_THROWS_AS(parse_tabulated(few), ParseError);
    std::stringstream bad("lambda_nm,n\n500,1.46\n550,abc\n600,1.458\n650,1.4565\n700,1.4555\n750,1.4546\n800,1.4538\n850,1.4531\n");
    try {
      parse_tabulated(bad);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.row() == 3);
    }
    std::stringstream header("lambda,n\n");
    CHECK_THROWS_AS(parse_tabulated(header), ParseError);
  }
  SUBCASE("100-point silica table interpolates between nodes") {
    const auto table = sample_model(silica(), 500.0, 1000.0, 100);
    const std::string path = "silica_table_test.csv";
    {
      std::ofstream out(path);
      out << "lambda_nm,n\n";
      out.precision(17);
      for (std::size_t k = 0; k < table.lambdas().size(); ++k) out << table.lambdas()[k] << "," << table.values()[k] << "\n";
    }
    const auto m = load_tabulated(path);
    double worst = 0.0;
    for (double l = 501.3; l < 999.0; l += 3.7) worst = std::max(worst, std::abs(phase_index(m, l) - phase_index(silica(), l)));
    CHECK(worst < 1e-6);
    CHECK_THROWS_AS(phase_index(m, 1000.5), RangeError);
    CHECK_THROWS_AS(load_tabulated("does_not_exist.csv"), ConfigError);
  }
}

TEST_CASE("preset invariants") {
  for (const auto& path : list_presets(kPresets)) {
    CAPTURE(path.string());
    const auto f = load_preset(path);
    const auto [lo, hi] = f.range_nm();
    for (const auto* axis : {&f.slow_axis, &f.fast_axis}) {
      // Continuity: bounded difference quotient at 0.1 nm steps.
      for (double l = std::max(lo, 550.0); l + 0.1 <= std::min(hi, 900.0); l += 0.1)
        CHECK(std::abs(phase_index(*axis, l + 0.1) - phase_index(*axis, l)) <= 1e-4 * 0.1);
      // Analytic group index against central differences.
      for (double l = std::max(lo, 550.0) + 1.0; l < std::min(hi, 900.0); l += 25.0)
        CHECK(std::abs(group_index(*axis, l) / fd_group_index(*axis, l) - 1.0) < 1e-6);
    }
    for (double l = 550.0; l <= 900.0; l += 1.0)
      CHECK(phase_index(f.slow_axis, l) - phase_index(f.fast_axis, l) >= 0.0);
  }
}

TEST_CASE("preset schema errors") {
  CHECK_THROWS_AS(parse_preset("{"), ConfigError);
  CHECK_THROWS_AS(parse_preset(R"({"name":"x"})"), ConfigError);
  CHECK_THROWS_AS(resolve_preset("no-such-preset", kPresets), ConfigError);
  const std::string negative_length = R"({"name":"x","sellmeier":{"B":[0.7],"C_um2":[0.005]},
    "waveguide_poly":[],"birefringence_poly":[0.001],"length_m":-1,"n2_m2_per_W":2e-20,
    "Aeff_m2":4e-12,"valid_range_nm":[500,1000]})";
  CHECK_THROWS_AS(parse_preset(negative_length), ConfigError);
  const std::string bad_c = R"({"name":"x","sellmeier":{"B":[0.7],"C_um2":[-0.005]},
    "waveguide_poly":[],"birefringence_poly":[],"length_m":1,"n2_m2_per_W":2e-20,
    "Aeff_m2":4e-12,"valid_range_nm":[500,1000]})";
  CHECK_THROWS_AS(parse_preset(bad_c), ConfigError);
  const std::string inverted = R"({"name":"x","sellmeier":{"B":[0.7],"C_um2":[0.005]},
    "waveguide_poly":[],"birefringence_poly":[-0.001],"length_m":1,"n2_m2_per_W":2e-20,
    "Aeff_m2":4e-12,"valid_range_nm":[500,1000]})";
  CHECK_THROWS_AS(parse_preset(inverted), ConfigError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "grid_helpers.hpp"
#include "pcfpair/csv.hpp"
#include "pcfpair/errors.hpp"
#include "pcfpair/io.hpp"
#include "pcfpair/units.hpp"

using namespace pcfpair;

namespace {

std::vector<MeasurementSetting> table() {
  const auto& t = canonical_settings();
  return {t.begin(), t.end()};
}

template <class F>
std::size_t parse_error_line(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.row();
  }
  return 0;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(597.000000123) == "597");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(round9(1.0 / 3.0) == 0.333333333);
  CHECK(round9(0.0) == 0.0);
}

TEST_CASE("generic CSV reader") {
  std::istringstream ok("a,b\n1,2\n\n3,4e-3\n");
  const auto t = read_csv(ok, {"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1].values[1] == 4e-3);
  CHECK(t.rows[1].line == 4);

  std::istringstream header("x,b\n1,2\n");
  CHECK_THROWS_AS(read_csv(header, {"a", "b"}), ParseError);
  CHECK(parse_error_line([] {
          std::istringstream s("a,b\n1,2\n1,oops\n");
          read_csv(s, {"a", "b"});
        }) == 3);
  CHECK(parse_error_line([] {
          std::istringstream s("a,b\n1,2,3\n");
          read_csv(s, {"a", "b"});
        }) == 2);
  CHECK(parse_error_line([] {
          std::istringstream s("a,b\n1,nan\n");
          read_csv(s, {"a", "b"});
        }) == 2);
}

TEST_CASE("curve CSV round trip") {
  PhaseMatchPoint p;
  p.lambda_p = 705.0;
  p.lambda_s = 597.000000123456;
  p.lambda_i = 860.7;
  p.dk_residual = -7.3e-6;
  std::vector<CurveSample> curve = {{705.0, {p, p}}, {706.0, {}}, {707.0, {p}}};
  std::stringstream ss;
  write_curve_csv(ss, curve);
  const auto rows = read_curve_csv(ss);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].branch == 1.0);
  CHECK(rows[0].lambda_s == doctest::Approx(597.0).epsilon(1e-9));
  CHECK(rows[2].lambda_p == 707.0);

  std::stringstream again;
  std::vector<CurveSample> parsed;
  for (const auto& r : rows) {
    PhaseMatchPoint q;
    q.lambda_s = r.lambda_s;
    q.lambda_i = r.lambda_i;
    q.dk_residual = r.dk;
    if (parsed.empty() || parsed.back().lambda_p != r.lambda_p) parsed.push_back({r.lambda_p, {}});
    parsed.back().points.push_back(q);
  }
  write_curve_csv(again, parsed);
  std::stringstream first;
  write_curve_csv(first, curve);
  CHECK(again.str() == first.str());
}

TEST_CASE("scan and dip CSVs") {
  PurityScanResult scan{{1.0, 2.0, 3.0}, {1.1, 1.05, 1.07}, 2.0, 1.05, false};
  std::stringstream a;
  write_bandwidth_scan_csv(a, scan);
  CHECK(read_csv(a, {"pump_fwhm_nm", "K"}).rows.size() == 3);

  LengthScan ls;
  ls.rows = {{0.2, 1.04, 5.0, false}, {0.4, 1.03, 2.6, false}};
  std::stringstream b;
  write_length_scan_csv(b, ls);
  const auto t = read_csv(b, {"length_m", "K_min", "bw_opt_nm"});
  CHECK(t.rows[1].values[2] == 2.6);

  std::stringstream c;
  write_dip_csv(c, {{-1e-12, 1.0}, {0.0, 0.04}});
  const auto d = read_csv(c, {"delay_ps", "normalized_coincidences"});
  CHECK(d.rows[0].values[0] == -1.0);
}

TEST_CASE("JSI and marginal CSVs") {
  const auto g = testutil::double_gaussian(64, 2.0, 1.0);
  const auto m = jsi_and_marginals(g);
  std::stringstream ss;
  write_jsi_csv(ss, g, m.jsi);
  const auto t = read_jsi_csv(ss);
  REQUIRE(t.signal_nm.size() == 64);
  REQUIRE(t.idler_nm.size() == 64);
  for (std::size_t k = 1; k < 64; ++k) {
    CHECK(t.signal_nm[k] > t.signal_nm[k - 1]);
    CHECK(t.idler_nm[k] > t.idler_nm[k - 1]);
  }
  CHECK(t.signal_nm.front() == doctest::Approx(omega_to_nm(g.omega_s(63))).epsilon(1e-8));
  CHECK(t.intensity(0, 0) == doctest::Approx(m.jsi(63, 63)).epsilon(1e-8));
  CHECK(t.intensity(10, 20) == doctest::Approx(m.jsi(53, 43)).epsilon(1e-8));

  std::istringstream bad("x,1,2\n600,1,2\n");
  CHECK_THROWS_AS(read_jsi_csv(bad), ParseError);
  std::istringstream ragged(",1,2\n600,1\n");
  CHECK(parse_error_line([&] { read_jsi_csv(ragged); }) == 2);

  std::stringstream ms;
  write_marginal_csv(ms, g.omega_s, m.signal);
  const auto mt = read_csv(ms, {"lambda_nm", "intensity"});
  CHECK(mt.rows.size() == 64);
  CHECK(mt.rows[0].values[0] < mt.rows[1].values[0]);
}

TEST_CASE("tomography record CSV") {
  const auto rec = simulate_counts(sagnac_state({}), table(), 1e4, 3);
  std::stringstream ss;
  write_record_csv(ss, rec);
  const auto back = read_record_csv(ss);
  CHECK(!back.custom);
  CHECK(back.counts == rec.counts);
  CHECK(back.settings[4].label == "RH");

  std::stringstream again;
  write_record_csv(again, back);
  std::stringstream first;
  write_record_csv(first, rec);
  CHECK(again.str() == first.str());

  const std::string head = "nu,hwp_s_deg,qwp_s_deg,hwp_i_deg,qwp_i_deg,counts\n";
  std::istringstream frac(head + "1,0,0,0,0,1.5\n");
  CHECK(parse_error_line([&] { read_record_csv(frac); }) == 2);
  std::istringstream neg(head + "1,0,0,0,0,3\n2,0,0,45,0,-1\n");
  CHECK(parse_error_line([&] { read_record_csv(neg); }) == 3);
  std::istringstream badnu(head + "0.5,0,0,0,0,3\n");
  CHECK_THROWS_AS(read_record_csv(badnu), ParseError);
  std::istringstream empty(head);
  CHECK_THROWS_AS(read_record_csv(empty), ParseError);
  std::istringstream custom(head + "1,0,0,0,0,3\n2,10,0,45,0,3\n");
  CHECK(read_record_csv(custom).custom);
}

TEST_CASE("density matrix JSON") {
  const auto rho = random_density_matrix(4);
  const auto back = density_from_json(density_to_json(rho));
  CHECK((back - rho).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(density_to_json(back) == density_to_json(rho));

  CHECK_THROWS_AS(density_from_json("{"), ConfigError);
  CHECK_THROWS_AS(density_from_json(R"({"re":[[1]]})"), ConfigError);
  CHECK_THROWS_AS(density_from_json(R"({"re":[[1,0,0,0],[0,0,0,0],[0,0,0,0]],"im":[]})"), ConfigError);
  CHECK_THROWS_AS(density_from_json(R"({"basis":["HH","VV","HV","VH"],"re":[],"im":[]})"), ConfigError);
  const std::string zeros = "[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]";
  CHECK_THROWS_AS(density_from_json(R"({"re":[[1,2,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],"im":)" + zeros + "}"),
                  ConfigError);
  CHECK_THROWS_AS(density_from_json(R"({"re":[["a",0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],"im":)" + zeros + "}"),
                  ConfigError);
}

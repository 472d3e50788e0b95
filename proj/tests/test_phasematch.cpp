#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pcfpair/errors.hpp"
#include "pcfpair/phasematch.hpp"
#include "pcfpair/units.hpp"

using namespace pcfpair;

namespace {

const std::string kPresets = std::string(PCFPAIR_SOURCE_DIR) + "/data/presets";

// Independent script values for the shipped pcf-a coefficients.
constexpr double kGamma705 = 0.04456159792325948;
constexpr double kPcfaSignal = 597.000000;
constexpr double kPcfaIdler = 860.705521;

const FibreSpec& pcfa() {
  static const FibreSpec f = load_preset(kPresets + "/pcf-a.json");
  return f;
}

FibreSpec constant_fibre(double n) {
  std::vector<double> x, y;
  for (int k = 0; k < 12; ++k) {
    x.push_back(400.0 + 60.0 * k);
    y.push_back(n);
  }
  FibreSpec f{TabulatedModel(x, y), TabulatedModel(x, y)};
  f.validate();
  return f;
}

double energy_residual(const PhaseMatchPoint& p) { return std::abs(2.0 / p.lambda_p - 1.0 / p.lambda_s - 1.0 / p.lambda_i); }

}  // namespace

TEST_CASE("gamma") {
  FibreSpec f = pcfa();
  f.n2_m2_per_W = 2e-20;
  f.aeff_m2 = 4e-12;
  CHECK(gamma(f, 705.0) == doctest::Approx(0.0446).epsilon(0.0005 / 0.0446));
  CHECK(gamma(f, 705.0) == doctest::Approx(kGamma705).epsilon(1e-12));
  FibreSpec g = f;
  g.aeff_m2 *= 2.0;
  CHECK(gamma(g, 705.0) == doctest::Approx(gamma(f, 705.0) / 2.0).epsilon(1e-14));
  CHECK(gamma(f, 1410.0) == doctest::Approx(gamma(f, 705.0) / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(gamma(f, 0.0), DomainError);
}

TEST_CASE("idler from energy conservation") {
  CHECK(idler_from_energy(705.0, 597.0) == doctest::Approx(860.7).epsilon(0.05 / 860.7));
  CHECK(idler_from_energy(705.0, 705.0) == doctest::Approx(705.0).epsilon(1e-15));
  CHECK_THROWS_AS(idler_from_energy(705.0, 352.5), DomainError);
  CHECK_THROWS_AS(idler_from_energy(705.0, 352.5 - 1e-6), DomainError);
}

TEST_CASE("delta k") {
  const auto c = constant_fibre(1.45);
  CHECK(delta_k(c, Scheme::ss_ff, 705.0, 705.0, 705.0, 0.0) == 0.0);

  const double dk = delta_k(pcfa(), Scheme::ss_ff, 705.0, 597.0, idler_from_energy(705.0, 597.0), 0.0);
  CHECK(std::abs(dk) < 1e-3);

  const double shifted = delta_k(pcfa(), Scheme::ss_ff, 705.0, 597.0, idler_from_energy(705.0, 597.0), 100.0);
  CHECK(std::abs((shifted - dk) - (-2.0 * gamma(pcfa(), 705.0) * 100.0)) < 1e-6);

  CHECK_THROWS_AS(delta_k(pcfa(), Scheme::ss_ff, 705.0, 450.0, 1100.0, 0.0), RangeError);
}

TEST_CASE("scheme parsing and axis assignment") {
  CHECK(parse_scheme("ssff") == Scheme::ss_ff);
  CHECK(parse_scheme("ss->ff") == Scheme::ss_ff);
  CHECK(parse_scheme("ff→ss") == Scheme::ff_ss);
  CHECK(parse_scheme("FFFF") == Scheme::ff_ff);
  CHECK_THROWS_AS(parse_scheme("sf"), ConfigError);
  CHECK(&pump_axis(pcfa(), Scheme::ss_ff) == &pcfa().slow_axis);
  CHECK(&pair_axis(pcfa(), Scheme::ss_ff) == &pcfa().fast_axis);
  CHECK(&pump_axis(pcfa(), Scheme::ff_ss) == &pcfa().fast_axis);
  CHECK(&pair_axis(pcfa(), Scheme::ff_ss) == &pcfa().slow_axis);
}

TEST_CASE("solve phase matching at the pcf-a design point") {
  const auto pts = solve_phasematch(pcfa(), Scheme::ss_ff, 705.0, 0.0, std::pair{550.0, 700.0});
  REQUIRE(pts.size() == 1);
  CHECK(std::abs(pts[0].lambda_s - 597.0) <= 5.0);
  CHECK(std::abs(pts[0].lambda_i - 860.0) <= 10.0);
  CHECK(std::abs(pts[0].lambda_s - kPcfaSignal) < 1e-4);
  CHECK(std::abs(pts[0].lambda_i - kPcfaIdler) < 1e-4);
  CHECK(pts[0].lambda_s < pts[0].lambda_p);
  CHECK(pts[0].lambda_p < pts[0].lambda_i);

  CHECK(solve_phasematch(pcfa(), Scheme::ss_ff, 705.0, 0.0, std::pair{610.0, 700.0}).empty());
  CHECK_THROWS_AS(solve_phasematch(constant_fibre(1.45), Scheme::ss_ff, 705.0, 0.0), DegenerateContinuumError);
}

TEST_CASE("solutions satisfy the invariants and are scan-resolution independent") {
  for (auto scheme : {Scheme::ss_ss, Scheme::ff_ff, Scheme::ss_ff, Scheme::ff_ss}) {
    for (double lp : {690.0, 705.0, 730.0}) {
      const auto a = solve_phasematch(pcfa(), scheme, lp, 0.0, std::nullopt, 2000);
      const auto b = solve_phasematch(pcfa(), scheme, lp, 0.0, std::nullopt, 4000);
      CAPTURE(to_string(scheme));
      CAPTURE(lp);
      REQUIRE(a.size() == b.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(energy_residual(a[k]) < 1e-12);
        CHECK(std::abs(a[k].dk_residual) < 1e-3);
        CHECK(std::abs(a[k].lambda_s - b[k].lambda_s) < 0.01);
      }
    }
  }
}

TEST_CASE("phase-matching curve") {
  const auto curve = phasematch_curve(pcfa(), Scheme::ss_ff, 700.0, 740.0, 41, 0.0);
  REQUIRE(curve.size() == 41);
  for (const auto& s : curve) {
    REQUIRE(!s.points.empty());
    CHECK(s.points.front().lambda_s >= 590.0);
    CHECK(s.points.front().lambda_s <= 650.0);
    for (const auto& p : s.points) {
      CHECK(energy_residual(p) < 1e-12);
      CHECK(p.lambda_p == s.lambda_p);
    }
  }
  const auto single = phasematch_curve(pcfa(), Scheme::ss_ff, 705.0, 740.0, 1, 0.0);
  REQUIRE(single.size() == 1);
  CHECK(single[0].lambda_p == 705.0);
  CHECK(single[0].points.size() == solve_phasematch(pcfa(), Scheme::ss_ff, 705.0, 0.0).size());
}

TEST_CASE("zero-slope pump") {
  const double lps = zero_slope_pump(pcfa(), Scheme::ss_ff, 690.0, 720.0);
  CHECK(std::abs(lps - 705.0) <= 2.0);

  const auto pt = *primary_point(pcfa(), Scheme::ss_ff, lps);
  const auto bw = signal_bandwidth(pt, 0.4, bandwidth_nm_to_omega(3.0, lps));
  CHECK(bw.second_term < 1e-3 * bw.first_term);

  CHECK_THROWS_AS(zero_slope_pump(pcfa(), Scheme::ss_ff, 800.0, 900.0), BracketError);

  // Flat signal branch around λ_p*.
  for (double lp = lps - 5.0; lp <= lps + 5.0 + 1e-9; lp += 1.0) {
    const double h = 0.05;
    const double slope = (primary_point(pcfa(), Scheme::ss_ff, lp + h)->lambda_s -
                          primary_point(pcfa(), Scheme::ss_ff, lp - h)->lambda_s) / (2.0 * h);
    CAPTURE(lp);
    CHECK(std::abs(slope) < 0.05);
  }
}

TEST_CASE("signal bandwidth") {
  const double lps = zero_slope_pump(pcfa(), Scheme::ss_ff, 690.0, 720.0);
  const auto gvm = *primary_point(pcfa(), Scheme::ss_ff, lps);
  for (double pump_nm : {0.5, 1.0, 3.03, 5.0, 7.0}) {
    const auto bw = signal_bandwidth(gvm, 0.4, bandwidth_nm_to_omega(pump_nm, lps));
    CAPTURE(pump_nm);
    CHECK(std::abs(bw.dlambda_s_nm - 0.15) <= 0.02);
  }
  const auto p705 = *primary_point(pcfa(), Scheme::ss_ff, 705.0);
  CHECK(std::abs(signal_bandwidth(p705, 0.4, 0.0).dlambda_s_nm - 0.15) <= 0.02);

  PhaseMatchPoint toy = p705;
  toy.Ni = toy.Np;
  const auto b1 = signal_bandwidth(toy, 0.3, 1e12);
  const auto b2 = signal_bandwidth(toy, 0.6, 1e12);
  CHECK(b2.domega_s == doctest::Approx(b1.domega_s / 2.0).epsilon(1e-14));
  CHECK(signal_bandwidth(toy, 0.4, 0.0).domega_s == signal_bandwidth(toy, 0.4, 5e12).domega_s);

  // Exactly linear in the pump bandwidth.
  const double w1 = 1e12, w2 = 4e12;
  const auto s0 = signal_bandwidth(p705, 0.4, 0.0);
  const auto s1 = signal_bandwidth(p705, 0.4, w1);
  const auto s2 = signal_bandwidth(p705, 0.4, w2);
  const double slope = 2.0 * std::abs((p705.Ni - p705.Np) / (p705.Ns - p705.Ni));
  CHECK((s1.domega_s - s0.domega_s) / w1 == doctest::Approx(slope).epsilon(1e-9));
  CHECK((s2.domega_s - s1.domega_s) / (w2 - w1) == doctest::Approx(slope).epsilon(1e-9));

  PhaseMatchPoint degenerate = p705;
  degenerate.Ni = degenerate.Ns;
  CHECK_THROWS_AS(signal_bandwidth(degenerate, 0.4, 0.0), SingularityError);
  CHECK_THROWS_AS(signal_bandwidth(p705, 0.0, 0.0), DomainError);
}

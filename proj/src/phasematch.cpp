#include "pcfpair/phasematch.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "pcfpair/errors.hpp"
#include "pcfpair/units.hpp"

namespace pcfpair {

Scheme parse_scheme(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c == 's' || c == 'f' || c == 'S' || c == 'F') t += static_cast<char>(std::tolower(c));
  if (t == "ssss") return Scheme::ss_ss;
  if (t == "ffff") return Scheme::ff_ff;
  if (t == "ssff") return Scheme::ss_ff;
  if (t == "ffss") return Scheme::ff_ss;
  throw ConfigError("unknown scheme '" + text + "' (use ssss, ffff, ssff or ffss)");
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::ss_ss: return "ss->ss";
    case Scheme::ff_ff: return "ff->ff";
    case Scheme::ss_ff: return "ss->ff";
    case Scheme::ff_ss: return "ff->ss";
  }
  return "?";
}

const DispersionModel& pump_axis(const FibreSpec& f, Scheme s) {
  return (s == Scheme::ss_ss || s == Scheme::ss_ff) ? f.slow_axis : f.fast_axis;
}

const DispersionModel& pair_axis(const FibreSpec& f, Scheme s) {
  return (s == Scheme::ss_ss || s == Scheme::ff_ss) ? f.slow_axis : f.fast_axis;
}

double gamma(const FibreSpec& fibre, double lambda_p_nm) {
  if (!(lambda_p_nm > 0.0)) throw DomainError("pump wavelength must be positive");
  return 2.0 * kPi * fibre.n2_m2_per_W / (lambda_p_nm * 1e-9 * fibre.aeff_m2);
}

double idler_from_energy(double lambda_p_nm, double lambda_s_nm) {
  const double inv = 2.0 / lambda_p_nm - 1.0 / lambda_s_nm;
  if (!(inv > 0.0)) throw DomainError("signal too blue for this pump: no positive idler frequency");
  return 1.0 / inv;
}

double delta_k(const FibreSpec& fibre, Scheme scheme, double lambda_p, double lambda_s,
               double lambda_i, double pump_power) {
  const auto& pa = pump_axis(fibre, scheme);
  const auto& qa = pair_axis(fibre, scheme);
  const double np = phase_index(pa, lambda_p);
  const double ns = phase_index(qa, lambda_s);
  const double ni = phase_index(qa, lambda_i);
  const double k = 2.0 * kPi * (2.0 * np / lambda_p - ns / lambda_s - ni / lambda_i) * 1e9;
  return k - 2.0 * gamma(fibre, lambda_p) * pump_power;
}

std::pair<double, double> default_signal_window(const FibreSpec& fibre, double lambda_p) {
  const auto [lo, hi] = fibre.range_nm();
  double s_lo = lo;
  const double inv = 2.0 / lambda_p - 1.0 / hi;
  if (inv > 0.0) s_lo = std::max(s_lo, 1.0 / inv);
  return {s_lo * (1.0 + 1e-12), lambda_p - 0.5};
}

namespace {

PhaseMatchPoint make_point(const FibreSpec& fibre, Scheme scheme, double lp, double ls, double P) {
  PhaseMatchPoint pt;
  pt.lambda_p = lp;
  pt.lambda_s = ls;
  pt.lambda_i = idler_from_energy(lp, ls);
  pt.scheme = scheme;
  pt.pump_power = P;
  pt.dk_residual = delta_k(fibre, scheme, lp, ls, pt.lambda_i, P);
  pt.Np = group_index(pump_axis(fibre, scheme), lp);
  pt.Ns = group_index(pair_axis(fibre, scheme), ls);
  pt.Ni = group_index(pair_axis(fibre, scheme), pt.lambda_i);
  return pt;
}

}  // namespace

std::vector<PhaseMatchPoint> solve_phasematch(const FibreSpec& fibre, Scheme scheme, double lambda_p,
                                              double pump_power,
                                              std::optional<std::pair<double, double>> window,
                                              int samples) {
  const auto [w0, w1] = window ? *window : default_signal_window(fibre, lambda_p);
  std::vector<PhaseMatchPoint> out;
  if (!(w1 > w0) || samples < 2) return out;

  auto dk = [&](double ls) {
    return delta_k(fibre, scheme, lambda_p, ls, idler_from_energy(lambda_p, ls), pump_power);
  };

  std::vector<double> xs(samples), fs(samples);
  bool all_flat = true;
  for (int k = 0; k < samples; ++k) {
    xs[k] = w0 + (w1 - w0) * k / (samples - 1);
    fs[k] = dk(xs[k]);
    if (std::abs(fs[k]) > 1e-6) all_flat = false;
  }
  if (all_flat)
    throw DegenerateContinuumError("delta k vanishes across the whole window: every signal wavelength phase matches");

  for (int k = 0; k + 1 < samples; ++k) {
    double a = xs[k], b = xs[k + 1];
    double fa = fs[k], fb = fs[k + 1];
    if (fa == 0.0) {
      out.push_back(make_point(fibre, scheme, lambda_p, a, pump_power));
      continue;
    }
    if (fa * fb >= 0.0) continue;
    double m = 0.5 * (a + b), fm = dk(m);
    for (int it = 0; it < 200 && std::abs(fm) >= 1e-5 && b - a > 1e-13; ++it) {
      if ((fm < 0.0) == (fa < 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
      m = 0.5 * (a + b);
      fm = dk(m);
    }
    out.push_back(make_point(fibre, scheme, lambda_p, m, pump_power));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.lambda_s < y.lambda_s; });
  return out;
}

std::vector<CurveSample> phasematch_curve(const FibreSpec& fibre, Scheme scheme, double lambda_p_lo,
                                          double lambda_p_hi, int steps, double pump_power,
                                          std::optional<std::pair<double, double>> window) {
  if (steps < 1) throw ConfigError("curve needs at least one step");
  std::vector<CurveSample> curve;
  for (int k = 0; k < steps; ++k) {
    const double lp = steps == 1 ? lambda_p_lo : lambda_p_lo + (lambda_p_hi - lambda_p_lo) * k / (steps - 1);
    curve.push_back({lp, solve_phasematch(fibre, scheme, lp, pump_power, window)});
  }
  return curve;
}

std::optional<PhaseMatchPoint> primary_point(const FibreSpec& fibre, Scheme scheme, double lambda_p,
                                             double pump_power) {
  auto pts = solve_phasematch(fibre, scheme, lambda_p, pump_power);
  if (pts.empty()) return std::nullopt;
  return pts.front();
}

double zero_slope_pump(const FibreSpec& fibre, Scheme scheme, double lo_nm, double hi_nm) {
  auto g = [&](double lp) -> std::optional<double> {
    try {
      const auto pt = primary_point(fibre, scheme, lp);
      if (!pt) return std::nullopt;
      return pt->Np - pt->Ni;
    } catch (const RangeError&) {
      return std::nullopt;
    }
  };
  constexpr int kScan = 40;
  double a = lo_nm;
  auto fa = g(a);
  for (int k = 1; k <= kScan; ++k) {
    const double b = lo_nm + (hi_nm - lo_nm) * k / kScan;
    const auto fb = g(b);
    if (fa && fb && (*fa) * (*fb) <= 0.0) {
      double x0 = a, x1 = b, f0 = *fa;
      while (x1 - x0 > 1e-6) {
        const double m = 0.5 * (x0 + x1);
        const auto fm = g(m);
        if (!fm) throw BracketError("phase-matching branch lost inside the zero-slope bracket");
        if ((*fm < 0.0) == (f0 < 0.0)) {
          x0 = m;
          f0 = *fm;
        } else {
          x1 = m;
        }
      }
      return 0.5 * (x0 + x1);
    }
    a = b;
    fa = fb;
  }
  throw BracketError("pump and idler group indices do not cross inside the bracket");
}

SignalBandwidth signal_bandwidth(const PhaseMatchPoint& point, double length_m, double domega_p) {
  if (!(length_m > 0.0)) throw DomainError("fibre length must be positive");
  const double dsi = point.Ns - point.Ni;
  if (dsi == 0.0) throw SingularityError("signal and idler group indices are equal");
  SignalBandwidth r;
  r.first_term = 2.0 * kPi * kSpeedOfLight / (std::abs(dsi) * length_m);
  r.second_term = 2.0 * std::abs((point.Ni - point.Np) / dsi) * domega_p;
  r.domega_s = r.first_term + r.second_term;
  r.dlambda_s_nm = bandwidth_omega_to_nm(r.domega_s, point.lambda_s);
  return r;
}

}  // namespace pcfpair

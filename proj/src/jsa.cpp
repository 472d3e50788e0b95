#include "pcfpair/jsa.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pcfpair/errors.hpp"
#include "pcfpair/units.hpp"

namespace pcfpair {

namespace {

// sinc²(x) = 1/2
constexpr double kSincHalfPoint = 1.3915573782515103;

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

double gaussian_like_sinc(double x) {
  const double a = std::log(2.0) / (2.0 * kSincHalfPoint * kSincHalfPoint);
  return std::exp(-a * x * x);
}

Eigen::VectorXd uniform_axis(double center, double half_span, int n) {
  return Eigen::VectorXd::LinSpaced(n, center - half_span, center + half_span);
}

// Smallest w with erfc(w) <= tail.
double erfc_inverse(double tail) {
  double lo = 0.0, hi = 10.0;
  for (int i = 0; i < 100; ++i) {
    const double m = 0.5 * (lo + hi);
    (std::erfc(m) > tail ? lo : hi) = m;
  }
  return hi;
}

}  // namespace

double FilterSpec::amplitude(double lambda_nm) const {
  const double u = 2.0 * (lambda_nm - center_nm) / fwhm_nm;  // ±1 at the half-power points
  switch (shape) {
    case FilterShape::tophat: return std::abs(u) <= 1.0 ? 1.0 : 0.0;
    case FilterShape::gaussian: return std::sqrt(std::exp(-std::log(2.0) * u * u));
    case FilterShape::supergaussian:
      return std::sqrt(std::exp(-std::log(2.0) * std::pow(u * u, static_cast<double>(order))));
  }
  return 0.0;
}

std::string FilterSpec::describe() const {
  std::ostringstream os;
  os << (shape == FilterShape::tophat ? "tophat" : shape == FilterShape::gaussian ? "gaussian" : "supergaussian");
  if (shape == FilterShape::supergaussian) os << "(" << order << ")";
  os << " center " << center_nm << " nm, FWHM " << fwhm_nm << " nm";
  return os.str();
}

FilterShape parse_filter_shape(const std::string& text) {
  if (text == "tophat") return FilterShape::tophat;
  if (text == "gaussian") return FilterShape::gaussian;
  if (text == "supergaussian") return FilterShape::supergaussian;
  throw ConfigError("unknown filter shape '" + text + "'");
}

double JsaGrid::d_omega_s() const { return (omega_s(omega_s.size() - 1) - omega_s(0)) / (omega_s.size() - 1); }
double JsaGrid::d_omega_i() const { return (omega_i(omega_i.size() - 1) - omega_i(0)) / (omega_i.size() - 1); }
double JsaGrid::norm() const { return F.squaredNorm() * d_omega_s() * d_omega_i(); }

double pump_fwhm_omega(const PumpSpec& pump) {
  if (!(pump.fwhm_nm > 0.0)) throw DomainError("pump bandwidth must be positive");
  return bandwidth_nm_to_omega(pump.fwhm_nm, pump.lambda_p);
}

double pump_sigma(const PumpSpec& pump) {
  if (pump.shape != PumpShape::gaussian) throw NotApplicableError("sigma is defined for gaussian pumps only");
  return 2.0 * std::sqrt(std::log(2.0)) / pump_fwhm_omega(pump);
}

std::complex<double> pump_amplitude(const PumpSpec& pump, double domega_sum) {
  if (pump.shape == PumpShape::tophat)
    return std::abs(domega_sum) <= 0.5 * pump_fwhm_omega(pump) ? 1.0 : 0.0;
  const double s = pump_sigma(pump);
  return std::exp(-domega_sum * domega_sum * s * s / 2.0);
}

std::complex<double> phasematch_amplitude(const PhaseMatchPoint& point, double length_m,
                                          double domega_s, double domega_i) {
  const double dk = (point.Ns - point.Np) / kSpeedOfLight * domega_s +
                    (point.Ni - point.Np) / kSpeedOfLight * domega_i;
  const double x = dk * length_m / 2.0;
  return std::polar(sinc(x), x);
}

double analytic_total_intensity(const PhaseMatchPoint& point, const PumpSpec& pump, double length_m,
                                bool gaussian_phasematch) {
  const double A = (point.Ns - point.Np) * length_m / (2.0 * kSpeedOfLight);
  const double B = (point.Ni - point.Np) * length_m / (2.0 * kSpeedOfLight);
  if (A == B) throw SpanError("signal and idler group indices coincide; the JSA is not bounded");
  double pm = kPi;  // ∫ sinc²
  if (gaussian_phasematch) {
    const double a = std::log(2.0) / (2.0 * kSincHalfPoint * kSincHalfPoint);
    pm = std::sqrt(kPi / (2.0 * a));
  }
  const double pumpint = pump.shape == PumpShape::gaussian ? std::sqrt(kPi) / pump_sigma(pump)
                                                           : pump_fwhm_omega(pump);
  return pm * pumpint / std::abs(A - B);
}

JsaGrid build_jsa(const FibreSpec& fibre, const PumpSpec& pump, const PhaseMatchPoint& point,
                  const GridSpec& grid) {
  if (grid.n_s < 64 || grid.n_i < 64) throw ConfigError("JSA grid needs at least 64 points per axis");
  if (!(grid.capture > 0.0 && grid.capture < 1.0)) throw ConfigError("capture must lie in (0, 1)");
  const double L = fibre.length_m;
  const double A = (point.Ns - point.Np) * L / (2.0 * kSpeedOfLight);
  const double B = (point.Ni - point.Np) * L / (2.0 * kSpeedOfLight);
  if (A == B) throw SpanError("signal and idler group indices coincide; the JSA is not bounded");

  double hx = grid.half_span_s, hy = grid.half_span_i;
  if (hx <= 0.0 || hy <= 0.0) {
    // Rotated frame z = A x + B y (phase matching), w = x + y (pump).
    const double Z = 1.0 / (kPi * (1.0 - grid.capture));
    const double W = pump.shape == PumpShape::gaussian
                         ? erfc_inverse((1.0 - grid.capture) / 2.0) / pump_sigma(pump)
                         : 0.5 * pump_fwhm_omega(pump);
    const double det = std::abs(A - B);
    if (hx <= 0.0) hx = (Z + std::abs(B) * W) / det;
    if (hy <= 0.0) hy = (std::abs(A) * W + Z) / det;
  }

  JsaGrid g;
  g.center = point;
  const double wp = nm_to_omega(point.lambda_p);
  const double ws0 = nm_to_omega(point.lambda_s);
  const double wi0 = 2.0 * wp - ws0;
  g.omega_s = uniform_axis(ws0, hx, grid.n_s);
  g.omega_i = uniform_axis(wi0, hy, grid.n_i);
  g.F.resize(grid.n_s, grid.n_i);

  const auto& pa = pump_axis(fibre, point.scheme);
  const auto& qa = pair_axis(fibre, point.scheme);
  auto k_of = [](const DispersionModel& m, double w) {
    return phase_index(m, omega_to_nm(w)) * w / kSpeedOfLight;
  };

  std::vector<double> ks(grid.n_s), ki(grid.n_i);
  double m0 = 0.0;
  if (grid.model == PhaseModel::exact) {
    for (int a = 0; a < grid.n_s; ++a) ks[a] = k_of(qa, g.omega_s(a));
    for (int b = 0; b < grid.n_i; ++b) ki[b] = k_of(qa, g.omega_i(b));
    m0 = -(2.0 * k_of(pa, wp) - k_of(qa, ws0) - k_of(qa, wi0));
  }

  for (int a = 0; a < grid.n_s; ++a) {
    const double x = g.omega_s(a) - ws0;
    for (int b = 0; b < grid.n_i; ++b) {
      const double y = g.omega_i(b) - wi0;
      double arg;
      if (grid.model == PhaseModel::exact) {
        const double m = -(2.0 * k_of(pa, wp + 0.5 * (x + y)) - ks[a] - ki[b]);
        arg = (m - m0) * L / 2.0;
      } else {
        arg = A * x + B * y;
      }
      const double env = grid.gaussian_phasematch ? gaussian_like_sinc(arg) : sinc(arg);
      g.F(a, b) = pump_amplitude(pump, x + y) * std::polar(env, arg);
    }
  }

  const double total = g.norm();
  const double expected = analytic_total_intensity(point, pump, L, grid.gaussian_phasematch);
  if (!(total > 0.0) || !std::isfinite(total)) throw SpanError("JSA grid holds no intensity");
  if (total / expected < 0.99) {
    std::ostringstream os;
    os << "grid captures only " << 100.0 * total / expected
       << "% of the joint spectral intensity; widen the span or raise the capture target";
    throw SpanError(os.str());
  }
  g.F /= std::sqrt(total);
  g.normalized = true;
  return g;
}

JsaGrid apply_filters(const JsaGrid& jsa, const std::optional<FilterSpec>& filter_s,
                      const std::optional<FilterSpec>& filter_i) {
  JsaGrid out = jsa;
  if (filter_s) {
    for (Eigen::Index a = 0; a < out.F.rows(); ++a)
      out.F.row(a) *= filter_s->amplitude(omega_to_nm(out.omega_s(a)));
    out.filters.push_back("signal: " + filter_s->describe());
  }
  if (filter_i) {
    for (Eigen::Index b = 0; b < out.F.cols(); ++b)
      out.F.col(b) *= filter_i->amplitude(omega_to_nm(out.omega_i(b)));
    out.filters.push_back("idler: " + filter_i->describe());
  }
  const double total = out.norm();
  if (!(total > 0.0)) throw NormalizationError("filters block the whole grid: JSA is identically zero");
  out.F /= std::sqrt(total);
  out.normalized = true;
  return out;
}

double fwhm(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::Index n = y.size();
  Eigen::Index imax = 0;
  const double peak = y.maxCoeff(&imax);
  const double half = peak / 2.0;
  Eigen::Index i0 = 0, i1 = n - 1;
  while (i0 < n && y(i0) < half) ++i0;
  while (i1 >= 0 && y(i1) < half) --i1;
  if (!(peak > 0.0) || i0 == 0 || i1 == n - 1)
    throw DataError("peak does not fall below half maximum inside the grid");
  // Half-maximum crossing between samples `out` and `in` on the cubic through four neighbours.
  auto cross = [&](Eigen::Index out, Eigen::Index in) {
    const Eigen::Index lo = std::min(out, in);
    const Eigen::Index s = std::clamp<Eigen::Index>(lo - 1, 0, n - 4);
    auto p = [&](double t) {
      double acc = 0.0;
      for (Eigen::Index j = s; j < s + 4; ++j) {
        double w = y(j);
        for (Eigen::Index k = s; k < s + 4; ++k)
          if (k != j) w *= (t - x(k)) / (x(j) - x(k));
        acc += w;
      }
      return acc - half;
    };
    double a = x(out), b = x(in);
    double fa = p(a);
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (a + b);
      const double fm = p(m);
      if ((fm < 0.0) == (fa < 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  };
  return std::abs(cross(i1 + 1, i1) - cross(i0 - 1, i0));
}

Marginals jsi_and_marginals(const JsaGrid& jsa) {
  if (!jsa.normalized) throw NormalizationError("JSA grid is not normalised");
  Marginals m;
  m.jsi = jsa.F.cwiseAbs2();
  m.signal = m.jsi.rowwise().sum() * jsa.d_omega_i();
  m.idler = m.jsi.colwise().sum().transpose() * jsa.d_omega_s();
  m.signal_fwhm_omega = fwhm(jsa.omega_s, m.signal);
  m.idler_fwhm_omega = fwhm(jsa.omega_i, m.idler);
  m.signal_fwhm_nm = bandwidth_omega_to_nm(m.signal_fwhm_omega, jsa.center.lambda_s);
  m.idler_fwhm_nm = bandwidth_omega_to_nm(m.idler_fwhm_omega, jsa.center.lambda_i);
  return m;
}

}  // namespace pcfpair

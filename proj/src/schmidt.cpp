#include "pcfpair/schmidt.hpp"

#include <algorithm>
#include <cmath>

#include "pcfpair/errors.hpp"
#include "pcfpair/optimize.hpp"

namespace pcfpair {

namespace {

void require_normalized(const JsaGrid& jsa) {
  if (!jsa.normalized || std::abs(jsa.norm() - 1.0) > 1e-9)
    throw NormalizationError("JSA must be normalised before Schmidt decomposition");
}

Eigen::MatrixXcd weighted(const JsaGrid& jsa) {
  return jsa.F * std::sqrt(jsa.d_omega_s() * jsa.d_omega_i());
}

bool same_axis(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) return false;
  const double tol = 1e-9 * std::abs(x(1) - x(0));
  return ((x - y).cwiseAbs().maxCoeff() <= tol);
}

// Linear interpolation of the rows of `src` (sampled on src_axis) onto `axis`; zero outside.
Eigen::MatrixXcd resample_rows(const Eigen::MatrixXcd& src, const Eigen::VectorXd& src_axis,
                               const Eigen::VectorXd& axis) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(axis.size(), src.cols());
  const double x0 = src_axis(0);
  const double dx = (src_axis(src_axis.size() - 1) - x0) / (src_axis.size() - 1);
  for (Eigen::Index r = 0; r < axis.size(); ++r) {
    const double t = (axis(r) - x0) / dx;
    if (t < 0.0 || t > static_cast<double>(src_axis.size() - 1)) continue;
    const auto j = std::min<Eigen::Index>(static_cast<Eigen::Index>(t), src_axis.size() - 2);
    const double u = t - static_cast<double>(j);
    out.row(r) = (1.0 - u) * src.row(j) + u * src.row(j + 1);
  }
  return out;
}

}  // namespace

SchmidtDecomposition schmidt_decompose(const JsaGrid& jsa, bool with_modes) {
  require_normalized(jsa);
  const Eigen::MatrixXcd M = weighted(jsa);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M, with_modes ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0);
  const Eigen::VectorXd s = svd.singularValues();
  const double total = s.squaredNorm();

  Eigen::Index keep = 0;
  while (keep < s.size() && s(keep) * s(keep) / total >= 1e-12) ++keep;

  SchmidtDecomposition d;
  d.lambdas = s.head(keep).cwiseAbs2() / total;
  d.K = 1.0 / d.lambdas.squaredNorm();
  if (with_modes) {
    d.f = svd.matrixU().leftCols(keep) / std::sqrt(jsa.d_omega_s());
    d.g = svd.matrixV().leftCols(keep).conjugate() / std::sqrt(jsa.d_omega_i());
  }
  return d;
}

double schmidt_number(const JsaGrid& jsa) { return schmidt_decompose(jsa, false).K; }

double reduced_state_overlap(const JsaGrid& a, const JsaGrid& b, double tau_s) {
  require_normalized(a);
  require_normalized(b);
  Eigen::MatrixXcd A = weighted(a);
  Eigen::MatrixXcd B = weighted(b);
  Eigen::VectorXd axis = a.omega_s;

  if (!same_axis(a.omega_s, b.omega_s)) {
    const double da = a.d_omega_s(), db = b.d_omega_s();
    if (std::max(da, db) > 4.0 * std::min(da, db))
      throw ResampleError("signal grids differ in spacing by more than 4x; rebuild on comparable grids");
    if (da <= db) {
      B = resample_rows(b.F, b.omega_s, a.omega_s) * std::sqrt(da * b.d_omega_i());
    } else {
      axis = b.omega_s;
      A = resample_rows(a.F, a.omega_s, b.omega_s) * std::sqrt(db * a.d_omega_i());
    }
  }

  const double ref = axis(axis.size() / 2);
  Eigen::VectorXcd phase(axis.size());
  for (Eigen::Index k = 0; k < axis.size(); ++k) phase(k) = std::polar(1.0, (axis(k) - ref) * tau_s);
  const Eigen::MatrixXcd cross = A.adjoint() * (phase.asDiagonal() * B);
  return std::clamp(cross.squaredNorm(), 0.0, 1.0);
}

double hom_visibility(const JsaGrid& a, const JsaGrid& b) { return reduced_state_overlap(a, b, 0.0); }

std::vector<DipSample> hom_dip_profile(const JsaGrid& a, const JsaGrid& b,
                                       const std::vector<double>& delays_s) {
  std::vector<DipSample> out;
  out.reserve(delays_s.size());
  for (double t : delays_s) out.push_back({t, 1.0 - reduced_state_overlap(a, b, t)});
  return out;
}

double visibility_to_schmidt(double V) {
  if (!(V > 0.0 && V <= 1.0)) throw DomainError("visibility must lie in (0, 1]");
  return 1.0 / V;
}

double schmidt_to_visibility(double K) {
  if (!(K >= 1.0)) throw DomainError("Schmidt number must be >= 1");
  return 1.0 / K;
}

FilterSetting parse_filter_setting(const std::string& text, FilterShape shape) {
  FilterSetting s;
  s.shape = shape;
  try {
    std::size_t used = 0;
    if (!text.empty() && (text.back() == 'x' || text.back() == 'X')) {
      s.relative = std::stod(text.substr(0, text.size() - 1), &used);
      if (used != text.size() - 1 || !(s.relative > 0.0)) throw ConfigError("");
    } else {
      s.fwhm_nm = std::stod(text, &used);
      if (used != text.size() || !(s.fwhm_nm > 0.0)) throw ConfigError("");
    }
  } catch (const std::exception&) {
    throw ConfigError("filter width '" + text + "' must be a positive number of nm or a multiple like 10x");
  }
  return s;
}

JsaGrid purity_jsa(const FibreSpec& fibre, const PhaseMatchPoint& point, double length_m,
                   double pump_fwhm_nm, const PurityOptions& opts) {
  const PumpSpec pump{point.lambda_p, pump_fwhm_nm, opts.pump_shape, point.pump_power};
  JsaGrid jsa = build_jsa(fibre.with_length(length_m), pump, point, opts.grid);
  if (!opts.filter_s && !opts.filter_i) return jsa;

  std::optional<Marginals> m;
  auto resolve = [&](const std::optional<FilterSetting>& fs, bool signal) -> std::optional<FilterSpec> {
    if (!fs) return std::nullopt;
    FilterSpec spec;
    spec.shape = fs->shape;
    spec.order = fs->order;
    spec.center_nm = signal ? point.lambda_s : point.lambda_i;
    spec.fwhm_nm = fs->fwhm_nm;
    if (fs->relative > 0.0) {
      if (!m) m = jsi_and_marginals(jsa);
      spec.fwhm_nm = fs->relative * (signal ? m->signal_fwhm_nm : m->idler_fwhm_nm);
    }
    return spec;
  };
  const auto s = resolve(opts.filter_s, true);
  const auto i = resolve(opts.filter_i, false);
  return apply_filters(jsa, s, i);
}

double schmidt_at(const FibreSpec& fibre, const PhaseMatchPoint& point, double length_m,
                  double pump_fwhm_nm, const PurityOptions& opts) {
  return schmidt_number(purity_jsa(fibre, point, length_m, pump_fwhm_nm, opts));
}

PurityScanResult optimize_pump_bandwidth(const FibreSpec& fibre, const PhaseMatchPoint& point,
                                         double length_m, std::pair<double, double> bw_range_nm,
                                         const PurityOptions& opts) {
  const auto [lo, hi] = bw_range_nm;
  if (!(lo > 0.0) || !(hi >= lo)) throw ConfigError("pump bandwidth range must be positive and ordered");
  if (opts.samples < 1) throw ConfigError("scan needs at least one sample");
  const int n = (hi == lo) ? 1 : opts.samples;

  PurityScanResult r;
  for (int k = 0; k < n; ++k) {
    const double bw = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
    r.axis.push_back(bw);
    r.K.push_back(schmidt_at(fibre, point, length_m, bw, opts));
  }
  const auto best = static_cast<std::size_t>(std::min_element(r.K.begin(), r.K.end()) - r.K.begin());
  r.argmin = r.axis[best];
  r.K_min = r.K[best];
  r.boundary = (best == 0 || best + 1 == r.axis.size());
  if (r.boundary) return r;

  const auto refined = golden_section_minimize(
      [&](double logbw) { return schmidt_at(fibre, point, length_m, std::exp(logbw), opts); },
      std::log(r.axis[best - 1]), std::log(r.axis[best + 1]), 1e-3);
  if (refined.f < r.K_min) {
    r.K_min = refined.f;
    r.argmin = std::exp(refined.x);
  }
  return r;
}

LengthScan scan_length(const FibreSpec& fibre, const PhaseMatchPoint& point,
                       const std::vector<double>& lengths, std::pair<double, double> bw_range_nm,
                       const PurityOptions& opts) {
  LengthScan out;
  for (double L : lengths) {
    if (!(L > 0.0)) throw ConfigError("fibre lengths must be positive");
    const auto r = optimize_pump_bandwidth(fibre, point, L, bw_range_nm, opts);
    out.rows.push_back({L, r.K_min, r.argmin, r.boundary});
  }
  for (std::size_t k = 1; k < out.rows.size(); ++k) {
    if (!(out.rows[k].K_min < out.rows[k - 1].K_min)) out.K_strictly_decreasing = false;
    if (!(out.rows[k].bw_opt_nm < out.rows[k - 1].bw_opt_nm)) out.bw_strictly_decreasing = false;
  }
  return out;
}

}  // namespace pcfpair

#include "pcfpair/tomography.hpp"

#include <cmath>
#include <random>

#include "pcfpair/errors.hpp"
#include "pcfpair/optimize.hpp"
#include "pcfpair/units.hpp"

namespace pcfpair {

namespace {

using cd = std::complex<double>;
const cd I(0.0, 1.0);

Eigen::Matrix2cd rotation(double t) {
  Eigen::Matrix2cd r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

Eigen::Vector4cd kron(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
  return Eigen::Vector4cd(a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1));
}

Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd m;
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -I, I, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

double normalization(const TomographyRecord& record) {
  if (record.counts.size() < 4) throw DataError("record needs at least the four H/V settings");
  const double n = record.counts[0] + record.counts[1] + record.counts[2] + record.counts[3];
  if (!(n > 0.0)) throw DataError("no counts in the nu = 1..4 settings: cannot normalise");
  return n;
}

// 16 real parameters -> lower-triangular T.
Eigen::Matrix4cd t_from_params(const std::vector<double>& t) {
  Eigen::Matrix4cd T = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 4; ++k) T(k, k) = t[k];
  int idx = 4;
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < r; ++c, idx += 2) T(r, c) = cd(t[idx], t[idx + 1]);
  return T;
}

std::vector<double> params_from_t(const Eigen::Matrix4cd& T) {
  std::vector<double> t(16);
  for (int k = 0; k < 4; ++k) t[k] = T(k, k).real();
  int idx = 4;
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < r; ++c, idx += 2) {
      t[idx] = T(r, c).real();
      t[idx + 1] = T(r, c).imag();
    }
  return t;
}

DensityMatrix4 rho_from_t(const Eigen::Matrix4cd& T) {
  const Eigen::Matrix4cd m = T.adjoint() * T;
  return m / m.trace().real();
}

// Lower-triangular T with T†T = ρ (reverse-order Cholesky).
Eigen::Matrix4cd t_from_rho(const DensityMatrix4& rho) {
  Eigen::Matrix4cd P = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 4; ++k) P(k, 3 - k) = 1.0;
  Eigen::LLT<Eigen::Matrix4cd> llt(P * rho * P);
  if (llt.info() != Eigen::Success) throw NumericError("Cholesky factorisation of the initial state failed");
  const Eigen::Matrix4cd L = llt.matrixL();
  return (P * L * P).adjoint();
}

}  // namespace

Eigen::Matrix2cd waveplate_jones(Plate kind, double theta_deg) {
  const double t = theta_deg * kPi / 180.0;
  const double retard = kind == Plate::HWP ? kPi : kPi / 2.0;
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = 1.0;
  d(1, 1) = std::polar(1.0, -retard);
  return rotation(-t) * d * rotation(t);
}

const std::array<MeasurementSetting, 16>& canonical_settings() {
  static const std::array<MeasurementSetting, 16> table = {{
      {1, 0, 0, 0, 0, "HH"},
      {2, 0, 0, 45, 0, "HV"},
      {3, 45, 0, 45, 0, "VV"},
      {4, 45, 0, 0, 0, "VH"},
      {5, 22.5, 0, 0, 0, "RH"},
      {6, 22.5, 0, 45, 0, "RV"},
      {7, -22.5, -45, 45, 0, "DV"},
      {8, -22.5, -45, 0, 0, "DH"},
      {9, -22.5, -45, 22.5, 0, "DR"},
      {10, -22.5, -45, -22.5, -45, "DD"},
      {11, 22.5, 0, -22.5, -45, "RD"},
      {12, 0, 0, -22.5, -45, "HD"},
      {13, 45, 0, -22.5, -45, "VD"},
      {14, 45, 0, 22.5, 90, "VL"},
      {15, 0, 0, 22.5, 90, "HL"},
      {16, 22.5, 0, 22.5, 90, "RL"},
  }};
  return table;
}

Eigen::Vector2cd analysed_state(double hwp_deg, double qwp_deg) {
  const Eigen::Matrix2cd U = waveplate_jones(Plate::HWP, hwp_deg) * waveplate_jones(Plate::QWP, qwp_deg);
  return U.adjoint() * Eigen::Vector2cd(1.0, 0.0);
}

Eigen::Vector2cd named_state(char label) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (label) {
    case 'H': return {1.0, 0.0};
    case 'V': return {0.0, 1.0};
    case 'D': return {r, r};
    case 'A': return {r, -r};
    case 'R': return {cd(r), -I * r};
    case 'L': return {cd(r), I * r};
  }
  throw ConfigError(std::string("unknown polarization label '") + label + "'");
}

Eigen::Matrix4cd setting_to_projector(const MeasurementSetting& s) {
  const Eigen::Vector4cd psi = kron(analysed_state(s.hwp_s, s.qwp_s), analysed_state(s.hwp_i, s.qwp_i));
  return psi * psi.adjoint();
}

Eigen::Vector4cd phi_plus() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r, 0.0, 0.0, r};
}

DensityMatrix4 sagnac_state(const SagnacParams& p) {
  if (std::abs(p.alpha * p.alpha + p.beta * p.beta - 1.0) > 1e-12)
    throw DomainError("Sagnac amplitudes must satisfy alpha^2 + beta^2 = 1");
  const Eigen::Vector4cd psi(p.alpha, 0.0, 0.0, p.beta * std::polar(1.0, 2.0 * p.phi));
  return psi * psi.adjoint();
}

double coincidence_probability(const DensityMatrix4& rho, const MeasurementSetting& setting) {
  return (rho * setting_to_projector(setting)).trace().real();
}

std::vector<FringeSample> fringe_scan(const DensityMatrix4& rho, FringeBasis basis,
                                      const std::vector<double>& signal_hwp_deg) {
  const Eigen::Matrix2cd none = Eigen::Matrix2cd::Identity();
  const double idler_hwp = basis == FringeBasis::HV ? 0.0 : -22.5;
  const Eigen::Vector2cd idler = waveplate_jones(Plate::HWP, idler_hwp).adjoint() * Eigen::Vector2cd(1.0, 0.0);
  std::vector<FringeSample> out;
  for (double th : signal_hwp_deg) {
    const Eigen::Vector2cd sig = (waveplate_jones(Plate::HWP, th) * none).adjoint() * Eigen::Vector2cd(1.0, 0.0);
    const Eigen::Vector4cd psi = kron(sig, idler);
    out.push_back({th, (psi.adjoint() * rho * psi)(0, 0).real()});
  }
  return out;
}

VisibilityFit visibility(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) throw DataError("visibility needs at least two samples");
  VisibilityFit fit;
  auto raw = [&] {
    double mx = samples[0].second, mn = samples[0].second;
    for (const auto& s : samples) mx = std::max(mx, s.second), mn = std::min(mn, s.second);
    fit.raw_extrema = true;
    fit.offset = 0.5 * (mx + mn);
    fit.amplitude = 0.5 * (mx - mn);
    fit.visibility = mx + mn > 0.0 ? (mx - mn) / (mx + mn) : 0.0;
    return fit;
  };
  if (samples.size() < 3) return raw();

  Eigen::MatrixXd A(samples.size(), 3);
  Eigen::VectorXd y(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double t = 4.0 * samples[k].first * kPi / 180.0;
    A(k, 0) = 1.0;
    A(k, 1) = std::cos(t);
    A(k, 2) = std::sin(t);
    y(k) = samples[k].second;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < 3) return raw();
  const Eigen::Vector3d c = qr.solve(y);
  if (!(c(0) > 0.0)) return raw();
  fit.offset = c(0);
  fit.amplitude = std::hypot(c(1), c(2));
  fit.visibility = std::min(1.0, fit.amplitude / fit.offset);
  fit.residual_rms = std::sqrt((A * c - y).squaredNorm() / static_cast<double>(samples.size()));
  return fit;
}

TomographyRecord expected_counts(const DensityMatrix4& rho, double n_pairs,
                                 const std::vector<MeasurementSetting>& settings) {
  TomographyRecord r;
  r.settings = settings;
  for (const auto& s : settings) r.counts.push_back(n_pairs * std::max(0.0, coincidence_probability(rho, s)));
  return r;
}

TomographyRecord simulate_counts(const DensityMatrix4& rho, const std::vector<MeasurementSetting>& settings,
                                 double n_pairs, std::uint64_t seed) {
  if (!(n_pairs > 0.0)) throw ConfigError("pair number per setting must be positive");
  std::mt19937_64 rng(seed);
  TomographyRecord r;
  r.settings = settings;
  for (const auto& s : settings) {
    const double mean = n_pairs * std::max(0.0, coincidence_probability(rho, s));
    if (mean <= 0.0) {
      r.counts.push_back(0.0);
      continue;
    }
    std::poisson_distribution<long long> pd(mean);
    r.counts.push_back(static_cast<double>(pd(rng)));
  }
  return r;
}

Eigen::Matrix4cd linear_reconstruct(const TomographyRecord& record) {
  if (record.settings.size() != 16 || record.counts.size() != 16)
    throw DataError("linear reconstruction needs exactly 16 settings");
  const double N = normalization(record);

  std::array<Eigen::Matrix4cd, 16> gamma;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) gamma[4 * a + b] = kron(pauli(a), pauli(b)) / 4.0;

  Eigen::Matrix<double, 16, 16> M;
  Eigen::Matrix<double, 16, 1> p;
  for (int nu = 0; nu < 16; ++nu) {
    const Eigen::Matrix4cd proj = setting_to_projector(record.settings[nu]);
    for (int k = 0; k < 16; ++k) M(nu, k) = (gamma[k] * proj).trace().real();
    p(nu) = record.counts[nu] / N;
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 16, 16>> lu(M);
  if (lu.rank() < 16) throw DataError("settings are not informationally complete");
  const Eigen::Matrix<double, 16, 1> r = lu.solve(p);
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 16; ++k) rho += r(k) * gamma[k];
  return 0.5 * (rho + rho.adjoint());
}

DensityMatrix4 project_to_physical(const Eigen::Matrix4cd& rho) {
  const Eigen::Matrix4cd h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
  if (!(ev.sum() > 0.0)) throw DataError("matrix has no positive eigenvalues");
  Eigen::Matrix4cd out = es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
  out /= ev.sum();
  return 0.5 * (out + out.adjoint());
}

double min_eigenvalue(const Eigen::Matrix4cd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double trace_distance(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
  const Eigen::Matrix4cd d = a - b;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double negative_log_likelihood(const DensityMatrix4& rho, const TomographyRecord& record, Likelihood kind) {
  const double N = normalization(record);
  double nll = 0.0;
  for (std::size_t k = 0; k < record.settings.size(); ++k) {
    const double mean = N * std::max(coincidence_probability(rho, record.settings[k]), 1e-300);
    const double n = record.counts[k];
    if (kind == Likelihood::poisson) {
      nll += mean - n + (n > 0.0 ? n * std::log(n / mean) : 0.0);
    } else {
      nll += (mean - n) * (mean - n) / (2.0 * std::max(mean, 1.0));
    }
  }
  return nll;
}

MleResult mle_reconstruct(const TomographyRecord& record, const MleOptions& opts) {
  if (record.settings.size() != record.counts.size() || record.settings.empty())
    throw DataError("record settings and counts differ in length");
  for (double c : record.counts)
    if (!(c >= 0.0) || !std::isfinite(c)) throw DataError("counts must be finite and non-negative");
  const double N = normalization(record);

  std::vector<Eigen::Matrix4cd> proj;
  for (const auto& s : record.settings) proj.push_back(setting_to_projector(s));

  int total_evals = 0;
  auto objective = [&](const std::vector<double>& t) {
    ++total_evals;
    const Eigen::Matrix4cd T = t_from_params(t);
    const Eigen::Matrix4cd m = T.adjoint() * T;
    const double tr = m.trace().real();
    if (!(tr > 0.0)) return 1e300;
    double nll = 0.0;
    for (std::size_t k = 0; k < proj.size(); ++k) {
      const double p = (m.cwiseProduct(proj[k].transpose())).sum().real() / tr;
      const double mean = N * std::max(p, 1e-300);
      const double n = record.counts[k];
      if (opts.likelihood == Likelihood::poisson)
        nll += mean - n + (n > 0.0 ? n * std::log(n / mean) : 0.0);
      else
        nll += (mean - n) * (mean - n) / (2.0 * std::max(mean, 1.0));
    }
    return nll;
  };

  MleResult res;
  DensityMatrix4 start;
  if (record.settings.size() == 16) {
    const Eigen::Matrix4cd lin = linear_reconstruct(record);
    res.linear_unphysical = min_eigenvalue(lin) < 0.0;
    start = project_to_physical(lin);
  } else {
    start = Eigen::Matrix4cd::Identity() / 4.0;
  }
  start = (start + 1e-9 * Eigen::Matrix4cd::Identity()) / (1.0 + 4e-9);
  const auto x0 = params_from_t(t_from_rho(start));

  auto best = nelder_mead(objective, x0, 0.05, opts.rel_tol, opts.max_evaluations);
  bool best_converged = best.converged;
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int r = 0; r < opts.restarts; ++r) {
    auto x = best.x;
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    for (double& v : x) v += 0.02 * scale * noise(rng);
    auto trial = nelder_mead(objective, x, 0.02 * scale, opts.rel_tol, opts.max_evaluations);
    if (trial.f < best.f) {
      best = trial;
      best_converged = trial.converged;
    }
  }
  // Final polish from the winner.
  auto polish = nelder_mead(objective, best.x, 1e-3, opts.rel_tol, opts.max_evaluations);
  if (polish.f < best.f) best = polish;
  best_converged = best_converged || polish.converged;

  res.rho = rho_from_t(t_from_params(best.x));
  res.rho = 0.5 * (res.rho + res.rho.adjoint());
  res.rho /= res.rho.trace().real();
  res.nll = best.f;
  res.evaluations = total_evals;
  res.converged = best_converged;
  res.warning = !best_converged;
  return res;
}

double concurrence(const DensityMatrix4& rho) {
  const Eigen::Matrix4cd yy = kron(pauli(2), pauli(2));
  const Eigen::Matrix4cd flipped = yy * rho.conjugate() * yy;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (rho + rho.adjoint()));
  const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::Matrix4cd root = es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
  const Eigen::Matrix4cd m = root * flipped * root;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es2(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  Eigen::Vector4d l = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(l.data(), l.data() + 4, std::greater<>());
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

StateMetrics metrics(const DensityMatrix4& rho, const Eigen::Vector4cd& reference) {
  StateMetrics m;
  const Eigen::Vector4cd ref = reference.normalized();
  m.fidelity = std::clamp((ref.adjoint() * rho * ref)(0, 0).real(), 0.0, 1.0);
  m.concurrence = concurrence(rho);
  m.tangle = m.concurrence * m.concurrence;
  m.purity = (rho * rho).trace().real();
  m.linear_entropy = 4.0 / 3.0 * (1.0 - m.purity);
  return m;
}

ErrorBars error_bars(const TomographyRecord& record, int n_resamples, std::uint64_t seed,
                     const MleOptions& opts) {
  if (n_resamples < 2) throw ConfigError("bootstrap needs at least two resamples");
  std::mt19937_64 rng(seed);
  std::vector<StateMetrics> all;
  ErrorBars eb;
  for (int r = 0; r < n_resamples; ++r) {
    TomographyRecord rec = record;
    for (auto& c : rec.counts) {
      if (c <= 0.0) continue;
      std::poisson_distribution<long long> pd(c);
      c = static_cast<double>(pd(rng));
    }
    try {
      const auto fit = mle_reconstruct(rec, opts);
      if (fit.warning) ++eb.nonconverged;
      all.push_back(metrics(fit.rho));
    } catch (const DataError&) {
      ++eb.nonconverged;
    }
  }
  eb.resamples = static_cast<int>(all.size());
  auto spread = [&](double StateMetrics::*field) {
    MetricSpread s;
    if (all.empty()) return s;
    for (const auto& m : all) s.mean += m.*field;
    s.mean /= static_cast<double>(all.size());
    for (const auto& m : all) s.stddev += (m.*field - s.mean) * (m.*field - s.mean);
    s.stddev = all.size() > 1 ? std::sqrt(s.stddev / static_cast<double>(all.size() - 1)) : 0.0;
    return s;
  };
  eb.fidelity = spread(&StateMetrics::fidelity);
  eb.concurrence = spread(&StateMetrics::concurrence);
  eb.tangle = spread(&StateMetrics::tangle);
  eb.linear_entropy = spread(&StateMetrics::linear_entropy);
  return eb;
}

DensityMatrix4 random_density_matrix(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Matrix4cd G;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) G(r, c) = cd(g(rng), g(rng));
  Eigen::Matrix4cd rho = G * G.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace pcfpair

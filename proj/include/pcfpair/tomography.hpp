#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace pcfpair {

/// Two-qubit polarization state in the basis {HH, HV, VH, VV} (signal ⊗ idler).
using DensityMatrix4 = Eigen::Matrix4cd;

enum class Plate { HWP, QWP };

/// Jones matrix of a wave plate with its fast axis at θ (degrees).
///   J(θ) = R(−θ) · diag(1, e^{−iΓ}) · R(θ),  R(θ) = [[cos θ, −sin θ], [sin θ, cos θ]],
/// with Γ = π (HWP) or π/2 (QWP). Circular states: R = (H − iV)/√2, L = (H + iV)/√2.
Eigen::Matrix2cd waveplate_jones(Plate kind, double theta_deg);

struct MeasurementSetting {
  int nu = 0;
  double hwp_s = 0.0, qwp_s = 0.0, hwp_i = 0.0, qwp_i = 0.0;  // degrees
  std::string label;                                          // e.g. "RH"; empty for custom rows
};

/// The sixteen analysis settings, ν = 1..16.
const std::array<MeasurementSetting, 16>& canonical_settings();

/// Polarization state transmitted by the H port after light passes the QWP then the HWP.
Eigen::Vector2cd analysed_state(double hwp_deg, double qwp_deg);
Eigen::Vector2cd named_state(char label);  // H, V, D, A, R, L

Eigen::Matrix4cd setting_to_projector(const MeasurementSetting& setting);

struct SagnacParams {
  double alpha = 1.0 / 1.4142135623730951;
  double beta = 1.0 / 1.4142135623730951;
  double phi = 0.0;  // compensator phase, rad
};

DensityMatrix4 sagnac_state(const SagnacParams& p);
Eigen::Vector4cd phi_plus();

double coincidence_probability(const DensityMatrix4& rho, const MeasurementSetting& setting);

enum class FringeBasis { HV, DA };

struct FringeSample {
  double theta_deg = 0.0;
  double probability = 0.0;
};

/// Signal HWP swept with the idler analysed in H (HWP 0°) or D (HWP −22.5° in the table
/// convention above), no QWPs.
std::vector<FringeSample> fringe_scan(const DensityMatrix4& rho, FringeBasis basis,
                                      const std::vector<double>& signal_hwp_deg);

struct VisibilityFit {
  double visibility = 0.0;
  double offset = 0.0;
  double amplitude = 0.0;
  double residual_rms = 0.0;
  bool raw_extrema = false;  // fit was degenerate
};

/// Fits a + b cos 4θ + c sin 4θ (θ in degrees of HWP angle).
VisibilityFit visibility(const std::vector<std::pair<double, double>>& samples);

struct TomographyRecord {
  std::vector<MeasurementSetting> settings;
  std::vector<double> counts;
  double acquisition_s = 0.0;
  bool custom = false;
};

/// Expected counts N·p_ν without noise.
TomographyRecord expected_counts(const DensityMatrix4& rho, double n_pairs,
                                 const std::vector<MeasurementSetting>& settings);

TomographyRecord simulate_counts(const DensityMatrix4& rho, const std::vector<MeasurementSetting>& settings,
                                 double n_pairs, std::uint64_t seed);

/// Linear inversion, normalised by the ν = 1..4 counts. May be unphysical.
Eigen::Matrix4cd linear_reconstruct(const TomographyRecord& record);

enum class Likelihood { poisson, gaussian };

struct MleOptions {
  Likelihood likelihood = Likelihood::poisson;
  int restarts = 5;
  int max_evaluations = 100000;
  double rel_tol = 1e-10;
  std::uint64_t seed = 20240601;
};

struct MleResult {
  DensityMatrix4 rho;
  double nll = 0.0;
  int evaluations = 0;
  bool converged = false;
  bool warning = false;
  bool linear_unphysical = false;  // the linear estimate had a negative eigenvalue
};

MleResult mle_reconstruct(const TomographyRecord& record, const MleOptions& opts = {});

/// Negative log-likelihood of ρ for the record (same normalisation as the MLE), offset by the
/// saturated-model constant so that a perfect fit scores 0.
double negative_log_likelihood(const DensityMatrix4& rho, const TomographyRecord& record,
                               Likelihood kind = Likelihood::poisson);

/// Hermitian part, negative eigenvalues clipped, trace renormalised to 1.
DensityMatrix4 project_to_physical(const Eigen::Matrix4cd& rho);
double min_eigenvalue(const Eigen::Matrix4cd& rho);
double trace_distance(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b);

struct StateMetrics {
  double fidelity = 0.0;
  double concurrence = 0.0;
  double tangle = 0.0;
  double linear_entropy = 0.0;
  double purity = 0.0;
};

double concurrence(const DensityMatrix4& rho);
StateMetrics metrics(const DensityMatrix4& rho, const Eigen::Vector4cd& reference = phi_plus());

struct MetricSpread {
  double mean = 0.0;
  double stddev = 0.0;
};

struct ErrorBars {
  MetricSpread fidelity, concurrence, tangle, linear_entropy;
  int resamples = 0;
  int nonconverged = 0;
};

/// Parametric bootstrap: Poisson resampling around the observed counts.
ErrorBars error_bars(const TomographyRecord& record, int n_resamples, std::uint64_t seed,
                     const MleOptions& opts = {});

/// Haar-like random mixed state ρ = G G† / Tr, G complex Ginibre.
DensityMatrix4 random_density_matrix(std::uint64_t seed);

}  // namespace pcfpair

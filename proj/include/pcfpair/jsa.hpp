#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pcfpair/phasematch.hpp"

namespace pcfpair {

enum class FilterShape { tophat, gaussian, supergaussian };

struct FilterSpec {
  double center_nm = 0.0;
  double fwhm_nm = 1.0;
  FilterShape shape = FilterShape::tophat;
  int order = 4;  // supergaussian only

  /// Amplitude transmission, the square root of the intensity transmission.
  double amplitude(double lambda_nm) const;
  std::string describe() const;
};

FilterShape parse_filter_shape(const std::string& text);

struct JsaGrid {
  Eigen::VectorXd omega_s;  // rad/s, absolute, uniform
  Eigen::VectorXd omega_i;
  Eigen::MatrixXcd F;       // rows: signal, columns: idler
  PhaseMatchPoint center;
  bool normalized = false;
  std::vector<std::string> filters;

  double d_omega_s() const;
  double d_omega_i() const;
  /// Σ|F|² Δω_s Δω_i
  double norm() const;
};

enum class PhaseModel {
  exact,   // full k(ω) mismatch of the pair axis and pump axis, centred on the point
  linear,  // first-order group-index expansion
};

struct GridSpec {
  int n_s = 512;
  int n_i = 512;
  double capture = 0.995;  // fraction of the sinc² tail and of the pump envelope kept
  double half_span_s = 0.0;  // rad/s; zero picks the span from `capture`
  double half_span_i = 0.0;
  PhaseModel model = PhaseModel::exact;
  bool gaussian_phasematch = false;  // replace sinc by a gaussian of equal FWHM
};

double pump_sigma(const PumpSpec& pump);
double pump_fwhm_omega(const PumpSpec& pump);
std::complex<double> pump_amplitude(const PumpSpec& pump, double domega_sum);

/// exp(iΔkL/2) sinc(ΔkL/2), Δk = (N_s − N_p)/c Δω_s + (N_i − N_p)/c Δω_i.
std::complex<double> phasematch_amplitude(const PhaseMatchPoint& point, double length_m,
                                          double domega_s, double domega_i);

/// Integral of |α φ|² for the linear model over the whole plane.
double analytic_total_intensity(const PhaseMatchPoint& point, const PumpSpec& pump, double length_m,
                                bool gaussian_phasematch = false);

JsaGrid build_jsa(const FibreSpec& fibre, const PumpSpec& pump, const PhaseMatchPoint& point,
                  const GridSpec& grid = {});

JsaGrid apply_filters(const JsaGrid& jsa, const std::optional<FilterSpec>& filter_s,
                      const std::optional<FilterSpec>& filter_i);

struct Marginals {
  Eigen::MatrixXd jsi;
  Eigen::VectorXd signal;  // ∫|F|² dω_i, per rad/s
  Eigen::VectorXd idler;
  double signal_fwhm_omega = 0.0;
  double idler_fwhm_omega = 0.0;
  double signal_fwhm_nm = 0.0;
  double idler_fwhm_nm = 0.0;
};

Marginals jsi_and_marginals(const JsaGrid& jsa);

/// Full width at half maximum of a sampled peak (outermost half-maximum crossings).
double fwhm(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace pcfpair

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pcfpair/jsa.hpp"

namespace pcfpair {

struct SchmidtDecomposition {
  Eigen::VectorXd lambdas;  // descending, sum to 1
  Eigen::MatrixXcd f;       // signal modes as columns, ∫|f_j|² dω_s = 1
  Eigen::MatrixXcd g;       // idler modes as columns
  double K = 1.0;

  double purity() const { return 1.0 / K; }
};

/// SVD of F·√(Δω_s Δω_i). Values below 1e-12 are dropped.
SchmidtDecomposition schmidt_decompose(const JsaGrid& jsa, bool with_modes = true);
double schmidt_number(const JsaGrid& jsa);

/// Tr(ρ_a D(τ) ρ_b D(τ)†) for the heralded-signal reduced states.
double reduced_state_overlap(const JsaGrid& a, const JsaGrid& b, double tau_s);
double hom_visibility(const JsaGrid& a, const JsaGrid& b);

struct DipSample {
  double tau_s = 0.0;
  double coincidences = 0.0;
};

std::vector<DipSample> hom_dip_profile(const JsaGrid& a, const JsaGrid& b,
                                       const std::vector<double>& delays_s);

double visibility_to_schmidt(double V);
double schmidt_to_visibility(double K);

/// Filter request resolved against each JSA: either an absolute width or a multiple
/// of the unfiltered marginal FWHM.
struct FilterSetting {
  FilterShape shape = FilterShape::tophat;
  double fwhm_nm = 0.0;
  double relative = 0.0;
  int order = 4;
};

/// Parses "10x" (relative) or "2.5" (nm).
FilterSetting parse_filter_setting(const std::string& text, FilterShape shape = FilterShape::tophat);

struct PurityOptions {
  int samples = 40;
  GridSpec grid;
  PumpShape pump_shape = PumpShape::gaussian;
  std::optional<FilterSetting> filter_s;
  std::optional<FilterSetting> filter_i;
};

/// Builds the JSA for one pump bandwidth, applies the filters and returns it.
JsaGrid purity_jsa(const FibreSpec& fibre, const PhaseMatchPoint& point, double length_m,
                   double pump_fwhm_nm, const PurityOptions& opts);

double schmidt_at(const FibreSpec& fibre, const PhaseMatchPoint& point, double length_m,
                  double pump_fwhm_nm, const PurityOptions& opts);

struct PurityScanResult {
  std::vector<double> axis;  // pump FWHM (nm)
  std::vector<double> K;
  double argmin = 0.0;
  double K_min = 0.0;
  bool boundary = false;
};

PurityScanResult optimize_pump_bandwidth(const FibreSpec& fibre, const PhaseMatchPoint& point,
                                         double length_m, std::pair<double, double> bw_range_nm,
                                         const PurityOptions& opts = {});

struct LengthScanRow {
  double length_m = 0.0;
  double K_min = 0.0;
  double bw_opt_nm = 0.0;
  bool boundary = false;
};

struct LengthScan {
  std::vector<LengthScanRow> rows;
  bool K_strictly_decreasing = true;
  bool bw_strictly_decreasing = true;
};

LengthScan scan_length(const FibreSpec& fibre, const PhaseMatchPoint& point,
                       const std::vector<double>& lengths, std::pair<double, double> bw_range_nm,
                       const PurityOptions& opts = {});

}  // namespace pcfpair

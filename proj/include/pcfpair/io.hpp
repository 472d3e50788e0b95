#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "pcfpair/jsa.hpp"
#include "pcfpair/phasematch.hpp"
#include "pcfpair/schmidt.hpp"
#include "pcfpair/tomography.hpp"

namespace pcfpair {

// lambda_p_nm,branch,lambda_s_nm,lambda_i_nm,dk_residual_per_m
void write_curve_csv(std::ostream& out, const std::vector<CurveSample>& curve);
struct CurveRow {
  double lambda_p, branch, lambda_s, lambda_i, dk;
};
std::vector<CurveRow> read_curve_csv(std::istream& in);

void write_bandwidth_scan_csv(std::ostream& out, const PurityScanResult& scan);
void write_length_scan_csv(std::ostream& out, const LengthScan& scan);
void write_dip_csv(std::ostream& out, const std::vector<DipSample>& dip);

/// First row: idler wavelengths (nm) after an empty corner cell; first column: signal wavelengths.
void write_jsi_csv(std::ostream& out, const JsaGrid& jsa, const Eigen::MatrixXd& jsi);
struct JsiTable {
  std::vector<double> signal_nm, idler_nm;
  Eigen::MatrixXd intensity;
};
JsiTable read_jsi_csv(std::istream& in);

/// lambda_nm,intensity (wavelength ascending)
void write_marginal_csv(std::ostream& out, const Eigen::VectorXd& omega, const Eigen::VectorXd& intensity);

// nu,hwp_s_deg,qwp_s_deg,hwp_i_deg,qwp_i_deg,counts
void write_record_csv(std::ostream& out, const TomographyRecord& record);
TomographyRecord read_record_csv(std::istream& in);

// {"basis":["HH","HV","VH","VV"],"re":[[...]],"im":[[...]]}
std::string density_to_json(const Eigen::Matrix4cd& rho);
Eigen::Matrix4cd density_from_json(const std::string& text);

}  // namespace pcfpair

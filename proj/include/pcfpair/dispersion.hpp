#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pcfpair {

/// n and its first two wavelength derivatives; derivatives are per nm.
struct IndexDerivatives {
  double n = 0.0;
  double dn = 0.0;
  double d2n = 0.0;
};

struct SellmeierTerm {
  double B = 0.0;
  double C_um2 = 0.0;
};

/// n²(λ) = 1 + Σ B_j λ² / (λ² − C_j), λ in µm.
class SellmeierModel {
 public:
  SellmeierModel(std::vector<SellmeierTerm> terms, double lambda_min_nm, double lambda_max_nm);

  static SellmeierModel fused_silica();

  IndexDerivatives evaluate(double lambda_nm) const;

  const std::vector<SellmeierTerm>& terms() const { return terms_; }
  double lambda_min_nm() const { return lo_; }
  double lambda_max_nm() const { return hi_; }

 private:
  std::vector<SellmeierTerm> terms_;
  double lo_, hi_;
};

/// Power series in λ (µm): c[0] + c[1] λ + c[2] λ² + ...
struct Polynomial {
  std::vector<double> c;

  double value(double lambda_um) const;
  double derivative(double lambda_um) const;
  double second_derivative(double lambda_um) const;
};

/// Sellmeier base plus waveguide correction and (on one axis only) a
/// birefringence offset.
struct AxisModel {
  SellmeierModel base;
  Polynomial waveguide_correction;
  Polynomial birefringence_offset;

  IndexDerivatives evaluate(double lambda_nm) const;
  double lambda_min_nm() const { return base.lambda_min_nm(); }
  double lambda_max_nm() const { return base.lambda_max_nm(); }
};

/// Natural cubic spline through (λ_nm, n) samples. No extrapolation.
class TabulatedModel {
 public:
  TabulatedModel(std::vector<double> lambda_nm, std::vector<double> n);

  IndexDerivatives evaluate(double lambda_nm) const;
  double lambda_min_nm() const { return x_.front(); }
  double lambda_max_nm() const { return x_.back(); }

  const std::vector<double>& lambdas() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives at the nodes
};

using DispersionModel = std::variant<SellmeierModel, AxisModel, TabulatedModel>;

std::pair<double, double> valid_range(const DispersionModel& model);

/// Throws RangeError outside the closed valid interval.
IndexDerivatives index_derivatives(const DispersionModel& model, double lambda_nm);

double phase_index(const DispersionModel& model, double lambda_nm);

/// N = n − λ dn/dλ. Needs λ strictly inside the range.
double group_index(const DispersionModel& model, double lambda_nm);

/// d²n/dλ² in nm⁻²; its sign follows the sign of the group-velocity dispersion.
double index_curvature(const DispersionModel& model, double lambda_nm);

double zero_dispersion_wavelength(const DispersionModel& model, double lo_nm, double hi_nm);

TabulatedModel load_tabulated(const std::filesystem::path& path);
TabulatedModel parse_tabulated(std::istream& in);

/// Samples a model on a uniform grid (used to export index tables).
TabulatedModel sample_model(const DispersionModel& model, double lo_nm, double hi_nm,
                            std::size_t count);

}  // namespace pcfpair

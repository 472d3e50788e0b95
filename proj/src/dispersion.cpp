#include "pcfpair/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pcfpair/csv.hpp"
#include "pcfpair/errors.hpp"

namespace pcfpair {

namespace {

std::string range_text(double lo, double hi) {
  std::ostringstream os;
  os << "[" << lo << ", " << hi << "] nm";
  return os.str();
}

IndexDerivatives from_n_squared(double f, double df, double d2f) {
  if (!(f > 0.0)) throw DomainError("Sellmeier sum gives n^2 <= 0");
  IndexDerivatives r;
  r.n = std::sqrt(f);
  r.dn = df / (2.0 * r.n);
  r.d2n = (d2f - 2.0 * r.dn * r.dn) / (2.0 * r.n);
  return r;
}

}  // namespace

SellmeierModel::SellmeierModel(std::vector<SellmeierTerm> terms, double lambda_min_nm,
                               double lambda_max_nm)
    : terms_(std::move(terms)), lo_(lambda_min_nm), hi_(lambda_max_nm) {
  if (!(lo_ > 0.0) || !(hi_ > lo_)) throw ConfigError("Sellmeier valid range must satisfy 0 < min < max");
  for (const auto& t : terms_) {
    if (!(t.C_um2 > 0.0)) throw ConfigError("Sellmeier C coefficients must be positive");
    if (!std::isfinite(t.B)) throw ConfigError("Sellmeier B coefficient is not finite");
  }
}

SellmeierModel SellmeierModel::fused_silica() {
  return SellmeierModel({{0.6961663, 0.0684043 * 0.0684043},
                         {0.4079426, 0.1162414 * 0.1162414},
                         {0.8974794, 9.896161 * 9.896161}},
                        210.0, 3710.0);
}

IndexDerivatives SellmeierModel::evaluate(double lambda_nm) const {
  const double l = lambda_nm * 1e-3;
  const double l2 = l * l;
  double f = 1.0, df = 0.0, d2f = 0.0;
  for (const auto& t : terms_) {
    const double den = l2 - t.C_um2;
    f += t.B * l2 / den;
    df += -2.0 * t.B * t.C_um2 * l / (den * den);
    d2f += 2.0 * t.B * t.C_um2 * (3.0 * l2 + t.C_um2) / (den * den * den);
  }
  auto r = from_n_squared(f, df, d2f);
  r.dn *= 1e-3;
  r.d2n *= 1e-6;
  return r;
}

double Polynomial::value(double x) const {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Polynomial::derivative(double x) const {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * c[k];
  return acc;
}

double Polynomial::second_derivative(double x) const {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 2;)
    acc = acc * x + static_cast<double>(k * (k - 1)) * c[k];
  return acc;
}

IndexDerivatives AxisModel::evaluate(double lambda_nm) const {
  auto r = base.evaluate(lambda_nm);
  const double l = lambda_nm * 1e-3;
  r.n += waveguide_correction.value(l) + birefringence_offset.value(l);
  r.dn += (waveguide_correction.derivative(l) + birefringence_offset.derivative(l)) * 1e-3;
  r.d2n +=
      (waveguide_correction.second_derivative(l) + birefringence_offset.second_derivative(l)) * 1e-6;
  if (!std::isfinite(r.n) || r.n <= 1.0) throw DomainError("corrected index is not > 1");
  return r;
}

TabulatedModel::TabulatedModel(std::vector<double> lambda_nm, std::vector<double> n)
    : x_(std::move(lambda_nm)), y_(std::move(n)) {
  if (x_.size() != y_.size()) throw ParseError("lambda and n columns differ in length");
  if (x_.size() < 8) throw ParseError("index table needs at least 8 rows");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) throw ParseError("non-finite sample", i + 2);
    if (i > 0 && !(x_[i] > x_[i - 1])) throw ParseError("lambda not strictly increasing", i + 2);
  }

  // Natural spline: tridiagonal solve for nodal second derivatives.
  const std::size_t k = x_.size();
  m_.assign(k, 0.0);
  std::vector<double> c(k, 0.0), d(k, 0.0);
  for (std::size_t i = 1; i + 1 < k; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double a = h0, b = 2.0 * (h0 + h1), cc = h1;
    const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    const double denom = b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (rhs - a * d[i - 1]) / denom;
  }
  for (std::size_t i = k - 1; i-- > 1;) m_[i] = d[i] - c[i] * m_[i + 1];
}

IndexDerivatives TabulatedModel::evaluate(double lambda_nm) const {
  std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), lambda_nm) - x_.begin());
  if (i == 0) i = 1;
  if (i >= x_.size()) i = x_.size() - 1;
  const double x0 = x_[i - 1], x1 = x_[i];
  const double h = x1 - x0;
  const double a = (x1 - lambda_nm) / h;
  const double b = (lambda_nm - x0) / h;
  const double m0 = m_[i - 1], m1 = m_[i];
  IndexDerivatives r;
  r.n = a * y_[i - 1] + b * y_[i] + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
  r.dn = (y_[i] - y_[i - 1]) / h - (3.0 * a * a - 1.0) * h * m0 / 6.0 + (3.0 * b * b - 1.0) * h * m1 / 6.0;
  r.d2n = a * m0 + b * m1;
  return r;
}

std::pair<double, double> valid_range(const DispersionModel& model) {
  return std::visit([](const auto& m) { return std::pair{m.lambda_min_nm(), m.lambda_max_nm()}; },
                    model);
}

IndexDerivatives index_derivatives(const DispersionModel& model, double lambda_nm) {
  const auto [lo, hi] = valid_range(model);
  if (!(lambda_nm >= lo && lambda_nm <= hi)) {
    std::ostringstream os;
    os << "wavelength " << lambda_nm << " nm outside valid range " << range_text(lo, hi);
    throw RangeError(os.str());
  }
  return std::visit([&](const auto& m) { return m.evaluate(lambda_nm); }, model);
}

double phase_index(const DispersionModel& model, double lambda_nm) {
  return index_derivatives(model, lambda_nm).n;
}

double group_index(const DispersionModel& model, double lambda_nm) {
  const auto [lo, hi] = valid_range(model);
  if (!(lambda_nm > lo && lambda_nm < hi)) {
    std::ostringstream os;
    os << "group index needs a wavelength strictly inside " << range_text(lo, hi) << ", got "
       << lambda_nm;
    throw RangeError(os.str());
  }
  const auto r = index_derivatives(model, lambda_nm);
  return r.n - lambda_nm * r.dn;
}

double index_curvature(const DispersionModel& model, double lambda_nm) {
  return index_derivatives(model, lambda_nm).d2n;
}

double zero_dispersion_wavelength(const DispersionModel& model, double lo_nm, double hi_nm) {
  if (!(hi_nm > lo_nm)) throw BracketError("ZDW bracket must satisfy lo < hi");
  constexpr int kScan = 200;
  double a = lo_nm;
  double fa = index_curvature(model, a);
  for (int k = 1; k <= kScan; ++k) {
    double b = lo_nm + (hi_nm - lo_nm) * k / kScan;
    const double fb = index_curvature(model, b);
    if (fa == 0.0) return a;
    if (fa * fb < 0.0) {
      while (b - a > 1e-7) {
        const double m = 0.5 * (a + b);
        const double fm = index_curvature(model, m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      return 0.5 * (a + b);
    }
    a = b;
    fa = fb;
  }
  throw BracketError("no zero-dispersion wavelength in " + range_text(lo_nm, hi_nm));
}

TabulatedModel parse_tabulated(std::istream& in) {
  const auto table = read_csv(in, {"lambda_nm", "n"});
  std::vector<double> x, y;
  for (const auto& row : table.rows) {
    x.push_back(row.values[0]);
    y.push_back(row.values[1]);
    if (x.size() > 1 && !(x.back() > x[x.size() - 2]))
      throw ParseError("lambda_nm not strictly increasing", row.line);
  }
  if (x.size() < 8) throw ParseError("index table needs at least 8 rows, found " + std::to_string(x.size()));
  return TabulatedModel(std::move(x), std::move(y));
}

TabulatedModel load_tabulated(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open index table " + path.string());
  return parse_tabulated(in);
}

TabulatedModel sample_model(const DispersionModel& model, double lo_nm, double hi_nm,
                            std::size_t count) {
  std::vector<double> x(count), y(count);
  for (std::size_t i = 0; i < count; ++i) {
    x[i] = lo_nm + (hi_nm - lo_nm) * static_cast<double>(i) / static_cast<double>(count - 1);
    y[i] = phase_index(model, x[i]);
  }
  return TabulatedModel(std::move(x), std::move(y));
}

}  // namespace pcfpair

#include "pcfpair/io.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "pcfpair/csv.hpp"
#include "pcfpair/errors.hpp"
#include "pcfpair/units.hpp"

namespace pcfpair {

void write_curve_csv(std::ostream& out, const std::vector<CurveSample>& curve) {
  write_csv_header(out, {"lambda_p_nm", "branch", "lambda_s_nm", "lambda_i_nm", "dk_residual_per_m"});
  for (const auto& s : curve)
    for (std::size_t b = 0; b < s.points.size(); ++b) {
      const auto& p = s.points[b];
      write_csv_row(out, {s.lambda_p, static_cast<double>(b), p.lambda_s, p.lambda_i, p.dk_residual});
    }
}

std::vector<CurveRow> read_curve_csv(std::istream& in) {
  const auto t = read_csv(in, {"lambda_p_nm", "branch", "lambda_s_nm", "lambda_i_nm", "dk_residual_per_m"});
  std::vector<CurveRow> rows;
  for (const auto& r : t.rows) rows.push_back({r.values[0], r.values[1], r.values[2], r.values[3], r.values[4]});
  return rows;
}

void write_bandwidth_scan_csv(std::ostream& out, const PurityScanResult& scan) {
  write_csv_header(out, {"pump_fwhm_nm", "K"});
  for (std::size_t k = 0; k < scan.axis.size(); ++k) write_csv_row(out, {scan.axis[k], scan.K[k]});
}

void write_length_scan_csv(std::ostream& out, const LengthScan& scan) {
  write_csv_header(out, {"length_m", "K_min", "bw_opt_nm"});
  for (const auto& r : scan.rows) write_csv_row(out, {r.length_m, r.K_min, r.bw_opt_nm});
}

void write_dip_csv(std::ostream& out, const std::vector<DipSample>& dip) {
  write_csv_header(out, {"delay_ps", "normalized_coincidences"});
  for (const auto& d : dip) write_csv_row(out, {d.tau_s * 1e12, d.coincidences});
}

void write_jsi_csv(std::ostream& out, const JsaGrid& jsa, const Eigen::MatrixXd& jsi) {
  // Axes are written in ascending wavelength, i.e. descending frequency.
  const Eigen::Index ns = jsa.omega_s.size(), ni = jsa.omega_i.size();
  for (Eigen::Index b = ni; b-- > 0;) out << "," << format_number(omega_to_nm(jsa.omega_i(b)));
  out << '\n';
  for (Eigen::Index a = ns; a-- > 0;) {
    out << format_number(omega_to_nm(jsa.omega_s(a)));
    for (Eigen::Index b = ni; b-- > 0;) out << "," << format_number(jsi(a, b));
    out << '\n';
  }
}

JsiTable read_jsi_csv(std::istream& in) {
  JsiTable t;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::vector<double>> body;
  auto parse_fields = [&](const std::string& l, bool header) {
    std::vector<double> v;
    std::stringstream ss(l);
    std::string f;
    bool first = true;
    while (std::getline(ss, f, ',')) {
      if (header && first) {
        if (!f.empty()) throw ParseError("JSI header must start with an empty cell", lineno);
      } else {
        std::size_t used = 0;
        double x = 0.0;
        try {
          x = std::stod(f, &used);
        } catch (const std::exception&) {
          throw ParseError("malformed number '" + f + "'", lineno);
        }
        if (used != f.size() || !std::isfinite(x)) throw ParseError("malformed number '" + f + "'", lineno);
        v.push_back(x);
      }
      first = false;
    }
    return v;
  };
  if (!std::getline(in, line)) throw ParseError("empty JSI file", 1);
  ++lineno;
  t.idler_nm = parse_fields(line, true);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto v = parse_fields(line, false);
    if (v.size() != t.idler_nm.size() + 1) throw ParseError("row width does not match the idler axis", lineno);
    t.signal_nm.push_back(v[0]);
    body.emplace_back(v.begin() + 1, v.end());
  }
  t.intensity.resize(static_cast<Eigen::Index>(body.size()), static_cast<Eigen::Index>(t.idler_nm.size()));
  for (std::size_t r = 0; r < body.size(); ++r)
    for (std::size_t c = 0; c < body[r].size(); ++c) t.intensity(r, c) = body[r][c];
  return t;
}

void write_marginal_csv(std::ostream& out, const Eigen::VectorXd& omega, const Eigen::VectorXd& intensity) {
  write_csv_header(out, {"lambda_nm", "intensity"});
  for (Eigen::Index k = omega.size(); k-- > 0;) write_csv_row(out, {omega_to_nm(omega(k)), intensity(k)});
}

void write_record_csv(std::ostream& out, const TomographyRecord& record) {
  write_csv_header(out, {"nu", "hwp_s_deg", "qwp_s_deg", "hwp_i_deg", "qwp_i_deg", "counts"});
  for (std::size_t k = 0; k < record.settings.size(); ++k) {
    const auto& s = record.settings[k];
    write_csv_row(out, {static_cast<double>(s.nu), s.hwp_s, s.qwp_s, s.hwp_i, s.qwp_i, record.counts[k]});
  }
}

TomographyRecord read_record_csv(std::istream& in) {
  const auto t = read_csv(in, {"nu", "hwp_s_deg", "qwp_s_deg", "hwp_i_deg", "qwp_i_deg", "counts"});
  TomographyRecord rec;
  const auto& canon = canonical_settings();
  for (const auto& r : t.rows) {
    const double nu = r.values[0];
    const double counts = r.values[5];
    if (nu != std::floor(nu) || nu < 1) throw ParseError("nu must be a positive integer", r.line);
    if (counts < 0.0 || counts != std::floor(counts))
      throw ParseError("counts must be a non-negative integer", r.line);
    MeasurementSetting s{static_cast<int>(nu), r.values[1], r.values[2], r.values[3], r.values[4], ""};
    if (s.nu <= 16) {
      const auto& c = canon[static_cast<std::size_t>(s.nu - 1)];
      const bool same = std::abs(c.hwp_s - s.hwp_s) < 1e-9 && std::abs(c.qwp_s - s.qwp_s) < 1e-9 &&
                        std::abs(c.hwp_i - s.hwp_i) < 1e-9 && std::abs(c.qwp_i - s.qwp_i) < 1e-9;
      if (same) s.label = c.label;
      else rec.custom = true;
    } else {
      rec.custom = true;
    }
    rec.settings.push_back(s);
    rec.counts.push_back(counts);
  }
  if (rec.settings.size() != 16) rec.custom = true;
  for (std::size_t k = 0; k < rec.settings.size() && !rec.custom; ++k)
    if (rec.settings[k].nu != static_cast<int>(k + 1)) rec.custom = true;
  if (rec.settings.empty()) throw ParseError("tomography record has no rows");
  return rec;
}

std::string density_to_json(const Eigen::Matrix4cd& rho) {
  nlohmann::json j;
  j["basis"] = {"HH", "HV", "VH", "VV"};
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json rr = nlohmann::json::array(), ir = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) {
      rr.push_back(round9(rho(r, c).real()) + 0.0);
      ir.push_back(round9(rho(r, c).imag()) + 0.0);
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump(2);
}

Eigen::Matrix4cd density_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("state file is not valid JSON: ") + e.what());
  }
  if (!j.contains("re") || !j.contains("im")) throw ConfigError("state JSON needs 're' and 'im' fields");
  if (j.contains("basis") && j["basis"] != nlohmann::json({"HH", "HV", "VH", "VV"}))
    throw ConfigError("state JSON basis must be [\"HH\",\"HV\",\"VH\",\"VV\"]");
  Eigen::Matrix4cd rho;
  try {
    for (const char* key : {"re", "im"}) {
      const auto& m = j.at(key);
      if (!m.is_array() || m.size() != 4) throw ConfigError(std::string("field '") + key + "' must be 4x4");
      for (int r = 0; r < 4; ++r)
        if (!m[r].is_array() || m[r].size() != 4)
          throw ConfigError(std::string("field '") + key + "' row " + std::to_string(r) + " must have 4 entries");
    }
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        rho(r, c) = {j["re"][r][c].get<double>(), j["im"][r][c].get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("state JSON entries must be numbers: ") + e.what());
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9) throw ConfigError("density matrix is not Hermitian");
  return rho;
}

}  // namespace pcfpair

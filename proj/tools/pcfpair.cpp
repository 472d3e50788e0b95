#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcfpair/csv.hpp"
#include "pcfpair/errors.hpp"
#include "pcfpair/fibre.hpp"
#include "pcfpair/io.hpp"
#include "pcfpair/jsa.hpp"
#include "pcfpair/phasematch.hpp"
#include "pcfpair/schmidt.hpp"
#include "pcfpair/tomography.hpp"
#include "pcfpair/units.hpp"

using namespace pcfpair;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string out_dir;
  std::uint64_t seed = 1;
  std::string preset_dir;
};

std::vector<double> split_numbers(const std::string& text, char sep, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string f;
  while (std::getline(ss, f, sep)) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(f, &used));
      if (used != f.size()) throw std::invalid_argument(f);
    } catch (const std::exception&) {
      throw ConfigError(what + ": cannot parse '" + f + "' in '" + text + "'");
    }
  }
  return v;
}

std::pair<double, double> parse_range(const std::string& text, const std::string& what) {
  const auto v = split_numbers(text, ':', what);
  if (v.size() != 2 || !(v[1] >= v[0])) throw ConfigError(what + " must look like lo:hi with lo <= hi");
  return {v[0], v[1]};
}

struct Sweep {
  double lo, hi;
  int steps;
};

Sweep parse_sweep(const std::string& text, const std::string& what) {
  const auto v = split_numbers(text, ':', what);
  if (v.size() != 3 || !(v[1] >= v[0]) || v[2] < 1 || v[2] != static_cast<int>(v[2]))
    throw ConfigError(what + " must look like lo:hi:steps");
  return {v[0], v[1], static_cast<int>(v[2])};
}

std::vector<double> sweep_values(const Sweep& s) {
  std::vector<double> out;
  for (int k = 0; k < s.steps; ++k)
    out.push_back(s.steps == 1 ? s.lo : s.lo + (s.hi - s.lo) * k / (s.steps - 1));
  return out;
}

fs::path preset_dir(const Globals& g) { return g.preset_dir.empty() ? default_preset_dir() : fs::path(g.preset_dir); }

std::string read_text(const std::string& path) {
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    ss << in.rdbuf();
  }
  return ss.str();
}

fs::path out_path(const Globals& g, const std::string& name) {
  std::error_code ec;
  fs::create_directories(g.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + g.out_dir);
  return fs::path(g.out_dir) / name;
}

void write_file(const Globals& g, const std::string& name, const std::string& text) {
  const auto p = out_path(g, name);
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

// CSV to stdout without --out; otherwise files plus the summary on stdout.
void emit(const Globals& g, const std::string& csv_name, const std::string& csv, const std::string& summary_name,
          const json& summary) {
  if (g.out_dir.empty()) {
    std::cout << csv;
    if (!summary.is_null()) std::cerr << summary.dump() << '\n';
    return;
  }
  write_file(g, csv_name, csv);
  if (!summary.is_null()) {
    write_file(g, summary_name, summary.dump(2) + "\n");
    std::cout << summary.dump(2) << '\n';
  }
}

void emit_json(const Globals& g, const std::string& name, const json& j) {
  if (!g.out_dir.empty()) write_file(g, name, j.dump(2) + "\n");
  std::cout << j.dump(2) << '\n';
}

double r9(double v) { return round9(v) + 0.0; }

PhaseMatchPoint require_point(const FibreSpec& fibre, Scheme scheme, double pump, double power) {
  const auto p = primary_point(fibre, scheme, pump, power);
  if (!p) {
    std::ostringstream os;
    os << "no phase-matching root for pump " << pump << " nm in scheme " << to_string(scheme);
    throw BracketError(os.str());
  }
  return *p;
}

json point_json(const PhaseMatchPoint& p) {
  return {{"lambda_p_nm", r9(p.lambda_p)}, {"lambda_s_nm", r9(p.lambda_s)}, {"lambda_i_nm", r9(p.lambda_i)},
          {"scheme", to_string(p.scheme)},  {"Np", r9(p.Np)},                 {"Ns", r9(p.Ns)},
          {"Ni", r9(p.Ni)}};
}

struct SourceOptions {
  std::string preset = "pcf-a";
  std::string scheme = "ssff";
  double pump = 705.0;
  double power = 0.0;
  double length = 0.0;  // 0: preset length
  int grid = 512;
  std::string pump_shape = "gaussian";
  std::string filter_s, filter_i, filter_shape = "tophat";

  void attach(CLI::App* c) {
    c->add_option("--preset", preset, "preset name or JSON path");
    c->add_option("--scheme", scheme, "pump->pair polarisation scheme (ssff, ffss, ssss, ffff)");
    c->add_option("--pump", pump, "pump wavelength (nm)");
    c->add_option("--power", power, "peak pump power (W)");
    c->add_option("--grid", grid, "JSA points per axis");
    c->add_option("--pump-shape", pump_shape, "gaussian or tophat");
    c->add_option("--filter-s", filter_s, "signal filter FWHM in nm, or Nx for N times the marginal FWHM");
    c->add_option("--filter-i", filter_i, "idler filter FWHM in nm, or Nx");
    c->add_option("--filter-shape", filter_shape, "tophat, gaussian or supergaussian");
  }

  PumpShape shape() const {
    if (pump_shape == "gaussian") return PumpShape::gaussian;
    if (pump_shape == "tophat") return PumpShape::tophat;
    throw ConfigError("unknown pump shape '" + pump_shape + "'");
  }

  PurityOptions purity() const {
    PurityOptions o;
    o.grid.n_s = o.grid.n_i = grid;
    o.pump_shape = shape();
    const auto fs = parse_filter_shape(filter_shape);
    if (!filter_s.empty()) o.filter_s = parse_filter_setting(filter_s, fs);
    if (!filter_i.empty()) o.filter_i = parse_filter_setting(filter_i, fs);
    return o;
  }
};

json filter_json(const SourceOptions& s) {
  json j = json::object();
  if (!s.filter_s.empty()) j["signal"] = s.filter_s;
  if (!s.filter_i.empty()) j["idler"] = s.filter_i;
  if (!j.empty()) j["shape"] = s.filter_shape;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"pcfpair: photon-pair source design and two-qubit tomography toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out", g.out_dir, "output directory (default: write to stdout)");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--preset-dir", g.preset_dir, "preset directory (default: $PCFPAIR_PRESET_DIR or the shipped presets)");

  // presets list
  auto* presets = app.add_subcommand("presets", "fibre presets");
  presets->require_subcommand(1);
  auto* plist = presets->add_subcommand("list", "list available presets");

  // phasematch
  auto* pm = app.add_subcommand("phasematch", "phase-matching curve");
  std::string pm_preset = "pcf-a", pm_scheme = "ssff", pm_pump = "700:740:200", pm_window;
  double pm_power = 0.0;
  pm->add_option("--preset", pm_preset, "preset name or JSON path");
  pm->add_option("--scheme", pm_scheme, "pump->pair scheme");
  pm->add_option("--pump", pm_pump, "pump sweep lo:hi:steps (nm)");
  pm->add_option("--power", pm_power, "peak pump power (W)");
  pm->add_option("--window", pm_window, "signal search window lo:hi (nm)");

  // bandwidth
  auto* bw = app.add_subcommand("bandwidth", "signal bandwidth against fibre length");
  SourceOptions bw_src;
  std::string bw_lengths = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0";
  double bw_fwhm = 0.0;
  bw->add_option("--preset", bw_src.preset, "preset name or JSON path");
  bw->add_option("--scheme", bw_src.scheme, "pump->pair scheme");
  bw->add_option("--pump", bw_src.pump, "pump wavelength (nm)");
  bw->add_option("--power", bw_src.power, "peak pump power (W)");
  bw->add_option("--lengths", bw_lengths, "comma-separated fibre lengths (m)");
  bw->add_option("--pump-fwhm", bw_fwhm, "pump FWHM (nm)");

  // jsa
  auto* js = app.add_subcommand("jsa", "joint spectral intensity and marginals");
  SourceOptions js_src;
  js_src.attach(js);
  double js_fwhm = 3.03;
  js->add_option("--pump-fwhm", js_fwhm, "pump FWHM (nm)");
  js->add_option("--length", js_src.length, "fibre length (m), default from the preset");

  // schmidt-scan
  auto* ss = app.add_subcommand("schmidt-scan", "Schmidt number against pump bandwidth");
  SourceOptions ss_src;
  ss_src.attach(ss);
  std::string ss_lengths, ss_bw = "0.5:12";
  int ss_samples = 40;
  ss->add_option("--length", ss_src.length, "fibre length (m), default from the preset");
  ss->add_option("--lengths", ss_lengths, "comma-separated fibre lengths (m) for a length scan");
  ss->add_option("--bw", ss_bw, "pump FWHM range lo:hi (nm)");
  ss->add_option("--samples", ss_samples, "log-spaced bandwidth samples");

  // hom
  auto* hm = app.add_subcommand("hom", "HOM dip between two identical heralded sources");
  SourceOptions hm_src;
  hm_src.attach(hm);
  double hm_fwhm = 3.03;
  std::string hm_delays = "-20:20:401";
  hm->add_option("--pump-fwhm", hm_fwhm, "pump FWHM (nm)");
  hm->add_option("--length", hm_src.length, "fibre length (m), default from the preset");
  hm->add_option("--delays", hm_delays, "delay sweep lo:hi:steps (ps)");

  // tomo
  auto* tomo = app.add_subcommand("tomo", "two-qubit polarisation tomography");
  tomo->require_subcommand(1);
  auto* tsim = tomo->add_subcommand("simulate", "Poisson counts for the 16 settings");
  std::string tsim_state;
  double tsim_n = 1e4;
  tsim->add_option("--state", tsim_state, "density matrix JSON")->required();
  tsim->add_option("--n", tsim_n, "mean pairs per setting");
  tsim->add_option("--seed", g.seed, "random seed");

  auto* trec = tomo->add_subcommand("reconstruct", "maximum-likelihood state from a record CSV");
  std::string trec_file, trec_like = "poisson";
  int trec_boot = 0;
  trec->add_option("record", trec_file, "record CSV, or - for stdin")->required();
  trec->add_option("--likelihood", trec_like, "poisson or gaussian");
  trec->add_option("--bootstrap", trec_boot, "parametric bootstrap resamples for error bars");
  trec->add_option("--seed", g.seed, "random seed");

  auto* tmet = tomo->add_subcommand("metrics", "fidelity to Phi+, concurrence, tangle, linear entropy");
  std::string tmet_state;
  tmet->add_option("--state", tmet_state, "density matrix JSON")->required();

  auto* tfr = tomo->add_subcommand("fringe", "coincidence fringe against signal HWP angle");
  std::string tfr_state, tfr_basis = "DA";
  int tfr_steps = 91;
  tfr->add_option("--state", tfr_state, "density matrix JSON")->required();
  tfr->add_option("--basis", tfr_basis, "idler analysed in H (HV) or D (DA)");
  tfr->add_option("--steps", tfr_steps, "angles over 0..90 deg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto source = [&](const SourceOptions& s) {
    FibreSpec f = resolve_preset(s.preset, preset_dir(g));
    if (s.length != 0.0) {
      if (!(s.length > 0.0)) throw ConfigError("--length must be positive");
      f = f.with_length(s.length);
    }
    return f;
  };

  if (plist->parsed()) {
    for (const auto& p : list_presets(preset_dir(g))) {
      const auto f = load_preset(p);
      std::cout << p.stem().string() << "\t" << f.description << '\n';
    }
    return 0;
  }

  if (pm->parsed()) {
    const FibreSpec f = resolve_preset(pm_preset, preset_dir(g));
    const Scheme scheme = parse_scheme(pm_scheme);
    const auto sw = parse_sweep(pm_pump, "--pump");
    std::optional<std::pair<double, double>> window;
    if (!pm_window.empty()) window = parse_range(pm_window, "--window");
    const auto curve = phasematch_curve(f, scheme, sw.lo, sw.hi, sw.steps, pm_power, window);
    std::ostringstream csv;
    write_curve_csv(csv, curve);
    emit(g, "phasematch_curve.csv", csv.str(), "", json());
    return 0;
  }

  if (bw->parsed()) {
    const FibreSpec f = source(bw_src);
    const auto point = require_point(f, parse_scheme(bw_src.scheme), bw_src.pump, bw_src.power);
    const double dwp = bw_fwhm > 0.0 ? bandwidth_nm_to_omega(bw_fwhm, bw_src.pump) : 0.0;
    std::ostringstream csv;
    write_csv_header(csv, {"length_m", "dlambda_s_nm", "first_term_nm", "second_term_nm"});
    for (double L : split_numbers(bw_lengths, ',', "--lengths")) {
      const auto b = signal_bandwidth(point, L, dwp);
      write_csv_row(csv, {L, b.dlambda_s_nm, bandwidth_omega_to_nm(b.first_term, point.lambda_s),
                          bandwidth_omega_to_nm(b.second_term, point.lambda_s)});
    }
    json summary = {{"point", point_json(point)}, {"pump_fwhm_nm", bw_fwhm}};
    emit(g, "bandwidth.csv", csv.str(), "bandwidth_summary.json", summary);
    return 0;
  }

  if (js->parsed()) {
    const FibreSpec f = source(js_src);
    const auto point = require_point(f, parse_scheme(js_src.scheme), js_src.pump, js_src.power);
    const auto opts = js_src.purity();
    const auto jsa = purity_jsa(f, point, f.length_m, js_fwhm, opts);
    const auto m = jsi_and_marginals(jsa);
    const double K = schmidt_number(jsa);
    std::ostringstream csv;
    write_jsi_csv(csv, jsa, m.jsi);
    json summary = {{"point", point_json(point)},
                    {"length_m", f.length_m},
                    {"pump_fwhm_nm", js_fwhm},
                    {"grid", js_src.grid},
                    {"filters", filter_json(js_src)},
                    {"K", r9(K)},
                    {"purity", r9(1.0 / K)},
                    {"signal_fwhm_nm", r9(m.signal_fwhm_nm)},
                    {"idler_fwhm_nm", r9(m.idler_fwhm_nm)}};
    if (!g.out_dir.empty()) {
      std::ostringstream ms, mi;
      write_marginal_csv(ms, jsa.omega_s, m.signal);
      write_marginal_csv(mi, jsa.omega_i, m.idler);
      write_file(g, "marginal_signal.csv", ms.str());
      write_file(g, "marginal_idler.csv", mi.str());
    }
    emit(g, "jsi.csv", csv.str(), "jsa_summary.json", summary);
    return 0;
  }

  if (ss->parsed()) {
    const FibreSpec f = source(ss_src);
    const auto point = require_point(f, parse_scheme(ss_src.scheme), ss_src.pump, ss_src.power);
    auto opts = ss_src.purity();
    opts.samples = ss_samples;
    const auto range = parse_range(ss_bw, "--bw");
    json summary = {{"point", point_json(point)}, {"bw_range_nm", {range.first, range.second}},
                    {"samples", ss_samples},      {"grid", ss_src.grid},
                    {"filters", filter_json(ss_src)}};
    std::ostringstream csv;
    if (!ss_lengths.empty()) {
      const auto scan = scan_length(f, point, split_numbers(ss_lengths, ',', "--lengths"), range, opts);
      write_length_scan_csv(csv, scan);
      json rows = json::array();
      for (const auto& r : scan.rows)
        rows.push_back({{"length_m", r.length_m}, {"K_min", r9(r.K_min)}, {"bw_opt_nm", r9(r.bw_opt_nm)},
                        {"boundary", r.boundary}});
      summary["rows"] = rows;
      summary["K_strictly_decreasing"] = scan.K_strictly_decreasing;
      summary["bw_strictly_decreasing"] = scan.bw_strictly_decreasing;
      emit(g, "length_scan.csv", csv.str(), "length_scan_summary.json", summary);
    } else {
      const auto r = optimize_pump_bandwidth(f, point, f.length_m, range, opts);
      write_bandwidth_scan_csv(csv, r);
      summary["length_m"] = f.length_m;
      summary["K_min"] = r9(r.K_min);
      summary["bw_opt_nm"] = r9(r.argmin);
      summary["purity"] = r9(1.0 / r.K_min);
      summary["boundary"] = r.boundary;
      emit(g, "schmidt_scan.csv", csv.str(), "schmidt_scan_summary.json", summary);
    }
    return 0;
  }

  if (hm->parsed()) {
    const FibreSpec f = source(hm_src);
    const auto point = require_point(f, parse_scheme(hm_src.scheme), hm_src.pump, hm_src.power);
    const auto jsa = purity_jsa(f, point, f.length_m, hm_fwhm, hm_src.purity());
    std::vector<double> taus;
    for (double t : sweep_values(parse_sweep(hm_delays, "--delays"))) taus.push_back(t * 1e-12);
    const auto dip = hom_dip_profile(jsa, jsa, taus);
    const double V = hom_visibility(jsa, jsa);
    std::ostringstream csv;
    write_dip_csv(csv, dip);
    json summary = {{"point", point_json(point)}, {"length_m", f.length_m},   {"pump_fwhm_nm", hm_fwhm},
                    {"filters", filter_json(hm_src)}, {"visibility", r9(V)}, {"K", r9(1.0 / V)}};
    emit(g, "hom_dip.csv", csv.str(), "hom_summary.json", summary);
    return 0;
  }

  const auto& canon = canonical_settings();
  const std::vector<MeasurementSetting> settings(canon.begin(), canon.end());

  if (tsim->parsed()) {
    const auto rho = project_to_physical(density_from_json(read_text(tsim_state)));
    const auto rec = simulate_counts(rho, settings, tsim_n, g.seed);
    std::ostringstream csv;
    write_record_csv(csv, rec);
    emit(g, "record.csv", csv.str(), "", json());
    return 0;
  }

  auto metrics_json = [](const StateMetrics& m) {
    return json{{"fidelity_phi_plus", r9(m.fidelity)},
                {"concurrence", r9(m.concurrence)},
                {"tangle", r9(m.tangle)},
                {"linear_entropy", r9(m.linear_entropy)},
                {"purity", r9(m.purity)}};
  };

  if (trec->parsed()) {
    std::istringstream in(read_text(trec_file));
    const auto rec = read_record_csv(in);
    MleOptions opts;
    if (trec_like == "gaussian") opts.likelihood = Likelihood::gaussian;
    else if (trec_like != "poisson") throw ConfigError("--likelihood must be poisson or gaussian");
    opts.seed = g.seed;
    const auto fit = mle_reconstruct(rec, opts);
    json j = {{"state", json::parse(density_to_json(fit.rho))},
              {"metrics", metrics_json(metrics(fit.rho))},
              {"nll", r9(fit.nll)},
              {"evaluations", fit.evaluations},
              {"converged", fit.converged},
              {"warning", fit.warning},
              {"linear_unphysical", fit.linear_unphysical},
              {"custom_settings", rec.custom}};
    if (trec_boot > 0) {
      const auto eb = error_bars(rec, trec_boot, g.seed, opts);
      auto spread = [](const MetricSpread& s) { return json{{"mean", r9(s.mean)}, {"std", r9(s.stddev)}}; };
      j["bootstrap"] = {{"resamples", eb.resamples},
                        {"nonconverged", eb.nonconverged},
                        {"fidelity_phi_plus", spread(eb.fidelity)},
                        {"concurrence", spread(eb.concurrence)},
                        {"tangle", spread(eb.tangle)},
                        {"linear_entropy", spread(eb.linear_entropy)}};
    }
    if (!g.out_dir.empty()) write_file(g, "state.json", density_to_json(fit.rho) + "\n");
    emit_json(g, "reconstruct_summary.json", j);
    return 0;
  }

  if (tmet->parsed()) {
    const auto raw = density_from_json(read_text(tmet_state));
    const auto rho = project_to_physical(raw);
    json j = metrics_json(metrics(rho));
    j["raw_min_eigenvalue"] = r9(min_eigenvalue(raw));
    j["projected"] = min_eigenvalue(raw) < 0.0 || std::abs(raw.trace().real() - 1.0) > 1e-12;
    emit_json(g, "metrics.json", j);
    return 0;
  }

  if (tfr->parsed()) {
    FringeBasis basis;
    if (tfr_basis == "HV") basis = FringeBasis::HV;
    else if (tfr_basis == "DA") basis = FringeBasis::DA;
    else throw ConfigError("--basis must be HV or DA");
    if (tfr_steps < 2) throw ConfigError("--steps must be at least 2");
    const auto rho = project_to_physical(density_from_json(read_text(tfr_state)));
    const auto scan = fringe_scan(rho, basis, sweep_values({0.0, 90.0, tfr_steps}));
    std::ostringstream csv;
    write_csv_header(csv, {"signal_hwp_deg", "probability"});
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : scan) {
      write_csv_row(csv, {s.theta_deg, s.probability});
      pts.emplace_back(s.theta_deg, s.probability);
    }
    const auto fit = visibility(pts);
    json summary = {{"basis", tfr_basis},
                    {"visibility", r9(fit.visibility)},
                    {"residual_rms", r9(fit.residual_rms)},
                    {"raw_extrema", fit.raw_extrema}};
    emit(g, "fringe.csv", csv.str(), "fringe_summary.json", summary);
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

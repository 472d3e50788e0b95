#include "pcfpair/fibre.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pcfpair/errors.hpp"

#ifndef PCFPAIR_PRESET_DIR_DEFAULT
#define PCFPAIR_PRESET_DIR_DEFAULT "data/presets"
#endif

namespace pcfpair {

std::pair<double, double> FibreSpec::range_nm() const {
  const auto [a0, a1] = valid_range(slow_axis);
  const auto [b0, b1] = valid_range(fast_axis);
  return {std::max(a0, b0), std::min(a1, b1)};
}

void FibreSpec::validate() const {
  if (!(length_m > 0.0)) throw ConfigError("fibre length must be positive");
  if (!(n2_m2_per_W > 0.0)) throw ConfigError("n2 must be positive");
  if (!(aeff_m2 > 0.0)) throw ConfigError("A_eff must be positive");
  const auto [lo, hi] = range_nm();
  if (!(hi > lo)) throw ConfigError("slow and fast axis ranges do not overlap");
  constexpr int kSamples = 200;
  for (int k = 0; k <= kSamples; ++k) {
    const double l = lo + (hi - lo) * k / kSamples;
    if (phase_index(slow_axis, l) < phase_index(fast_axis, l))
      throw ConfigError("slow-axis index below fast-axis index at " + std::to_string(l) + " nm");
  }
}

FibreSpec FibreSpec::with_length(double L) const {
  FibreSpec f = *this;
  f.length_m = L;
  return f;
}

FibreSpec parse_preset(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("preset is not valid JSON: ") + e.what());
  }
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ConfigError(std::string("preset missing field '") + key + "'");
    return j.at(key);
  };
  try {
    const auto& s = need("sellmeier");
    const auto B = s.at("B").get<std::vector<double>>();
    const auto C = s.at("C_um2").get<std::vector<double>>();
    if (B.size() != C.size()) throw ConfigError("sellmeier B and C_um2 differ in length");
    const auto range = need("valid_range_nm").get<std::vector<double>>();
    if (range.size() != 2) throw ConfigError("valid_range_nm must have two entries");
    std::vector<SellmeierTerm> terms;
    for (std::size_t i = 0; i < B.size(); ++i) terms.push_back({B[i], C[i]});
    SellmeierModel base(terms, range[0], range[1]);

    Polynomial wg{need("waveguide_poly").get<std::vector<double>>()};
    Polynomial bi{need("birefringence_poly").get<std::vector<double>>()};

    FibreSpec f{AxisModel{base, wg, bi}, AxisModel{base, wg, {}}, 0.4, 2e-20, 4e-12, "", ""};
    f.length_m = need("length_m").get<double>();
    f.n2_m2_per_W = need("n2_m2_per_W").get<double>();
    f.aeff_m2 = need("Aeff_m2").get<double>();
    f.preset_name = need("name").get<std::string>();
    f.description = j.value("description", "");
    f.validate();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("preset field has the wrong type: ") + e.what());
  }
}

FibreSpec load_preset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open preset " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_preset(ss.str());
}

std::filesystem::path default_preset_dir() {
  if (const char* env = std::getenv("PCFPAIR_PRESET_DIR"); env && *env) return env;
  return PCFPAIR_PRESET_DIR_DEFAULT;
}

FibreSpec resolve_preset(const std::string& name_or_path, const std::filesystem::path& dir) {
  std::filesystem::path p(name_or_path);
  if (p.extension() == ".json" || std::filesystem::exists(p)) return load_preset(p);
  const auto candidate = dir / (name_or_path + ".json");
  if (!std::filesystem::exists(candidate))
    throw ConfigError("unknown preset '" + name_or_path + "' (looked in " + dir.string() + ")");
  return load_preset(candidate);
}

std::vector<std::filesystem::path> list_presets(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(dir, ec))
    if (e.path().extension() == ".json") out.push_back(e.path());
  if (ec) throw ConfigError("cannot read preset directory " + dir.string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pcfpair

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pcfpair/dispersion.hpp"

namespace pcfpair {

struct FibreSpec {
  DispersionModel slow_axis;
  DispersionModel fast_axis;
  double length_m = 0.4;
  double n2_m2_per_W = 2e-20;
  double aeff_m2 = 4e-12;
  std::string preset_name;
  std::string description;

  /// Overlap of the two axes' valid ranges.
  std::pair<double, double> range_nm() const;

  /// Checks L, n2, A_eff > 0 and slow ≥ fast index across the range.
  void validate() const;

  FibreSpec with_length(double L) const;
};

FibreSpec parse_preset(const std::string& json_text);
FibreSpec load_preset(const std::filesystem::path& path);

/// PCFPAIR_PRESET_DIR if set, otherwise the directory shipped with the sources.
std::filesystem::path default_preset_dir();

/// Accepts a path to a JSON file or a bare preset name looked up in `dir`.
FibreSpec resolve_preset(const std::string& name_or_path, const std::filesystem::path& dir);

std::vector<std::filesystem::path> list_presets(const std::filesystem::path& dir);

}  // namespace pcfpair

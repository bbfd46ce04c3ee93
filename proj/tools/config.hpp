#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace randcrit::cli {

// Everything a run depends on. Flags and --config files fill the same
// struct; to_json(cfg) is what summary.json echoes back.
struct ExperimentConfig {
  std::string command;

  std::string ensemble = "kostlan";
  std::vector<int> degrees = {20};
  double grid_min = -3.0, grid_max = 3.0;
  int grid_n = 60;

  std::string model = "cubic";
  double kappa = 6.0;
  double x0 = -0.4, x1 = 0.4, y0 = 0.8, y1 = 1.6;

  double zmax = 3.0;
  long long lmax = 150;
  int box = 20;
  int start_grid = 3;
  bool prefilter = true;
  int flux_sign = 1;
  double box_radius = 0.0;  // 0: use the required radius
  int bins = 20;

  long long samples = 10000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: RANDCRIT_THREADS or 1
  std::string out = ".";
};

nlohmann::ordered_json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Checks module preconditions without computing anything; throws
// randcrit::Error(InvalidConfig, ...).
void validate(const ExperimentConfig& c);

// FNV-1a over the canonical JSON with `threads` and `out` removed, so the
// hash (and every artifact embedding it) is independent of both.
std::string config_hash(const ExperimentConfig& c);

// "a:b:n" and "x0:x1:y0:y1"
void parse_grid(const std::string& s, ExperimentConfig& c);
void parse_region(const std::string& s, ExperimentConfig& c);

}  // namespace randcrit::cli

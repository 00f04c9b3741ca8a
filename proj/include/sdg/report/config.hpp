#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sdg/dynamics.hpp"
#include "sdg/tsne.hpp"

namespace sdg::report {

/// Figure palettes. Year gradient runs dark red (first year) to light blue (last).
struct Palette {
  std::string year_start = "#8b0000";
  std::string year_end = "#9ecae1";
  std::vector<std::string> clusters = {"#d62728", "#8c564b", "#2ca02c", "#9467bd", "#ff9896", "#1f77b4",
                                       "#e377c2", "#bcbd22", "#17becf", "#ff7f0e"};
  std::string noise = "#9e9e9e";
};

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path gdp;  // optional
  std::filesystem::path output_dir = "out";

  int pca_components = 10;
  double perplexity = 50.0;
  int tsne_dims = 2;
  std::uint64_t seed = 42;
  tsne::Schedule schedule;

  /// Unset selects eps from the grid scan (dbscan::select_eps).
  std::optional<double> dbscan_eps;
  int dbscan_min_pts = 5;
  double eps_grid_min = 0.5;
  double eps_grid_max = 10.0;
  int eps_grid_steps = 39;
  double max_noise_fraction = 0.02;

  std::set<int> fit_excluded_years = dynamics::default_excluded_years();
  dynamics::RootRounding attainment_rounding = dynamics::RootRounding::Ceil;
  std::vector<int> density_years = {2000, 2010, 2020};
  int extrapolate_to = 2100;
  bool correlation_per_year = false;

  /// OpenMP threads; 0 keeps the runtime default.
  int threads = 0;
  Palette palette;

  void validate() const;
};

/// Sets one field from its key=value text form. Throws ConfigError.
void apply_setting(PipelineConfig& config, const std::string& key, const std::string& value);

/// Flat key=value file; lines starting with '#' are comments. Throws
/// FileNotFound, ConfigError.
PipelineConfig load_config(const std::filesystem::path& path);
void apply_file(PipelineConfig& config, const std::filesystem::path& path);

/// Canonical key -> value snapshot (every field, sorted keys).
std::map<std::string, std::string> snapshot(const PipelineConfig& config);
/// snapshot() rendered back as a config file; load_config(to_text(c)) == c.
std::string to_text(const PipelineConfig& config);

std::vector<std::string> setting_keys();

}  // namespace sdg::report

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sdg/report/artifacts.hpp"
#include "sdg/report/config.hpp"

namespace sdg::report {

struct FigureOptions {
  Palette palette;
  std::vector<int> density_years = {2000, 2010, 2020};
  int extrapolate_to = 2100;
  int target_year = 2030;

  static FigureOptions from(const PipelineConfig& config);
};

namespace figure_files {
inline constexpr const char* kParallel = "fig_parallel_plot.svg";
inline constexpr const char* kPcaTrajectories = "fig_pca_trajectories.svg";
inline constexpr const char* kPcaBiplot = "fig_pca_biplot.svg";
inline constexpr const char* kTsneClusters = "fig_tsne_clusters.svg";
inline constexpr const char* kClusterProfiles = "fig_cluster_profiles.svg";
inline constexpr const char* kCorrelationGlobal = "fig_correlation_global.svg";
inline constexpr const char* kDensities = "fig_distance_densities.svg";
inline constexpr const char* kTrajectories = "fig_trajectories.svg";
std::string correlation_cluster(int cluster);
}  // namespace figure_files

/// Renders every figure from the artifact files in `dir` and writes the SVGs
/// next to them. Returns the written file names. Throws MissingArtifact.
std::vector<std::string> emit_figures(const std::filesystem::path& dir, const FigureOptions& options = {});
/// Same, reading from and writing through `sink` (its directory).
void emit_figures(ArtifactSink& sink, const FigureOptions& options);

// Individual renderers, returning SVG text. Each reads only artifact files.
std::string render_parallel_plot(const std::filesystem::path& dir, const FigureOptions& options);
std::string render_pca_trajectories(const std::filesystem::path& dir, const FigureOptions& options);
std::string render_pca_biplot(const std::filesystem::path& dir, const FigureOptions& options);
std::string render_tsne_clusters(const std::filesystem::path& dir, const FigureOptions& options);
std::string render_cluster_profiles(const std::filesystem::path& dir, const FigureOptions& options);
std::string render_correlation(const std::filesystem::path& dir, const std::string& artifact, const std::string& title);
std::string render_densities(const std::filesystem::path& dir, const FigureOptions& options);
std::string render_trajectories(const std::filesystem::path& dir, const FigureOptions& options);

/// Pixel geometry of the extrapolation panel of the trajectory figure.
struct TrajectoryPanelGeometry {
  double left, top, width, height;
  double year_lo, year_hi, distance_lo, distance_hi;
};
TrajectoryPanelGeometry extrapolation_panel_geometry(const std::filesystem::path& dir, const FigureOptions& options);

}  // namespace sdg::report

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sdg/csv.hpp"
#include "sdg/dbscan.hpp"
#include "sdg/dynamics.hpp"
#include "sdg/ingest.hpp"
#include "sdg/pca.hpp"
#include "sdg/stats.hpp"
#include "sdg/tsne.hpp"

namespace sdg::report {

// Artifact file names inside the output directory.
namespace files {
inline constexpr const char* kPanel = "panel_filtered.csv";
inline constexpr const char* kMoments = "moments.csv";
inline constexpr const char* kStandardized = "standardized.csv";
inline constexpr const char* kYearlyMeans = "yearly_means.csv";
inline constexpr const char* kIngestSummary = "ingest_summary.json";
inline constexpr const char* kPcaModel = "pca_model.json";
inline constexpr const char* kProjection = "projection.csv";
inline constexpr const char* kLoadings = "loadings.csv";
inline constexpr const char* kIdealPoint = "ideal_point.csv";
inline constexpr const char* kEmbedding = "embedding.csv";
inline constexpr const char* kKlHistory = "kl_history.csv";
inline constexpr const char* kEpsScan = "eps_scan.csv";
inline constexpr const char* kLabels = "labels.csv";
inline constexpr const char* kSwitches = "switches.csv";
inline constexpr const char* kCountryClusters = "country_clusters.csv";
inline constexpr const char* kClusterGdp = "cluster_gdp.csv";
inline constexpr const char* kClusterStandardized = "cluster_standardized.csv";
inline constexpr const char* kCorrelationGlobal = "correlation_global.csv";
inline constexpr const char* kDistances = "distances.csv";
inline constexpr const char* kTrajectories = "trajectories.csv";
inline constexpr const char* kFits = "fits.json";
inline constexpr const char* kManifest = "manifest.json";

std::string correlation_cluster(int cluster);
std::string correlation_year(int year);
}  // namespace files

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t file_checksum(const std::filesystem::path& path);
std::string hex64(std::uint64_t value);

/// Writes artifacts into one directory and remembers what it wrote, so a
/// failed run can remove its partial output. A disabled sink writes nothing.
class ArtifactSink {
 public:
  explicit ArtifactSink(std::filesystem::path dir, bool enabled = true);

  void write(const std::string& name, const std::string& content);
  const std::vector<std::string>& written() const { return written_; }
  const std::filesystem::path& dir() const { return dir_; }
  bool enabled() const { return enabled_; }
  void remove_written();

 private:
  std::filesystem::path dir_;
  bool enabled_;
  std::vector<std::string> written_;
};

// Formatters. Numbers use 6 fixed decimals; correlations use 4.

std::string panel_csv(const ScorePanel& panel);
std::string moments_csv(const std::vector<GoalMoments>& moments);
std::string yearly_means_csv(const YearlyGoalMeans& means);
std::string keyed_matrix_csv(const std::vector<ObservationKey>& keys, const Matrix& values,
                             const std::vector<std::string>& columns);
std::string loadings_csv(const std::vector<pca::Loading>& loadings);
std::string kl_history_csv(const std::vector<tsne::KlRecord>& history);
std::string labels_csv(const std::vector<ObservationKey>& keys, const std::vector<int>& labels);
std::string eps_scan_csv(const std::vector<dbscan::EpsScanRow>& rows);
std::string switches_csv(const std::vector<dbscan::SwitchEvent>& events);
std::string correlation_csv(const stats::CorrelationMatrix& matrix);

std::vector<std::string> goal_columns();
std::vector<std::string> numbered_columns(const std::string& prefix, int count);

// Readers. Missing files raise MissingArtifact(name).

csv::Table read_artifact(const std::filesystem::path& dir, const std::string& name);

struct KeyedMatrix {
  std::vector<ObservationKey> keys;
  std::vector<std::string> columns;
  Matrix values;
};

/// country,year followed by numeric columns.
KeyedMatrix read_keyed_matrix(const std::filesystem::path& dir, const std::string& name);

struct LabelsArtifact {
  std::vector<ObservationKey> keys;
  std::vector<int> labels;
};

LabelsArtifact read_labels(const std::filesystem::path& dir);

/// Rows must match `expected` exactly (same keys, same order).
std::vector<int> align_labels(const LabelsArtifact& labels, const std::vector<ObservationKey>& expected);

}  // namespace sdg::report

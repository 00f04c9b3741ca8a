#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sdg/error.hpp"
#include "sdg/report/config.hpp"

namespace sdg::report {

enum class Stage { Ingest, Pca, Tsne, Cluster, Correlate, Dynamics, Figures };

std::string stage_name(Stage stage);
/// Process exit code for a failure in `stage` (10..16).
int exit_code(Stage stage);

/// First failing stage plus the underlying message.
class StageError : public Error {
 public:
  StageError(Stage stage, const std::string& cause)
      : Error(stage_name(stage) + " stage failed: " + cause), stage_(stage), cause_(cause) {}
  Stage stage() const { return stage_; }
  const std::string& cause() const { return cause_; }

 private:
  Stage stage_;
  std::string cause_;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunManifest {
  std::map<std::string, std::string> config;
  std::string config_checksum;
  std::map<std::string, std::string> inputs;   // path -> fnv1a64 hex
  std::vector<StageTiming> timings;
  std::map<std::string, std::string> outputs;  // file name -> fnv1a64 hex
  std::vector<std::string> warnings;
  nlohmann::json summary = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// Runs `stages` in pipeline order. Upstream stages that are not requested
/// are recomputed in memory without writing, except that cluster and later
/// stages read the embedding and labels artifacts from the output directory.
/// Writes manifest.json. On failure removes the files written by this call
/// and throws StageError.
RunManifest run_stages(const PipelineConfig& config, const std::vector<Stage>& stages);

/// Every stage including figures.
RunManifest run_pipeline(const PipelineConfig& config);

/// Reads embedding.csv and writes eps_scan.csv with the selected eps in the
/// manifest summary. Never clusters.
RunManifest scan_eps_only(const PipelineConfig& config);

}  // namespace sdg::report

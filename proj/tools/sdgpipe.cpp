// sdgpipe: command-line driver for the SDG clustering pipeline.
#include <algorithm>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdg/error.hpp"
#include "sdg/report/config.hpp"
#include "sdg/report/figures.hpp"
#include "sdg/report/pipeline.hpp"

namespace {

using sdg::report::Stage;

constexpr int kUsageError = 2;

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

void print_summary(const sdg::report::RunManifest& manifest, const sdg::report::PipelineConfig& config) {
  std::cout << "wrote " << manifest.outputs.size() << " files to " << config.output_dir.string() << "\n";
  for (const auto& key : {"countries_after", "eps", "clusters", "noise_points", "selected_eps", "kl_final"})
    if (manifest.summary.contains(key)) std::cout << "  " << key << ": " << manifest.summary.at(key).dump() << "\n";
  for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised clustering pipeline for SDG country-year score panels"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
  app.add_option("-c,--config", config_file, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", sets, "Override one setting, key=value (repeatable)");
  for (const auto& key : sdg::report::setting_keys())
    app.add_option(flag_name(key), flags[key], "Config setting '" + key + "'");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"ingest", "Load, filter and standardize the panel"},
      {"pca", "Fit PCA and write projection and loadings"},
      {"tsne", "Embed the principal components with t-SNE"},
      {"cluster", "Run DBSCAN on embedding.csv"},
      {"correlate", "Goal correlation matrices, global and per cluster"},
      {"dynamics", "Distance-to-ideal distributions and trajectory fits"},
      {"all", "Every stage followed by the figures"},
      {"figures", "Render SVG figures from existing artifacts"},
      {"scan-eps", "Tabulate cluster count and noise over the eps grid"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  sdg::report::PipelineConfig config;
  try {
    if (!config_file.empty()) sdg::report::apply_file(config, config_file);
    for (const auto& key : sdg::report::setting_keys())
      if (app.count(flag_name(key))) sdg::report::apply_setting(config, key, flags[key]);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw sdg::ConfigError("--set expects key=value, got '" + s + "'");
      sdg::report::apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
    }
    config.validate();
  } catch (const sdg::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    sdg::report::RunManifest manifest;
    if (command == "all") {
      manifest = sdg::report::run_pipeline(config);
    } else if (command == "scan-eps") {
      manifest = sdg::report::scan_eps_only(config);
    } else {
      static const std::map<std::string, Stage> stages = {
          {"ingest", Stage::Ingest},       {"pca", Stage::Pca},           {"tsne", Stage::Tsne},
          {"cluster", Stage::Cluster},     {"correlate", Stage::Correlate}, {"dynamics", Stage::Dynamics},
          {"figures", Stage::Figures}};
      manifest = sdg::report::run_stages(config, {stages.at(command)});
    }
    print_summary(manifest, config);
  } catch (const sdg::report::StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sdg::report::exit_code(e.stage());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

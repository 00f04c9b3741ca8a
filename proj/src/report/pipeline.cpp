#include "sdg/report/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>

#include "sdg/dbscan.hpp"
#include "sdg/dynamics.hpp"
#include "sdg/ingest.hpp"
#include "sdg/kernels.hpp"
#include "sdg/pca.hpp"
#include "sdg/report/artifacts.hpp"
#include "sdg/report/figures.hpp"
#include "sdg/stats.hpp"
#include "sdg/tsne.hpp"

namespace sdg::report {

std::string stage_name(Stage stage) {
  switch (stage) {
    case Stage::Ingest: return "ingest";
    case Stage::Pca: return "pca";
    case Stage::Tsne: return "tsne";
    case Stage::Cluster: return "cluster";
    case Stage::Correlate: return "correlate";
    case Stage::Dynamics: return "dynamics";
    case Stage::Figures: return "figures";
  }
  return "unknown";
}

int exit_code(Stage stage) { return 10 + static_cast<int>(stage); }

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["config"] = config;
  j["config_checksum"] = config_checksum;
  j["inputs"] = inputs;
  j["timings"] = nlohmann::json::array();
  for (const auto& t : timings) j["timings"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  j["outputs"] = outputs;
  j["warnings"] = warnings;
  j["summary"] = summary;
  return j;
}

namespace {

struct IngestResult {
  ScorePanel raw;
  ScorePanel panel;
  StandardizedPanel z;
  YearlyGoalMeans means;
  std::optional<GdpTable> gdp;
};

struct PcaResult {
  pca::PcaModel model;
  Matrix projection;
};

struct ClusterResult {
  std::vector<int> labels;
  dynamics::Membership membership;
};

class Run {
 public:
  explicit Run(const PipelineConfig& config) : config_(config), sink_(config.output_dir) {}

  RunManifest& manifest() { return manifest_; }
  ArtifactSink& sink() { return sink_; }
  const PipelineConfig& config() const { return config_; }

  template <typename F>
  auto stage(Stage s, F&& body) -> decltype(body()) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(body())>) {
        body();
        record(s, start);
      } else {
        auto out = body();
        record(s, start);
        return out;
      }
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(s, e.what());
    }
  }

  void warn(std::string message) { manifest_.warnings.push_back(std::move(message)); }

  IngestResult ingest(bool write);
  PcaResult pca(const IngestResult& in, bool write);
  void tsne(const PcaResult& p, const IngestResult& in);
  ClusterResult cluster(const IngestResult& in);
  ClusterResult read_clusters(const IngestResult& in);
  void correlate(const IngestResult& in, const ClusterResult& c);
  void dynamics(const IngestResult& in, const ClusterResult& c);
  void figures();
  void scan(const IngestResult& in);

  void finish();

 private:
  void record(Stage s, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
    manifest_.timings.push_back({stage_name(s), d.count()});
  }

  Matrix read_embedding(const IngestResult& in);

  const PipelineConfig& config_;
  ArtifactSink sink_;
  RunManifest manifest_;
};

IngestResult Run::ingest(bool write) {
  IngestResult r;
  r.raw = load_panel(config_.input);
  r.panel = filter_complete(r.raw);
  r.z = standardize(r.panel);
  r.means = yearly_goal_means(r.panel);
  if (!config_.gdp.empty()) r.gdp = load_gdp(config_.gdp);

  std::vector<std::string> dropped;
  std::set_difference(r.raw.countries().begin(), r.raw.countries().end(), r.panel.countries().begin(),
                      r.panel.countries().end(), std::back_inserter(dropped));
  manifest_.summary["countries_before"] = r.raw.countries().size();
  manifest_.summary["countries_after"] = r.panel.countries().size();
  manifest_.summary["observations"] = r.panel.size();
  if (!write) return r;

  nlohmann::json summary;
  summary["countries_before"] = r.raw.countries().size();
  summary["countries_after"] = r.panel.countries().size();
  summary["observations"] = r.panel.size();
  summary["years"] = r.panel.years();
  summary["dropped_countries"] = dropped;
  sink_.write(files::kPanel, panel_csv(r.panel));
  sink_.write(files::kMoments, moments_csv(r.z.moments));
  sink_.write(files::kStandardized, keyed_matrix_csv(r.z.keys, r.z.z, goal_columns()));
  sink_.write(files::kYearlyMeans, yearly_means_csv(r.means));
  sink_.write(files::kIngestSummary, summary.dump(2) + "\n");
  return r;
}

PcaResult Run::pca(const IngestResult& in, bool write) {
  PcaResult r;
  r.model = pca::fit(in.z, config_.pca_components);
  r.projection = pca::project(r.model, in.z);
  double cumulative = 0.0;
  for (Eigen::Index i = 0; i < r.model.explained_variance_ratio.size(); ++i)
    cumulative += r.model.explained_variance_ratio[i];
  manifest_.summary["pca_explained_ratio"] =
      std::vector<double>(r.model.explained_variance_ratio.data(),
                          r.model.explained_variance_ratio.data() + r.model.explained_variance_ratio.size());
  manifest_.summary["pca_cumulative_ratio"] = cumulative;
  if (!write) return r;

  ScoreVector ideal;
  ideal.fill(100.0);
  const Vector ideal_pc = pca::project_point(r.model, standardize_scores(ideal, in.z.moments));
  const auto pcs = numbered_columns("pc", r.model.k());
  std::string ideal_csv;
  for (std::size_t i = 0; i < pcs.size(); ++i) ideal_csv += (i ? "," : "") + pcs[i];
  ideal_csv += '\n';
  for (Eigen::Index i = 0; i < ideal_pc.size(); ++i) ideal_csv += (i ? "," : "") + csv::fixed6(ideal_pc[i]);
  ideal_csv += '\n';

  sink_.write(files::kPcaModel, pca::to_json(r.model).dump(2) + "\n");
  sink_.write(files::kProjection, keyed_matrix_csv(in.z.keys, r.projection, pcs));
  if (r.model.k() >= 2) sink_.write(files::kLoadings, loadings_csv(pca::loadings(r.model)));
  sink_.write(files::kIdealPoint, ideal_csv);
  return r;
}

void Run::tsne(const PcaResult& p, const IngestResult& in) {
  const auto emb = tsne::run(p.projection, config_.perplexity, config_.tsne_dims, config_.seed, config_.schedule);
  sink_.write(files::kEmbedding, keyed_matrix_csv(in.z.keys, emb.y, numbered_columns("tsne", config_.tsne_dims)));
  sink_.write(files::kKlHistory, kl_history_csv(emb.history));
  if (!emb.history.empty()) manifest_.summary["kl_final"] = emb.history.back().kl;
}

Matrix Run::read_embedding(const IngestResult& in) {
  const auto emb = read_keyed_matrix(config_.output_dir, files::kEmbedding);
  if (emb.keys != in.z.keys)
    throw ShapeMismatch(std::string(files::kEmbedding) + " does not match the filtered panel; re-run the tsne stage");
  return emb.values;
}

void Run::scan(const IngestResult& in) {
  const Matrix y = read_embedding(in);
  const auto grid = dbscan::eps_grid(config_.eps_grid_min, config_.eps_grid_max, config_.eps_grid_steps);
  const auto rows = dbscan::scan_eps(y, grid, config_.dbscan_min_pts);
  sink_.write(files::kEpsScan, eps_scan_csv(rows));
  const auto eps = dbscan::select_eps(rows, config_.max_noise_fraction);
  manifest_.summary["selected_eps"] = eps ? nlohmann::json(*eps) : nlohmann::json(nullptr);
}

ClusterResult Run::cluster(const IngestResult& in) {
  const Matrix y = read_embedding(in);
  const auto grid = dbscan::eps_grid(config_.eps_grid_min, config_.eps_grid_max, config_.eps_grid_steps);
  const auto rows = dbscan::scan_eps(y, grid, config_.dbscan_min_pts);
  sink_.write(files::kEpsScan, eps_scan_csv(rows));

  double eps = 0.0;
  if (config_.dbscan_eps) {
    eps = *config_.dbscan_eps;
  } else if (auto chosen = dbscan::select_eps(rows, config_.max_noise_fraction)) {
    eps = *chosen;
  } else {
    // Fall back to the least noisy scanned value that still forms a cluster.
    const dbscan::EpsScanRow* best = nullptr;
    for (const auto& r : rows)
      if (r.n_clusters >= 1 && (!best || r.noise_fraction < best->noise_fraction)) best = &r;
    if (!best) throw EmptyResult("no eps in the scan grid forms a cluster");
    eps = best->eps;
    warn("no eps meets max_noise_fraction; using eps " + csv::fixed6(eps) + " with noise fraction " +
         csv::fixed6(best->noise_fraction));
  }

  const auto labels = dbscan::cluster(y, eps, config_.dbscan_min_pts);
  const auto switches = dbscan::detect_switches(labels.labels, in.z.keys);
  ClusterResult r{labels.labels, dbscan::final_membership(labels.labels, in.z.keys)};

  sink_.write(files::kLabels, labels_csv(in.z.keys, r.labels));
  sink_.write(files::kSwitches, switches_csv(switches));

  std::string cc = in.gdp ? "country,cluster,gdp_per_capita\n" : "country,cluster\n";
  std::map<int, std::vector<double>> gdp_by_cluster;
  for (const auto& [country, c] : r.membership) {
    cc += country + ',' + std::to_string(c);
    if (in.gdp) {
      auto it = in.gdp->find(country);
      cc += ',' + (it == in.gdp->end() ? std::string() : csv::fixed6(it->second));
      if (it != in.gdp->end()) gdp_by_cluster[c].push_back(it->second);
    }
    cc += '\n';
  }
  sink_.write(files::kCountryClusters, cc);
  if (in.gdp) {
    std::string out = "cluster,countries,mean_gdp_per_capita,median_gdp_per_capita\n";
    for (auto& [c, values] : gdp_by_cluster) {
      std::sort(values.begin(), values.end());
      double sum = 0.0;
      for (double v : values) sum += v;
      const std::size_t n = values.size();
      const double median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
      out += std::to_string(c) + ',' + std::to_string(n) + ',' + csv::fixed6(sum / n) + ',' + csv::fixed6(median) + '\n';
    }
    sink_.write(files::kClusterGdp, out);
  }

  try {
    const auto zc = standardize_within_cluster(in.panel, r.labels);
    sink_.write(files::kClusterStandardized, keyed_matrix_csv(zc.keys, zc.z, goal_columns()));
  } catch (const ZeroVariance& e) {
    warn(std::string("cluster_standardized skipped: ") + e.what());
  }

  int clusters = labels.cluster_count();
  manifest_.summary["eps"] = eps;
  manifest_.summary["clusters"] = clusters;
  manifest_.summary["noise_points"] = labels.noise_count();
  manifest_.summary["switch_events"] = switches.size();
  return r;
}

ClusterResult Run::read_clusters(const IngestResult& in) {
  const auto labels = align_labels(read_labels(config_.output_dir), in.z.keys);
  return {labels, dbscan::final_membership(labels, in.z.keys)};
}

std::set<int> member_clusters(const dynamics::Membership& m) {
  std::set<int> out;
  for (const auto& [country, c] : m)
    if (c != kNoise) out.insert(c);
  return out;
}

// Clusters seen in some year but holding no country in its final year.
std::set<int> transient_clusters(const ClusterResult& c) {
  const auto members = member_clusters(c.membership);
  std::set<int> out;
  for (int l : c.labels)
    if (l != kNoise && !members.count(l)) out.insert(l);
  return out;
}

void Run::correlate(const IngestResult& in, const ClusterResult& c) {
  sink_.write(files::kCorrelationGlobal, correlation_csv(stats::pearson_matrix(in.panel)));
  for (int cl : member_clusters(c.membership)) {
    try {
      sink_.write(files::correlation_cluster(cl), correlation_csv(stats::pearson_matrix(in.panel, c.membership, cl)));
    } catch (const Error& e) {
      warn("correlation for cluster " + std::to_string(cl) + " skipped: " + e.what());
    }
  }
  for (int cl : transient_clusters(c))
    warn("correlation for cluster " + std::to_string(cl) + " skipped: no country ends in it");
  if (config_.correlation_per_year) {
    for (const auto& [year, m] : stats::pearson_by_year(in.panel)) sink_.write(files::correlation_year(year), correlation_csv(m));
  }
}

void Run::dynamics(const IngestResult& in, const ClusterResult& c) {
  const auto distances = dynamics::distance_series(in.panel);
  const auto keys = in.panel.keys();
  std::string dist = "country,year,cluster,distance\n";
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto it = c.membership.find(keys[i].country);
    dist += keys[i].country + ',' + std::to_string(keys[i].year) + ',' + std::to_string(it->second) + ',' +
            csv::fixed6(distances[i]) + '\n';
  }
  sink_.write(files::kDistances, dist);

  std::string traj = "cluster,year,members,mean,std,degenerate\n";
  nlohmann::json fits = nlohmann::json::array();
  const int last_year = in.panel.years().empty() ? 0 : in.panel.years().back();
  for (int cl : transient_clusters(c))
    warn("trajectory for cluster " + std::to_string(cl) + " skipped: no country ends in it");
  for (int cl : member_clusters(c.membership)) {
    for (int year : in.panel.years()) {
      dynamics::GaussianFit g;
      try {
        g = dynamics::cluster_distance_distribution(in.panel, c.membership, cl, year).fit;
      } catch (const TooFewMembers&) {
        // A one-country cluster still has a trajectory; it just has no spread.
        const auto idx = std::find_if(keys.begin(), keys.end(), [&](const ObservationKey& k) {
          auto it = c.membership.find(k.country);
          return k.year == year && it != c.membership.end() && it->second == cl;
        });
        if (idx == keys.end()) continue;
        g.mean = distances[static_cast<std::size_t>(idx - keys.begin())];
        g.std = 0.0;
        g.members = 1;
        g.degenerate = true;
      }
      traj += std::to_string(cl) + ',' + std::to_string(year) + ',' + std::to_string(g.members) + ',' +
              csv::fixed6(g.mean) + ',' + csv::fixed6(g.std) + ',' + (g.degenerate ? "1" : "0") + '\n';
    }
    try {
      auto fit = dynamics::fit_trajectory(dynamics::displacement_curve(in.panel, c.membership, cl),
                                          config_.fit_excluded_years);
      fit.root = dynamics::zero_crossing(fit.a, fit.b, fit.c, last_year);
      fit.attainment_year = dynamics::attainment_year(fit, last_year, config_.attainment_rounding);
      nlohmann::json f;
      f["cluster"] = cl;
      f["a"] = fit.a;
      f["b"] = fit.b;
      f["c"] = fit.c;
      f["rms"] = fit.rms;
      f["root"] = fit.root ? nlohmann::json(*fit.root) : nlohmann::json(nullptr);
      f["attainment_year"] = fit.attainment_year ? nlohmann::json(*fit.attainment_year) : nlohmann::json(nullptr);
      f["excluded_years"] = fit.excluded_years;
      f["fitted_years"] = fit.fitted_years;
      fits.push_back(f);
    } catch (const SingularFit& e) {
      warn("trajectory fit for cluster " + std::to_string(cl) + " skipped: " + e.what());
    }
  }
  sink_.write(files::kTrajectories, traj);
  sink_.write(files::kFits, fits.dump(2) + "\n");
}

void Run::figures() {
  emit_figures(sink_, FigureOptions::from(config_));
}

void Run::finish() {
  manifest_.config = snapshot(config_);
  manifest_.config_checksum = hex64(fnv1a64(to_text(config_)));
  manifest_.inputs[config_.input.string()] = hex64(file_checksum(config_.input));
  if (!config_.gdp.empty()) manifest_.inputs[config_.gdp.string()] = hex64(file_checksum(config_.gdp));
  for (const auto& name : sink_.written()) manifest_.outputs[name] = hex64(file_checksum(config_.output_dir / name));
  sink_.write(files::kManifest, manifest_.to_json().dump(2) + "\n");
}

bool wants(const std::vector<Stage>& stages, Stage s) { return std::find(stages.begin(), stages.end(), s) != stages.end(); }

}  // namespace

RunManifest run_stages(const PipelineConfig& config, const std::vector<Stage>& stages) {
  config.validate();
  kernels::set_threads(config.threads);
  Run run(config);
  try {
    const bool need_ingest = std::any_of(stages.begin(), stages.end(), [](Stage s) { return s != Stage::Figures; });
    std::optional<IngestResult> in;
    if (need_ingest) in = run.stage(Stage::Ingest, [&] { return run.ingest(wants(stages, Stage::Ingest)); });

    if (wants(stages, Stage::Pca) || wants(stages, Stage::Tsne)) {
      auto p = run.stage(Stage::Pca, [&] { return run.pca(*in, wants(stages, Stage::Pca)); });
      if (wants(stages, Stage::Tsne)) run.stage(Stage::Tsne, [&] { run.tsne(p, *in); });
    }

    std::optional<ClusterResult> clusters;
    if (wants(stages, Stage::Cluster)) {
      clusters = run.stage(Stage::Cluster, [&] { return run.cluster(*in); });
    } else if (wants(stages, Stage::Correlate) || wants(stages, Stage::Dynamics)) {
      const Stage first = wants(stages, Stage::Correlate) ? Stage::Correlate : Stage::Dynamics;
      clusters = run.stage(first, [&] { return run.read_clusters(*in); });
    }
    if (wants(stages, Stage::Correlate)) run.stage(Stage::Correlate, [&] { run.correlate(*in, *clusters); });
    if (wants(stages, Stage::Dynamics)) run.stage(Stage::Dynamics, [&] { run.dynamics(*in, *clusters); });
    if (wants(stages, Stage::Figures)) run.stage(Stage::Figures, [&] { run.figures(); });
    run.finish();
  } catch (const StageError&) {
    run.sink().remove_written();
    throw;
  } catch (...) {
    run.sink().remove_written();
    throw;
  }
  return run.manifest();
}

RunManifest run_pipeline(const PipelineConfig& config) {
  return run_stages(config, {Stage::Ingest, Stage::Pca, Stage::Tsne, Stage::Cluster, Stage::Correlate,
                             Stage::Dynamics, Stage::Figures});
}

RunManifest scan_eps_only(const PipelineConfig& config) {
  config.validate();
  kernels::set_threads(config.threads);
  Run run(config);
  try {
    auto in = run.stage(Stage::Ingest, [&] { return run.ingest(false); });
    run.stage(Stage::Cluster, [&] { run.scan(in); });
    run.finish();
  } catch (...) {
    run.sink().remove_written();
    throw;
  }
  return run.manifest();
}

}  // namespace sdg::report

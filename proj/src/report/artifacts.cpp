#include "sdg/report/artifacts.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "sdg/error.hpp"

namespace sdg::report {

namespace files {
std::string correlation_cluster(int cluster) { return "correlation_cluster_" + std::to_string(cluster) + ".csv"; }
std::string correlation_year(int year) { return "correlation_year_" + std::to_string(year) + ".csv"; }
}  // namespace files

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a64(bytes);
}

std::string hex64(std::uint64_t value) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

ArtifactSink::ArtifactSink(std::filesystem::path dir, bool enabled) : dir_(std::move(dir)), enabled_(enabled) {}

void ArtifactSink::write(const std::string& name, const std::string& content) {
  if (!enabled_) return;
  std::filesystem::create_directories(dir_);
  const auto path = dir_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
  if (std::find(written_.begin(), written_.end(), name) == written_.end()) written_.push_back(name);
}

void ArtifactSink::remove_written() {
  std::error_code ec;
  for (const auto& name : written_) std::filesystem::remove(dir_ / name, ec);
  written_.clear();
}

std::vector<std::string> goal_columns() { return PanelFormat::default_goal_columns(); }

std::vector<std::string> numbered_columns(const std::string& prefix, int count) {
  std::vector<std::string> out;
  for (int i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

namespace {

std::string header_line(const std::vector<std::string>& columns) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  return out + '\n';
}

}  // namespace

std::string panel_csv(const ScorePanel& panel) {
  std::vector<std::string> header = {"country", "year"};
  for (const auto& g : goal_columns()) header.push_back(g);
  std::string out = header_line(header);
  for (const auto& o : panel.observations()) {
    out += o.country + ',' + std::to_string(o.year);
    for (double s : o.scores) out += ',' + csv::fixed6(s);
    out += '\n';
  }
  return out;
}

std::string moments_csv(const std::vector<GoalMoments>& moments) {
  std::string out = "goal,mean,stddev\n";
  for (std::size_t g = 0; g < moments.size(); ++g)
    out += GoalId::from_column(g).column_name() + ',' + csv::fixed6(moments[g].mean) + ',' +
           csv::fixed6(moments[g].stddev) + '\n';
  return out;
}

std::string yearly_means_csv(const YearlyGoalMeans& means) {
  std::vector<std::string> header = {"year"};
  for (const auto& g : goal_columns()) header.push_back(g);
  std::string out = header_line(header);
  for (std::size_t y = 0; y < means.years.size(); ++y) {
    out += std::to_string(means.years[y]);
    for (Eigen::Index g = 0; g < means.means.cols(); ++g)
      out += ',' + csv::fixed6(means.means(static_cast<Eigen::Index>(y), g));
    out += '\n';
  }
  return out;
}

std::string keyed_matrix_csv(const std::vector<ObservationKey>& keys, const Matrix& values,
                             const std::vector<std::string>& columns) {
  if (static_cast<Eigen::Index>(keys.size()) != values.rows() ||
      static_cast<Eigen::Index>(columns.size()) != values.cols())
    throw ShapeMismatch("keyed matrix dimensions disagree with keys/columns");
  std::vector<std::string> header = {"country", "year"};
  header.insert(header.end(), columns.begin(), columns.end());
  std::string out = header_line(header);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out += keys[i].country + ',' + std::to_string(keys[i].year);
    for (Eigen::Index c = 0; c < values.cols(); ++c) out += ',' + csv::fixed6(values(static_cast<Eigen::Index>(i), c));
    out += '\n';
  }
  return out;
}

std::string loadings_csv(const std::vector<pca::Loading>& loadings) {
  std::string out = "goal,pc1,pc2\n";
  for (const auto& l : loadings) out += l.label + ',' + csv::fixed6(l.pc1) + ',' + csv::fixed6(l.pc2) + '\n';
  return out;
}

std::string kl_history_csv(const std::vector<tsne::KlRecord>& history) {
  std::string out = "iteration,kl\n";
  for (const auto& r : history) out += std::to_string(r.iteration) + ',' + csv::fixed6(r.kl) + '\n';
  return out;
}

std::string labels_csv(const std::vector<ObservationKey>& keys, const std::vector<int>& labels) {
  if (keys.size() != labels.size()) throw ShapeMismatch("labels and keys differ in length");
  std::string out = "country,year,cluster\n";
  for (std::size_t i = 0; i < keys.size(); ++i)
    out += keys[i].country + ',' + std::to_string(keys[i].year) + ',' + std::to_string(labels[i]) + '\n';
  return out;
}

std::string eps_scan_csv(const std::vector<dbscan::EpsScanRow>& rows) {
  std::string out = "eps,n_clusters,noise_fraction\n";
  for (const auto& r : rows)
    out += csv::fixed6(r.eps) + ',' + std::to_string(r.n_clusters) + ',' + csv::fixed6(r.noise_fraction) + '\n';
  return out;
}

std::string switches_csv(const std::vector<dbscan::SwitchEvent>& events) {
  std::string out = "country,from_cluster,to_cluster,switch_year\n";
  for (const auto& e : events)
    out += e.country + ',' + std::to_string(e.from) + ',' + std::to_string(e.to) + ',' + std::to_string(e.year) + '\n';
  return out;
}

std::string correlation_csv(const stats::CorrelationMatrix& matrix) {
  const auto m = matrix.values.cols();
  std::vector<std::string> names;
  for (Eigen::Index g = 0; g < m; ++g) names.push_back(GoalId::from_column(static_cast<std::size_t>(g)).column_name());
  std::vector<std::string> header = {"goal"};
  header.insert(header.end(), names.begin(), names.end());
  std::string out = header_line(header);
  for (Eigen::Index a = 0; a < m; ++a) {
    out += names[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < m; ++b) out += ',' + csv::fixed(matrix.values(a, b), 4);
    out += '\n';
  }
  return out;
}

csv::Table read_artifact(const std::filesystem::path& dir, const std::string& name) {
  const auto path = dir / name;
  if (!std::filesystem::exists(path)) throw MissingArtifact(name);
  return csv::read(path);
}

namespace {

double number(const csv::Table& table, std::size_t r, std::size_t c, const std::string& name) {
  bool missing = false;
  auto v = csv::parse_double(table.rows[r].at(c), missing);
  if (!v) throw NonNumericScore(table.line_numbers[r], table.header.at(c), name + ": '" + table.rows[r].at(c) + "'");
  return *v;
}

}  // namespace

KeyedMatrix read_keyed_matrix(const std::filesystem::path& dir, const std::string& name) {
  const auto table = read_artifact(dir, name);
  if (table.header.size() < 3 || table.header[0] != "country" || table.header[1] != "year")
    throw MalformedHeader(name + " must start with country,year");
  KeyedMatrix out;
  out.columns.assign(table.header.begin() + 2, table.header.end());
  const auto cols = static_cast<Eigen::Index>(out.columns.size());
  out.values.resize(static_cast<Eigen::Index>(table.rows.size()), cols);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.header.size()) throw NonNumericScore(table.line_numbers[r], "*", name + ": short row");
    out.keys.push_back({table.rows[r][0], static_cast<int>(number(table, r, 1, name))});
    for (Eigen::Index c = 0; c < cols; ++c)
      out.values(static_cast<Eigen::Index>(r), c) = number(table, r, static_cast<std::size_t>(c) + 2, name);
  }
  return out;
}

LabelsArtifact read_labels(const std::filesystem::path& dir) {
  const auto table = read_artifact(dir, files::kLabels);
  if (table.header != std::vector<std::string>{"country", "year", "cluster"})
    throw MalformedHeader(std::string(files::kLabels) + " must be country,year,cluster");
  LabelsArtifact out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != 3) throw NonNumericScore(table.line_numbers[r], "*", "labels: short row");
    out.keys.push_back({table.rows[r][0], static_cast<int>(number(table, r, 1, files::kLabels))});
    out.labels.push_back(static_cast<int>(number(table, r, 2, files::kLabels)));
  }
  return out;
}

std::vector<int> align_labels(const LabelsArtifact& labels, const std::vector<ObservationKey>& expected) {
  if (labels.keys != expected)
    throw ShapeMismatch("labels do not match the panel observations; re-run the cluster stage");
  return labels.labels;
}

}  // namespace sdg::report

#include "sdg/report/figures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include <json.hpp>

#include "sdg/error.hpp"
#include "sdg/report/artifacts.hpp"
#include "sdg/report/svg.hpp"

namespace sdg::report {

namespace figure_files {
std::string correlation_cluster(int cluster) { return "fig_correlation_cluster_" + std::to_string(cluster) + ".svg"; }
}  // namespace figure_files

FigureOptions FigureOptions::from(const PipelineConfig& config) {
  FigureOptions o;
  o.palette = config.palette;
  o.density_years = config.density_years;
  o.extrapolate_to = config.extrapolate_to;
  return o;
}

namespace {

using svg::Document;
using svg::Point;
using svg::Style;

constexpr double kPi = 3.14159265358979323846;

double cell(const csv::Table& t, std::size_t r, std::size_t c, const std::string& name) {
  bool missing = false;
  auto v = csv::parse_double(t.rows[r].at(c), missing);
  if (!v) throw NonNumericScore(t.line_numbers[r], t.header.at(c), name);
  return *v;
}

std::size_t require_column(const csv::Table& t, const std::string& col, const std::string& name) {
  auto c = t.column(col);
  if (!c) throw MalformedHeader(name + " lacks column " + col);
  return *c;
}

std::string cluster_color(const Palette& p, int cluster) {
  if (cluster < 0 || p.clusters.empty()) return p.noise;
  return p.clusters[static_cast<std::size_t>(cluster) % p.clusters.size()];
}

std::string year_color(const Palette& p, int year, int first, int last) {
  const double t = last > first ? static_cast<double>(year - first) / (last - first) : 0.0;
  return svg::blend(p.year_start, p.year_end, t);
}

struct TrajectoryRow {
  int cluster;
  int year;
  int members;
  double mean;
  double std;
  bool degenerate;
};

std::vector<TrajectoryRow> read_trajectories(const std::filesystem::path& dir) {
  const auto t = read_artifact(dir, files::kTrajectories);
  const std::string n = files::kTrajectories;
  const auto c_cluster = require_column(t, "cluster", n), c_year = require_column(t, "year", n),
             c_members = require_column(t, "members", n), c_mean = require_column(t, "mean", n),
             c_std = require_column(t, "std", n), c_deg = require_column(t, "degenerate", n);
  std::vector<TrajectoryRow> rows;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    rows.push_back({static_cast<int>(cell(t, r, c_cluster, n)), static_cast<int>(cell(t, r, c_year, n)),
                    static_cast<int>(cell(t, r, c_members, n)), cell(t, r, c_mean, n), cell(t, r, c_std, n),
                    cell(t, r, c_deg, n) != 0.0});
  return rows;
}

nlohmann::json read_fits(const std::filesystem::path& dir) {
  const auto path = dir / files::kFits;
  if (!std::filesystem::exists(path)) throw MissingArtifact(files::kFits);
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

std::map<std::string, int> read_country_clusters(const std::filesystem::path& dir) {
  const auto t = read_artifact(dir, files::kCountryClusters);
  const std::string n = files::kCountryClusters;
  const auto c_country = require_column(t, "country", n), c_cluster = require_column(t, "cluster", n);
  std::map<std::string, int> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    out[t.rows[r].at(c_country)] = static_cast<int>(cell(t, r, c_cluster, n));
  return out;
}

std::set<int> clusters_of(const std::map<std::string, int>& membership) {
  std::set<int> out;
  for (const auto& [country, c] : membership)
    if (c >= 0) out.insert(c);
  return out;
}

void no_data_note(Document& doc, double x, double y, const std::string& note) {
  doc.text(x, y, note, 14, "middle", "#757575");
}

template <typename F>
std::pair<double, double> extent(std::size_t n, F&& value) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min(lo, value(i));
    hi = std::max(hi, value(i));
  }
  return {lo, hi};
}

// Trajectory figure layout shared with extrapolation_panel_geometry().
constexpr double kTrajWidth = 1100.0;
constexpr double kTrajHeight = 480.0;
constexpr double kPanelTop = 50.0;
constexpr double kPanelHeight = 360.0;
constexpr double kPanelAWidth = 420.0;
constexpr double kPanelBLeft = 590.0;
constexpr double kPanelBWidth = 460.0;

struct TrajectoryData {
  std::vector<TrajectoryRow> rows;
  nlohmann::json fits;
  int first_year = 0;
  int last_year = 0;
  double max_mean = 1.0;
};

TrajectoryData load_trajectory_data(const std::filesystem::path& dir) {
  TrajectoryData d;
  d.rows = read_trajectories(dir);
  d.fits = read_fits(dir);
  if (!d.rows.empty()) {
    d.first_year = std::numeric_limits<int>::max();
    d.last_year = std::numeric_limits<int>::min();
    d.max_mean = 0.0;
    for (const auto& r : d.rows) {
      d.first_year = std::min(d.first_year, r.year);
      d.last_year = std::max(d.last_year, r.year);
      d.max_mean = std::max(d.max_mean, r.mean);
    }
  } else {
    d.first_year = 2000;
    d.last_year = 2022;
  }
  return d;
}

}  // namespace

std::string render_parallel_plot(const std::filesystem::path& dir, const FigureOptions& options) {
  const auto t = read_artifact(dir, files::kYearlyMeans);
  const std::string n = files::kYearlyMeans;
  Document doc(900, 560);
  auto frame = svg::draw_axes(doc, 70, 50, 720, 440, {0.5, kGoalCount + 0.5}, {0.0, 100.0}, "Goal",
                              "Mean score", "Yearly mean score per goal");
  if (t.rows.empty()) {
    no_data_note(doc, 430, 270, "no data");
    return doc.str();
  }
  const int first = static_cast<int>(cell(t, 0, 0, n));
  const int last = static_cast<int>(cell(t, t.rows.size() - 1, 0, n));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const int year = static_cast<int>(cell(t, r, 0, n));
    std::vector<Point> pts;
    for (int g = 1; g <= kGoalCount; ++g) pts.emplace_back(frame.x(g), frame.y(cell(t, r, static_cast<std::size_t>(g), n)));
    doc.polyline(pts, Style{year_color(options.palette, year, first, last), "none", 1.5, 0.9, ""},
                 "year-" + std::to_string(year));
  }
  for (int g = 1; g <= kGoalCount; ++g) doc.line(frame.x(g), frame.top, frame.x(g), frame.top + frame.height, Style{"#bdbdbd", "none", 0.5, 1.0, ""});
  doc.text(805, 70, std::to_string(first), 12, "start", year_color(options.palette, first, first, last));
  doc.text(805, 88, std::to_string(last), 12, "start", year_color(options.palette, last, first, last));
  return doc.str();
}

std::string render_pca_trajectories(const std::filesystem::path& dir, const FigureOptions&) {
  const auto proj = read_keyed_matrix(dir, files::kProjection);
  const auto ideal = read_artifact(dir, files::kIdealPoint);
  if (proj.values.cols() < 2) throw MalformedHeader(std::string(files::kProjection) + " needs at least pc1,pc2");
  const double ix = cell(ideal, 0, 0, files::kIdealPoint);
  const double iy = cell(ideal, 0, 1, files::kIdealPoint);
  const auto n = static_cast<std::size_t>(proj.values.rows());
  auto [xlo, xhi] = extent(n, [&](std::size_t i) { return proj.values(static_cast<Eigen::Index>(i), 0); });
  auto [ylo, yhi] = extent(n, [&](std::size_t i) { return proj.values(static_cast<Eigen::Index>(i), 1); });
  Document doc(900, 640);
  auto frame = svg::draw_axes(doc, 70, 50, 760, 520, svg::padded_range(std::min(xlo, ix), std::max(xhi, ix)),
                              svg::padded_range(std::min(ylo, iy), std::max(yhi, iy)), "PC1", "PC2",
                              "PCA trajectories per country");
  std::map<std::string, std::vector<std::pair<int, Point>>> paths;
  for (std::size_t i = 0; i < n; ++i)
    paths[proj.keys[i].country].push_back(
        {proj.keys[i].year, {frame.x(proj.values(static_cast<Eigen::Index>(i), 0)), frame.y(proj.values(static_cast<Eigen::Index>(i), 1))}});
  for (auto& [country, path] : paths) {
    std::sort(path.begin(), path.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Point> pts;
    for (const auto& p : path) pts.push_back(p.second);
    doc.polyline(pts, Style{"#607d8b", "none", 0.8, 0.7, ""}, "country-" + country);
    for (const auto& p : pts) doc.circle(p.first, p.second, 1.6, Style{"none", "#37474f", 1.0, 0.6, ""});
  }
  doc.circle(frame.x(ix), frame.y(iy), 6, Style{"#000000", "#000000", 1.0, 1.0, ""}, "id=\"ideal-point\"");
  doc.text(frame.x(ix) - 8, frame.y(iy) - 10, "ideal (all goals at 100)", 11, "end");
  return doc.str();
}

std::string render_pca_biplot(const std::filesystem::path& dir, const FigureOptions&) {
  const auto proj = read_keyed_matrix(dir, files::kProjection);
  const auto load = read_artifact(dir, files::kLoadings);
  const std::string ln = files::kLoadings;
  const auto n = static_cast<std::size_t>(proj.values.rows());
  auto [xlo, xhi] = extent(n, [&](std::size_t i) { return proj.values(static_cast<Eigen::Index>(i), 0); });
  auto [ylo, yhi] = extent(n, [&](std::size_t i) { return proj.values(static_cast<Eigen::Index>(i), 1); });
  double max_point = 1e-12;
  for (std::size_t i = 0; i < n; ++i)
    max_point = std::max(max_point, proj.values.row(static_cast<Eigen::Index>(i)).head(2).norm());
  double max_arrow = 1e-12;
  for (std::size_t r = 0; r < load.rows.size(); ++r)
    max_arrow = std::max(max_arrow, std::hypot(cell(load, r, 1, ln), cell(load, r, 2, ln)));
  const double scale = 0.8 * max_point / max_arrow;
  xlo = std::min(xlo, 0.0), xhi = std::max(xhi, 0.0), ylo = std::min(ylo, 0.0), yhi = std::max(yhi, 0.0);
  for (std::size_t r = 0; r < load.rows.size(); ++r) {
    xlo = std::min(xlo, cell(load, r, 1, ln) * scale), xhi = std::max(xhi, cell(load, r, 1, ln) * scale);
    ylo = std::min(ylo, cell(load, r, 2, ln) * scale), yhi = std::max(yhi, cell(load, r, 2, ln) * scale);
  }
  Document doc(900, 640);
  auto frame = svg::draw_axes(doc, 70, 50, 760, 520, svg::padded_range(xlo, xhi, 0.08), svg::padded_range(ylo, yhi, 0.08),
                              "PC1", "PC2", "PCA with goal loading vectors");
  for (std::size_t i = 0; i < n; ++i)
    doc.circle(frame.x(proj.values(static_cast<Eigen::Index>(i), 0)), frame.y(proj.values(static_cast<Eigen::Index>(i), 1)), 1.6,
               Style{"none", "#90a4ae", 1.0, 0.5, ""});
  doc.comment("arrow scale " + svg::format_number(scale));
  for (std::size_t r = 0; r < load.rows.size(); ++r) {
    const double ax = cell(load, r, 1, ln) * scale;
    const double ay = cell(load, r, 2, ln) * scale;
    const double x0 = frame.x(0), y0 = frame.y(0), x1 = frame.x(ax), y1 = frame.y(ay);
    doc.line(x0, y0, x1, y1, Style{"#c62828", "none", 1.5, 1.0, ""});
    const double ang = std::atan2(y1 - y0, x1 - x0);
    std::vector<Point> head = {{x1 - 8 * std::cos(ang - 0.4), y1 - 8 * std::sin(ang - 0.4)},
                               {x1, y1},
                               {x1 - 8 * std::cos(ang + 0.4), y1 - 8 * std::sin(ang + 0.4)}};
    doc.polyline(head, Style{"#c62828", "none", 1.5, 1.0, ""});
    std::string label = load.rows[r][0];
    if (label.rfind("goal", 0) == 0) label = std::to_string(std::stoi(label.substr(4)));
    doc.text(x1 + 6 * std::cos(ang), y1 + 6 * std::sin(ang) + 4, label, 12, "middle", "#b71c1c");
  }
  return doc.str();
}

std::string render_tsne_clusters(const std::filesystem::path& dir, const FigureOptions& options) {
  const auto emb = read_keyed_matrix(dir, files::kEmbedding);
  const auto labels = read_labels(dir);
  const auto sw = read_artifact(dir, files::kSwitches);
  const auto lab = align_labels(labels, emb.keys);
  std::set<std::string> switchers;
  for (const auto& row : sw.rows) switchers.insert(row.at(0));

  const auto n = static_cast<std::size_t>(emb.values.rows());
  auto [xlo, xhi] = extent(n, [&](std::size_t i) { return emb.values(static_cast<Eigen::Index>(i), 0); });
  auto [ylo, yhi] = extent(n, [&](std::size_t i) { return emb.values(static_cast<Eigen::Index>(i), 1); });
  Document doc(980, 640);
  auto frame = svg::draw_axes(doc, 70, 50, 760, 520, svg::padded_range(xlo, xhi), svg::padded_range(ylo, yhi), "t-SNE 1",
                              "t-SNE 2", "t-SNE embedding colored by DBSCAN cluster");
  std::map<std::string, std::vector<std::pair<int, std::size_t>>> by_country;
  for (std::size_t i = 0; i < n; ++i) {
    const bool highlight = switchers.count(emb.keys[i].country) > 0;
    doc.circle(frame.x(emb.values(static_cast<Eigen::Index>(i), 0)), frame.y(emb.values(static_cast<Eigen::Index>(i), 1)),
               highlight ? 3.0 : 2.4, Style{"none", cluster_color(options.palette, lab[i]), 1.0, highlight ? 1.0 : 0.3, ""});
    if (highlight) by_country[emb.keys[i].country].push_back({emb.keys[i].year, i});
  }
  for (auto& [country, pts] : by_country) {
    std::sort(pts.begin(), pts.end());
    std::vector<Point> line;
    for (const auto& [year, i] : pts)
      line.emplace_back(frame.x(emb.values(static_cast<Eigen::Index>(i), 0)), frame.y(emb.values(static_cast<Eigen::Index>(i), 1)));
    doc.polyline(line, Style{"#212121", "none", 1.0, 1.0, "2,3"}, "switch-" + country);
  }
  std::set<int> present(lab.begin(), lab.end());
  double ly = 70;
  for (int c : present) {
    doc.circle(850, ly - 4, 5, Style{"none", cluster_color(options.palette, c), 1.0, 1.0, ""});
    doc.text(862, ly, c < 0 ? "noise (-1)" : "cluster " + std::to_string(c), 12);
    ly += 20;
  }
  return doc.str();
}

std::string render_cluster_profiles(const std::filesystem::path& dir, const FigureOptions& options) {
  const auto z = read_keyed_matrix(dir, files::kStandardized);
  const auto membership = read_country_clusters(dir);
  const auto clusters = clusters_of(membership);
  const int panels = std::max<int>(1, static_cast<int>(clusters.size()));
  const int cols = std::min(panels, 3);
  const int rows = (panels + cols - 1) / cols;
  const double pw = 360, ph = 260;
  Document doc(40 + cols * (pw + 60), 40 + rows * (ph + 80));
  if (clusters.empty()) {
    svg::draw_axes(doc, 60, 50, pw, ph, {0.5, kGoalCount + 0.5}, {-3, 3}, "Goal", "z-score", "no clusters");
    no_data_note(doc, 60 + pw / 2, 50 + ph / 2, "no clusters found (all points noise)");
    return doc.str();
  }
  double zlo = -1, zhi = 1;
  for (Eigen::Index i = 0; i < z.values.rows(); ++i) {
    zlo = std::min(zlo, z.values.row(i).minCoeff());
    zhi = std::max(zhi, z.values.row(i).maxCoeff());
  }
  int first = std::numeric_limits<int>::max(), last = std::numeric_limits<int>::min();
  for (const auto& k : z.keys) {
    first = std::min(first, k.year);
    last = std::max(last, k.year);
  }
  int p = 0;
  for (int c : clusters) {
    const double left = 60 + (p % cols) * (pw + 60);
    const double top = 50 + (p / cols) * (ph + 80);
    auto frame = svg::draw_axes(doc, left, top, pw, ph, {0.5, kGoalCount + 0.5}, svg::padded_range(zlo, zhi), "Goal",
                                "z-score", "cluster " + std::to_string(c));
    std::map<int, std::pair<Vector, int>> yearly;
    for (std::size_t i = 0; i < z.keys.size(); ++i) {
      auto it = membership.find(z.keys[i].country);
      if (it == membership.end() || it->second != c) continue;
      std::vector<Point> pts;
      for (int g = 0; g < kGoalCount; ++g) pts.emplace_back(frame.x(g + 1), frame.y(z.values(static_cast<Eigen::Index>(i), g)));
      doc.polyline(pts, Style{"#bdbdbd", "none", 0.6, 0.5, ""});
      auto& [sum, count] = yearly.try_emplace(z.keys[i].year, Vector::Zero(kGoalCount), 0).first->second;
      sum += z.values.row(static_cast<Eigen::Index>(i)).transpose();
      ++count;
    }
    for (const auto& [year, sc] : yearly) {
      std::vector<Point> pts;
      for (int g = 0; g < kGoalCount; ++g) pts.emplace_back(frame.x(g + 1), frame.y(sc.first[g] / sc.second));
      doc.polyline(pts, Style{year_color(options.palette, year, first, last), "none", 1.4, 1.0, ""});
    }
    doc.line(frame.left, frame.y(0), frame.left + frame.width, frame.y(0), Style{"#000000", "none", 0.8, 1.0, "4,3"});
    ++p;
  }
  return doc.str();
}

std::string render_correlation(const std::filesystem::path& dir, const std::string& artifact, const std::string& title) {
  const auto t = read_artifact(dir, artifact);
  const std::size_t m = t.rows.size();
  const double cellpx = 34;
  const double left = 80, top = 60;
  Document doc(left + m * cellpx + 120, top + m * cellpx + 60);
  doc.text(left + m * cellpx / 2, 30, title, 14, "middle");
  for (std::size_t a = 0; a < m; ++a) {
    const std::string label = std::to_string(a + 1);
    doc.text(left - 8, top + a * cellpx + cellpx / 2 + 4, label, 11, "end");
    doc.text(left + a * cellpx + cellpx / 2, top + m * cellpx + 16, label, 11, "middle");
    for (std::size_t b = 0; b < m; ++b) {
      const double v = cell(t, a, b + 1, artifact);
      doc.rect(left + b * cellpx, top + a * cellpx, cellpx, cellpx, Style{"#ffffff", svg::diverging(v), 0.5, 1.0, ""});
      doc.text(left + b * cellpx + cellpx / 2, top + a * cellpx + cellpx / 2 + 3, svg::format_number(v), 8, "middle",
               std::abs(v) > 0.6 ? "#ffffff" : "#000000");
    }
  }
  // Colour bar.
  const double bx = left + m * cellpx + 30;
  for (int i = 0; i <= 20; ++i) {
    const double v = 1.0 - i / 10.0;
    doc.rect(bx, top + i * (m * cellpx / 21.0), 20, m * cellpx / 21.0 + 0.5, Style{"none", svg::diverging(v), 0.0, 1.0, ""});
  }
  doc.text(bx + 26, top + 8, "+1", 10);
  doc.text(bx + 26, top + m * cellpx, "-1", 10);
  return doc.str();
}

std::string render_densities(const std::filesystem::path& dir, const FigureOptions& options) {
  const auto rows = read_trajectories(dir);
  std::set<int> years_present;
  for (const auto& r : rows) years_present.insert(r.year);
  std::vector<int> years;
  for (int y : options.density_years)
    if (years_present.count(y)) years.push_back(y);
  if (years.empty() && !years_present.empty()) {
    std::vector<int> all(years_present.begin(), years_present.end());
    years = {all.front(), all[all.size() / 2], all.back()};
    years.erase(std::unique(years.begin(), years.end()), years.end());
  }
  const double pw = 320, ph = 280;
  const int panels = std::max<int>(1, static_cast<int>(years.size()));
  Document doc(40 + panels * (pw + 70), ph + 140);
  if (rows.empty()) {
    svg::draw_axes(doc, 70, 50, pw, ph, {0, std::sqrt(17.0)}, {0, 1}, "Distance to ideal", "Density", "no clusters");
    no_data_note(doc, 70 + pw / 2, 50 + ph / 2, "no clusters found (all points noise)");
    return doc.str();
  }
  double xmax = 0.0;
  for (const auto& r : rows) xmax = std::max(xmax, r.mean + 4.0 * r.std);
  xmax = std::min(xmax, std::sqrt(17.0));
  auto pdf = [](double x, double mu, double s) { return std::exp(-0.5 * (x - mu) * (x - mu) / (s * s)) / (s * std::sqrt(2 * kPi)); };
  double ymax = 0.0;
  for (const auto& r : rows)
    if (!r.degenerate && r.std > 0.0) ymax = std::max(ymax, pdf(r.mean, r.mean, r.std));
  if (ymax <= 0.0) ymax = 1.0;
  int p = 0;
  for (int year : years) {
    const double left = 70 + p * (pw + 70);
    auto frame = svg::draw_axes(doc, left, 50, pw, ph, {0.0, xmax}, {0.0, ymax * 1.05}, "Distance to ideal", "Density",
                                std::to_string(year));
    for (const auto& r : rows) {
      if (r.year != year) continue;
      const Style s{cluster_color(options.palette, r.cluster), "none", 1.6, 1.0, ""};
      if (r.degenerate || r.std <= 0.0) {
        doc.line(frame.x(r.mean), frame.y(0), frame.x(r.mean), frame.y(ymax), Style{s.stroke, "none", 1.6, 1.0, "3,3"});
        continue;
      }
      std::vector<Point> pts;
      for (int k = 0; k <= 200; ++k) {
        const double x = xmax * k / 200.0;
        pts.emplace_back(frame.x(x), frame.y(pdf(x, r.mean, r.std)));
      }
      doc.polyline(pts, s, "density-" + std::to_string(r.cluster) + "-" + std::to_string(year));
    }
    ++p;
  }
  return doc.str();
}

TrajectoryPanelGeometry extrapolation_panel_geometry(const std::filesystem::path& dir, const FigureOptions& options) {
  const auto d = load_trajectory_data(dir);
  return {kPanelBLeft, kPanelTop, kPanelBWidth, kPanelHeight, static_cast<double>(d.first_year),
          static_cast<double>(std::max(options.extrapolate_to, d.last_year + 1)), 0.0, d.max_mean * 1.1};
}

std::string render_trajectories(const std::filesystem::path& dir, const FigureOptions& options) {
  const auto d = load_trajectory_data(dir);
  const auto geo = extrapolation_panel_geometry(dir, options);
  Document doc(kTrajWidth, kTrajHeight);
  auto a = svg::draw_axes(doc, 70, kPanelTop, kPanelAWidth, kPanelHeight, {d.first_year - 0.5, d.last_year + 0.5},
                          {0.0, d.max_mean * 1.1}, "Year", "Mean distance to ideal", "(A) observed and fitted");
  auto b = svg::draw_axes(doc, geo.left, geo.top, geo.width, geo.height, {geo.year_lo, geo.year_hi},
                          {geo.distance_lo, geo.distance_hi}, "Year", "Mean distance to ideal",
                          "(B) extrapolation to " + std::to_string(static_cast<int>(geo.year_hi)));
  if (d.rows.empty()) {
    no_data_note(doc, 70 + kPanelAWidth / 2, kPanelTop + kPanelHeight / 2, "no clusters");
    return doc.str();
  }
  for (const auto& r : d.rows)
    doc.circle(a.x(r.year), a.y(r.mean), 3, Style{"none", cluster_color(options.palette, r.cluster), 1.0, 1.0, ""});

  const double target_x = b.x(options.target_year);
  doc.line(target_x, b.top, target_x, b.top + b.height, Style{"#000000", "none", 1.0, 1.0, "4,4"});

  for (const auto& fit : d.fits) {
    const int c = fit.at("cluster").get<int>();
    const double fa = fit.at("a").get<double>(), fb = fit.at("b").get<double>(), fc = fit.at("c").get<double>();
    auto r = [&](double t) { return fa + fb * t + fc * t * t; };
    const Style s{cluster_color(options.palette, c), "none", 1.6, 1.0, ""};
    std::vector<Point> pa;
    for (double t = d.first_year; t <= d.last_year + 1e-9; t += 0.25) pa.emplace_back(a.x(t), a.y(r(t)));
    doc.polyline(pa, s, "fit-A-cluster-" + std::to_string(c));

    std::optional<double> root;
    if (fit.contains("root") && !fit.at("root").is_null()) root = fit.at("root").get<double>();
    std::vector<Point> pb;
    const double end = root ? std::min(*root, geo.year_hi) : geo.year_hi;
    for (double t = geo.year_lo; t < end; t += 0.25) pb.emplace_back(b.x(t), b.y(std::max(r(t), 0.0)));
    pb.emplace_back(b.x(end), b.y(root && *root <= geo.year_hi ? 0.0 : std::max(r(end), 0.0)));
    doc.polyline(pb, s, "fit-B-cluster-" + std::to_string(c));
    if (fit.contains("attainment_year") && !fit.at("attainment_year").is_null()) {
      const int year = fit.at("attainment_year").get<int>();
      if (year <= geo.year_hi)
        doc.circle(b.x(year), b.y(0), 4, Style{s.stroke, "#ffffff", 1.5, 1.0, ""},
                   "id=\"attainment-" + std::to_string(c) + "\" data-year=\"" + std::to_string(year) + "\"");
    }
  }
  return doc.str();
}

std::vector<std::string> emit_figures(const std::filesystem::path& dir, const FigureOptions& options) {
  ArtifactSink sink(dir);
  emit_figures(sink, options);
  return sink.written();
}

void emit_figures(ArtifactSink& sink, const FigureOptions& options) {
  const auto& dir = sink.dir();
  sink.write(figure_files::kParallel, render_parallel_plot(dir, options));
  sink.write(figure_files::kPcaTrajectories, render_pca_trajectories(dir, options));
  sink.write(figure_files::kPcaBiplot, render_pca_biplot(dir, options));
  sink.write(figure_files::kTsneClusters, render_tsne_clusters(dir, options));
  sink.write(figure_files::kClusterProfiles, render_cluster_profiles(dir, options));
  sink.write(figure_files::kCorrelationGlobal,
             render_correlation(dir, files::kCorrelationGlobal, "Correlation between goals, all countries"));
  for (int c : clusters_of(read_country_clusters(dir))) {
    const auto name = files::correlation_cluster(c);
    if (std::filesystem::exists(dir / name))
      sink.write(figure_files::correlation_cluster(c),
                 render_correlation(dir, name, "Correlation between goals, cluster " + std::to_string(c)));
  }
  sink.write(figure_files::kDensities, render_densities(dir, options));
  sink.write(figure_files::kTrajectories, render_trajectories(dir, options));
}

}  // namespace sdg::report

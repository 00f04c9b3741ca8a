#include "sdg/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "sdg/csv.hpp"
#include "sdg/error.hpp"

namespace sdg {

GoalId::GoalId(int index) : index_(index) {
  if (index < 1 || index > kGoalCount) throw InvalidArgument("goal index " + std::to_string(index) + " not in 1..17");
}

std::string GoalId::column_name() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "goal%02d", index_);
  return buf;
}

bool Observation::complete() const {
  return std::all_of(scores.begin(), scores.end(), [](double s) { return std::isfinite(s); });
}

ScorePanel::ScorePanel(std::vector<Observation> observations) : observations_(std::move(observations)) {
  std::sort(observations_.begin(), observations_.end(),
            [](const Observation& a, const Observation& b) { return a.key() < b.key(); });
  for (std::size_t i = 1; i < observations_.size(); ++i) {
    if (observations_[i].key() == observations_[i - 1].key())
      throw DuplicateObservation(observations_[i].country, observations_[i].year);
  }
  std::set<int> years;
  for (const auto& obs : observations_) {
    if (countries_.empty() || countries_.back() != obs.country) countries_.push_back(obs.country);
    years.insert(obs.year);
  }
  years_.assign(years.begin(), years.end());
}

bool ScorePanel::is_complete() const {
  if (observations_.size() != countries_.size() * years_.size()) return false;
  return std::all_of(observations_.begin(), observations_.end(), [](const Observation& o) { return o.complete(); });
}

Matrix ScorePanel::scores() const {
  Matrix m(static_cast<Eigen::Index>(observations_.size()), kGoalCount);
  for (std::size_t i = 0; i < observations_.size(); ++i)
    for (int g = 0; g < kGoalCount; ++g) m(static_cast<Eigen::Index>(i), g) = observations_[i].scores[g];
  return m;
}

std::vector<ObservationKey> ScorePanel::keys() const {
  std::vector<ObservationKey> out;
  out.reserve(observations_.size());
  for (const auto& o : observations_) out.push_back(o.key());
  return out;
}

std::optional<std::size_t> ScorePanel::find(const std::string& country, int year) const {
  ObservationKey key{country, year};
  auto it = std::lower_bound(observations_.begin(), observations_.end(), key,
                             [](const Observation& o, const ObservationKey& k) { return o.key() < k; });
  if (it == observations_.end() || it->key() != key) return std::nullopt;
  return static_cast<std::size_t>(it - observations_.begin());
}

Matrix StandardizedPanel::destandardize() const {
  Matrix x = z;
  for (Eigen::Index g = 0; g < x.cols(); ++g)
    x.col(g) = x.col(g).array() * moments[g].stddev + moments[g].mean;
  return x;
}

std::vector<std::string> PanelFormat::default_goal_columns() {
  std::vector<std::string> cols;
  for (int g = 1; g <= kGoalCount; ++g) cols.push_back(GoalId(g).column_name());
  return cols;
}

ScorePanel load_panel(const std::filesystem::path& path, const PanelFormat& format) {
  if (!std::filesystem::exists(path)) throw FileNotFound(path.string());
  if (format.goal_columns.size() != static_cast<std::size_t>(kGoalCount))
    throw MalformedHeader("format must name exactly 17 goal columns");
  const auto table = csv::read(path);

  auto require = [&](const std::string& name) {
    auto c = table.column(name);
    if (!c) throw MalformedHeader("missing column '" + name + "' in " + path.string());
    return *c;
  };
  const std::size_t country_col = require(format.country_column);
  const std::size_t year_col = require(format.year_column);
  std::array<std::size_t, kGoalCount> goal_cols{};
  for (int g = 0; g < kGoalCount; ++g) goal_cols[g] = require(format.goal_columns[g]);

  std::vector<Observation> observations;
  observations.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    if (row.size() != table.header.size())
      throw NonNumericScore(line, "*", "expected " + std::to_string(table.header.size()) + " fields, got " +
                                           std::to_string(row.size()));
    Observation obs;
    obs.country = row[country_col];
    if (obs.country.empty()) throw NonNumericScore(line, format.country_column, "empty country code");

    bool missing = false;
    auto year = csv::parse_double(row[year_col], missing);
    if (!year || std::floor(*year) != *year)
      throw NonNumericScore(line, format.year_column, "'" + row[year_col] + "' is not an integer year");
    obs.year = static_cast<int>(*year);
    if (obs.year < format.min_year || obs.year > format.max_year)
      throw NonNumericScore(line, format.year_column,
                            "year " + std::to_string(obs.year) + " outside " + std::to_string(format.min_year) +
                                ".." + std::to_string(format.max_year));

    for (int g = 0; g < kGoalCount; ++g) {
      const auto& field = row[goal_cols[g]];
      auto value = csv::parse_double(field, missing);
      if (missing) {
        obs.scores[g] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      if (!value) throw NonNumericScore(line, format.goal_columns[g], "'" + field + "'");
      double v = *value;
      if (v < 0.0 || v > 100.0) {
        if (v < -kScoreClampTolerance || v > 100.0 + kScoreClampTolerance)
          throw NonNumericScore(line, format.goal_columns[g], "score " + field + " outside [0, 100]");
        v = std::clamp(v, 0.0, 100.0);
      }
      obs.scores[g] = v;
    }
    observations.push_back(std::move(obs));
  }
  return ScorePanel(std::move(observations));
}

ScorePanel filter_complete(const ScorePanel& panel) {
  if (panel.empty()) throw EmptyResult("panel has no observations");
  const std::size_t year_count = panel.years().size();

  std::vector<Observation> kept;
  const auto& obs = panel.observations();
  // Observations are grouped by country in sorted order.
  for (std::size_t begin = 0; begin < obs.size();) {
    std::size_t end = begin;
    bool complete = true;
    while (end < obs.size() && obs[end].country == obs[begin].country) {
      complete = complete && obs[end].complete();
      ++end;
    }
    if (complete && end - begin == year_count) kept.insert(kept.end(), obs.begin() + begin, obs.begin() + end);
    begin = end;
  }
  if (kept.empty()) throw EmptyResult("no country has complete data for every goal and year");
  return ScorePanel(std::move(kept));
}

namespace {

std::vector<GoalMoments> pooled_moments(const Matrix& x, std::span<const std::size_t> rows, int group,
                                        bool grouped) {
  std::vector<GoalMoments> moments(kGoalCount);
  const double n = static_cast<double>(rows.size());
  for (int g = 0; g < kGoalCount; ++g) {
    double sum = 0.0;
    for (auto r : rows) sum += x(static_cast<Eigen::Index>(r), g);
    const double mean = sum / n;
    double ss = 0.0;
    for (auto r : rows) {
      const double d = x(static_cast<Eigen::Index>(r), g) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / n);
    if (!(sd > 0.0)) {
      if (grouped) throw ZeroVariance::in_cluster(group, g + 1);
      throw ZeroVariance(g + 1);
    }
    moments[g] = {mean, sd};
  }
  return moments;
}

void require_complete(const ScorePanel& panel) {
  if (panel.empty()) throw EmptyResult("panel has no observations");
  for (const auto& o : panel.observations())
    if (!o.complete())
      throw InvalidArgument("panel has missing scores (" + o.country + ", " + std::to_string(o.year) +
                            "); run filter_complete first");
}

}  // namespace

StandardizedPanel standardize(const ScorePanel& panel) {
  require_complete(panel);
  const Matrix x = panel.scores();
  std::vector<std::size_t> rows(panel.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;

  StandardizedPanel out;
  out.keys = panel.keys();
  out.moments = pooled_moments(x, rows, 0, false);
  out.z = x;
  for (int g = 0; g < kGoalCount; ++g)
    out.z.col(g) = (x.col(g).array() - out.moments[g].mean) / out.moments[g].stddev;
  return out;
}

StandardizedPanel standardize_within_cluster(const ScorePanel& panel, std::span<const int> labels) {
  require_complete(panel);
  if (labels.size() != panel.size()) throw ShapeMismatch("labels must align with panel observations");
  const Matrix x = panel.scores();

  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);

  StandardizedPanel out;
  out.keys = panel.keys();
  out.z = x;
  for (const auto& [label, rows] : groups) {
    auto moments = pooled_moments(x, rows, label, true);
    for (auto r : rows)
      for (int g = 0; g < kGoalCount; ++g) {
        const auto ri = static_cast<Eigen::Index>(r);
        out.z(ri, g) = (x(ri, g) - moments[g].mean) / moments[g].stddev;
      }
    out.group_moments.emplace(label, std::move(moments));
  }
  out.moments = out.group_moments.begin()->second;
  return out;
}

Vector standardize_scores(const ScoreVector& scores, const std::vector<GoalMoments>& moments) {
  if (moments.size() != static_cast<std::size_t>(kGoalCount))
    throw DimensionMismatch(kGoalCount, static_cast<long>(moments.size()));
  Vector z(kGoalCount);
  for (int g = 0; g < kGoalCount; ++g) z[g] = (scores[g] - moments[g].mean) / moments[g].stddev;
  return z;
}

YearlyGoalMeans yearly_goal_means(const ScorePanel& panel) {
  if (panel.empty()) throw EmptyResult("panel has no observations");
  YearlyGoalMeans out;
  out.years = panel.years();
  const auto year_count = static_cast<Eigen::Index>(out.years.size());
  out.means = Matrix::Zero(year_count, kGoalCount);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(year_count);

  // Accumulate in sorted-country order so the result does not depend on input order.
  for (const auto& o : panel.observations()) {
    const auto y = static_cast<Eigen::Index>(
        std::lower_bound(out.years.begin(), out.years.end(), o.year) - out.years.begin());
    for (int g = 0; g < kGoalCount; ++g) out.means(y, g) += o.scores[g];
    counts[y] += 1.0;
  }
  for (Eigen::Index y = 0; y < year_count; ++y) out.means.row(y) /= counts[y];
  return out;
}

GdpTable load_gdp(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto country = table.column("country");
  const auto gdp = table.column("gdp_per_capita");
  if (!country || !gdp) throw MalformedHeader("GDP table needs columns country,gdp_per_capita");
  GdpTable out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() <= std::max(*country, *gdp)) throw NonNumericScore(table.line_numbers[r], "*", "short row");
    bool missing = false;
    auto value = csv::parse_double(row[*gdp], missing);
    if (missing) continue;
    if (!value || *value <= 0.0)
      throw NonNumericScore(table.line_numbers[r], "gdp_per_capita", "'" + row[*gdp] + "' is not a positive number");
    out[row[*country]] = *value;
  }
  return out;
}

}  // namespace sdg

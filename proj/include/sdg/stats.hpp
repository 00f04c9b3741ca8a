#pragma once

#include <map>
#include <string>

#include "sdg/ingest.hpp"
#include "sdg/types.hpp"

namespace sdg::stats {

struct CorrelationMatrix {
  Matrix values;      // symmetric, unit diagonal, entries in [-1, 1]
  std::string basis;  // "global", "cluster 3", "year 2005", ...
  std::size_t observations = 0;
};

/// Sample Pearson coefficients between the columns of `x`, accumulated with
/// single-pass co-moment updates. Throws TooFewObservations (< 3 rows) and
/// ZeroVariance (1-based column).
CorrelationMatrix pearson_matrix(const Matrix& x, std::string basis = "global");

/// Pooled over every (country, year) row of the panel.
CorrelationMatrix pearson_matrix(const ScorePanel& panel);

/// Rows of the countries whose membership equals `cluster`.
CorrelationMatrix pearson_matrix(const ScorePanel& panel, const std::map<std::string, int>& membership, int cluster);

/// One matrix per year (no pooling across years).
std::map<int, CorrelationMatrix> pearson_by_year(const ScorePanel& panel);

}  // namespace sdg::stats

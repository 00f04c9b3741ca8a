#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace sdg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ingest

class FileNotFound : public Error {
 public:
  explicit FileNotFound(const std::string& path) : Error("file not found: " + path), path(path) {}
  std::string path;
};

class MalformedHeader : public Error {
 public:
  explicit MalformedHeader(const std::string& detail) : Error("malformed header: " + detail) {}
};

class NonNumericScore : public Error {
 public:
  NonNumericScore(std::size_t row, std::string column, const std::string& detail)
      : Error("non-numeric value at row " + std::to_string(row) + ", column " + column + ": " + detail),
        row(row),
        column(std::move(column)) {}
  std::size_t row;
  std::string column;
};

class DuplicateObservation : public Error {
 public:
  DuplicateObservation(std::string country, int year)
      : Error("duplicate observation (" + country + ", " + std::to_string(year) + ")"),
        country(std::move(country)),
        year(year) {}
  std::string country;
  int year;
};

class EmptyResult : public Error {
 public:
  explicit EmptyResult(const std::string& detail) : Error("empty result: " + detail) {}
};

/// Constant column. `cluster` is set for within-cluster standardization.
class ZeroVariance : public Error {
 public:
  explicit ZeroVariance(int goal, const std::string& context = {})
      : Error("zero variance for goal " + std::to_string(goal) + (context.empty() ? "" : " (" + context + ")")),
        goal(goal) {}
  static ZeroVariance in_cluster(int cluster, int goal) {
    ZeroVariance e(goal, "cluster " + std::to_string(cluster));
    e.cluster = cluster;
    e.has_cluster = true;
    return e;
  }
  int goal;
  int cluster = 0;
  bool has_cluster = false;
};

// numerics

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& detail) : Error("invalid argument: " + detail) {}
};

class RankDeficient : public Error {
 public:
  RankDeficient(int requested, int available)
      : Error("rank deficient: requested " + std::to_string(requested) + " components, only " +
              std::to_string(available) + " nonzero variance directions") {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(long expected, long actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " + std::to_string(actual)) {}
};

class ShapeMismatch : public Error {
 public:
  explicit ShapeMismatch(const std::string& detail) : Error("shape mismatch: " + detail) {}
};

class CalibrationFailed : public Error {
 public:
  CalibrationFailed(long point, const std::string& detail)
      : Error("perplexity calibration failed" + (point >= 0 ? " at point " + std::to_string(point) : std::string{}) +
              ": " + detail),
        point(point) {}
  long point;
};

class TooFewObservations : public Error {
 public:
  TooFewObservations(std::size_t have, std::size_t need)
      : Error("too few observations: " + std::to_string(have) + " < " + std::to_string(need)) {}
};

class TooFewMembers : public Error {
 public:
  TooFewMembers(int cluster, int year, std::size_t have)
      : Error("cluster " + std::to_string(cluster) + " has " + std::to_string(have) + " members in " +
              std::to_string(year)) {}
};

class SingularFit : public Error {
 public:
  explicit SingularFit(const std::string& detail) : Error("singular fit: " + detail) {}
};

class EmptyCluster : public Error {
 public:
  EmptyCluster(int cluster, int year)
      : Error("cluster " + std::to_string(cluster) + " has no members in " + std::to_string(year)), year(year) {}
  int year;
};

// report

class MissingArtifact : public Error {
 public:
  explicit MissingArtifact(const std::string& name) : Error("missing artifact: " + name), name(name) {}
  std::string name;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& detail) : Error("config: " + detail) {}
};

}  // namespace sdg

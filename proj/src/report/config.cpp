#include "sdg/report/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "sdg/error.hpp"

namespace sdg::report {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) throw ConfigError(key + ": '" + value + "' is not a number");
  return out;
}

long long to_integer(const std::string& key, const std::string& value) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError(key + ": '" + value + "' is not an integer");
  return out;
}

int to_int(const std::string& key, const std::string& value) { return static_cast<int>(to_integer(key, value)); }

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": '" + value + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename Range>
std::string join(const Range& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ',';
    if constexpr (std::is_same_v<std::decay_t<decltype(item)>, std::string>)
      out += item;
    else
      out += std::to_string(item);
  }
  return out;
}

struct Field {
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, const std::string&, const std::string&)> set;
};

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> t;
    t["input"] = {[](const PipelineConfig& c) { return c.input.string(); },
                  [](PipelineConfig& c, const std::string&, const std::string& v) { c.input = v; }};
    t["gdp"] = {[](const PipelineConfig& c) { return c.gdp.string(); },
                [](PipelineConfig& c, const std::string&, const std::string& v) { c.gdp = v; }};
    t["output_dir"] = {[](const PipelineConfig& c) { return c.output_dir.string(); },
                       [](PipelineConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }};
    t["pca_components"] = {[](const PipelineConfig& c) { return std::to_string(c.pca_components); },
                           [](PipelineConfig& c, const std::string& k, const std::string& v) {
                             c.pca_components = to_int(k, v);
                           }};
    t["perplexity"] = {[](const PipelineConfig& c) { return format_double(c.perplexity); },
                       [](PipelineConfig& c, const std::string& k, const std::string& v) {
                         c.perplexity = to_double(k, v);
                       }};
    t["tsne_dims"] = {[](const PipelineConfig& c) { return std::to_string(c.tsne_dims); },
                      [](PipelineConfig& c, const std::string& k, const std::string& v) { c.tsne_dims = to_int(k, v); }};
    t["seed"] = {[](const PipelineConfig& c) { return std::to_string(c.seed); },
                 [](PipelineConfig& c, const std::string& k, const std::string& v) {
                   const auto s = to_integer(k, v);
                   if (s < 0) throw ConfigError(k + " must be non-negative");
                   c.seed = static_cast<std::uint64_t>(s);
                 }};
    t["tsne_iterations"] = {[](const PipelineConfig& c) { return std::to_string(c.schedule.iterations); },
                            [](PipelineConfig& c, const std::string& k, const std::string& v) {
                              c.schedule.iterations = to_int(k, v);
                            }};
    t["learning_rate"] = {[](const PipelineConfig& c) { return format_double(c.schedule.learning_rate); },
                          [](PipelineConfig& c, const std::string& k, const std::string& v) {
                            c.schedule.learning_rate = to_double(k, v);
                          }};
    t["momentum_initial"] = {[](const PipelineConfig& c) { return format_double(c.schedule.momentum_initial); },
                             [](PipelineConfig& c, const std::string& k, const std::string& v) {
                               c.schedule.momentum_initial = to_double(k, v);
                             }};
    t["momentum_final"] = {[](const PipelineConfig& c) { return format_double(c.schedule.momentum_final); },
                           [](PipelineConfig& c, const std::string& k, const std::string& v) {
                             c.schedule.momentum_final = to_double(k, v);
                           }};
    t["momentum_switch_iteration"] = {
        [](const PipelineConfig& c) { return std::to_string(c.schedule.momentum_switch_iteration); },
        [](PipelineConfig& c, const std::string& k, const std::string& v) {
          c.schedule.momentum_switch_iteration = to_int(k, v);
        }};
    t["exaggeration"] = {[](const PipelineConfig& c) { return format_double(c.schedule.exaggeration); },
                         [](PipelineConfig& c, const std::string& k, const std::string& v) {
                           c.schedule.exaggeration = to_double(k, v);
                         }};
    t["exaggeration_iterations"] = {
        [](const PipelineConfig& c) { return std::to_string(c.schedule.exaggeration_iterations); },
        [](PipelineConfig& c, const std::string& k, const std::string& v) {
          c.schedule.exaggeration_iterations = to_int(k, v);
        }};
    t["adaptive_gains"] = {[](const PipelineConfig& c) { return std::string(c.schedule.adaptive_gains ? "true" : "false"); },
                           [](PipelineConfig& c, const std::string& k, const std::string& v) {
                             c.schedule.adaptive_gains = to_bool(k, v);
                           }};
    t["init_stddev"] = {[](const PipelineConfig& c) { return format_double(c.schedule.init_stddev); },
                        [](PipelineConfig& c, const std::string& k, const std::string& v) {
                          c.schedule.init_stddev = to_double(k, v);
                        }};
    t["kl_record_every"] = {[](const PipelineConfig& c) { return std::to_string(c.schedule.record_every); },
                            [](PipelineConfig& c, const std::string& k, const std::string& v) {
                              c.schedule.record_every = to_int(k, v);
                            }};
    t["dbscan_eps"] = {[](const PipelineConfig& c) { return c.dbscan_eps ? format_double(*c.dbscan_eps) : "auto"; },
                       [](PipelineConfig& c, const std::string& k, const std::string& v) {
                         if (v == "auto")
                           c.dbscan_eps.reset();
                         else
                           c.dbscan_eps = to_double(k, v);
                       }};
    t["dbscan_min_pts"] = {[](const PipelineConfig& c) { return std::to_string(c.dbscan_min_pts); },
                           [](PipelineConfig& c, const std::string& k, const std::string& v) {
                             c.dbscan_min_pts = to_int(k, v);
                           }};
    t["eps_grid_min"] = {[](const PipelineConfig& c) { return format_double(c.eps_grid_min); },
                         [](PipelineConfig& c, const std::string& k, const std::string& v) {
                           c.eps_grid_min = to_double(k, v);
                         }};
    t["eps_grid_max"] = {[](const PipelineConfig& c) { return format_double(c.eps_grid_max); },
                         [](PipelineConfig& c, const std::string& k, const std::string& v) {
                           c.eps_grid_max = to_double(k, v);
                         }};
    t["eps_grid_steps"] = {[](const PipelineConfig& c) { return std::to_string(c.eps_grid_steps); },
                           [](PipelineConfig& c, const std::string& k, const std::string& v) {
                             c.eps_grid_steps = to_int(k, v);
                           }};
    t["max_noise_fraction"] = {[](const PipelineConfig& c) { return format_double(c.max_noise_fraction); },
                               [](PipelineConfig& c, const std::string& k, const std::string& v) {
                                 c.max_noise_fraction = to_double(k, v);
                               }};
    t["fit_excluded_years"] = {[](const PipelineConfig& c) { return join(c.fit_excluded_years); },
                               [](PipelineConfig& c, const std::string& k, const std::string& v) {
                                 c.fit_excluded_years.clear();
                                 for (const auto& item : split_list(v)) c.fit_excluded_years.insert(to_int(k, item));
                               }};
    t["attainment_rounding"] = {
        [](const PipelineConfig& c) {
          return std::string(c.attainment_rounding == dynamics::RootRounding::Ceil ? "ceil" : "nearest");
        },
        [](PipelineConfig& c, const std::string& k, const std::string& v) {
          if (v == "ceil")
            c.attainment_rounding = dynamics::RootRounding::Ceil;
          else if (v == "nearest")
            c.attainment_rounding = dynamics::RootRounding::Nearest;
          else
            throw ConfigError(k + ": expected ceil or nearest");
        }};
    t["density_years"] = {[](const PipelineConfig& c) { return join(c.density_years); },
                          [](PipelineConfig& c, const std::string& k, const std::string& v) {
                            c.density_years.clear();
                            for (const auto& item : split_list(v)) c.density_years.push_back(to_int(k, item));
                          }};
    t["extrapolate_to"] = {[](const PipelineConfig& c) { return std::to_string(c.extrapolate_to); },
                           [](PipelineConfig& c, const std::string& k, const std::string& v) {
                             c.extrapolate_to = to_int(k, v);
                           }};
    t["correlation_per_year"] = {
        [](const PipelineConfig& c) { return std::string(c.correlation_per_year ? "true" : "false"); },
        [](PipelineConfig& c, const std::string& k, const std::string& v) { c.correlation_per_year = to_bool(k, v); }};
    t["threads"] = {[](const PipelineConfig& c) { return std::to_string(c.threads); },
                    [](PipelineConfig& c, const std::string& k, const std::string& v) { c.threads = to_int(k, v); }};
    t["year_color_start"] = {[](const PipelineConfig& c) { return c.palette.year_start; },
                             [](PipelineConfig& c, const std::string&, const std::string& v) { c.palette.year_start = v; }};
    t["year_color_end"] = {[](const PipelineConfig& c) { return c.palette.year_end; },
                           [](PipelineConfig& c, const std::string&, const std::string& v) { c.palette.year_end = v; }};
    t["cluster_colors"] = {[](const PipelineConfig& c) { return join(c.palette.clusters); },
                           [](PipelineConfig& c, const std::string& k, const std::string& v) {
                             auto colors = split_list(v);
                             if (colors.empty()) throw ConfigError(k + " needs at least one color");
                             c.palette.clusters = std::move(colors);
                           }};
    t["noise_color"] = {[](const PipelineConfig& c) { return c.palette.noise; },
                        [](PipelineConfig& c, const std::string&, const std::string& v) { c.palette.noise = v; }};
    return t;
  }();
  return table;
}

}  // namespace

void PipelineConfig::validate() const {
  if (pca_components < 1 || pca_components > kGoalCount) throw ConfigError("pca_components must be in 1..17");
  if (!(perplexity > 1.0)) throw ConfigError("perplexity must exceed 1");
  if (tsne_dims != 2 && tsne_dims != 3) throw ConfigError("tsne_dims must be 2 or 3");
  if (dbscan_eps && !(*dbscan_eps > 0.0)) throw ConfigError("dbscan_eps must be positive");
  if (dbscan_min_pts < 1) throw ConfigError("dbscan_min_pts must be >= 1");
  if (!(eps_grid_min > 0.0) || eps_grid_max < eps_grid_min || eps_grid_steps < 1)
    throw ConfigError("eps grid needs 0 < eps_grid_min <= eps_grid_max and eps_grid_steps >= 1");
  if (max_noise_fraction < 0.0 || max_noise_fraction > 1.0) throw ConfigError("max_noise_fraction must be in [0, 1]");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  try {
    schedule.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

void apply_setting(PipelineConfig& config, const std::string& key, const std::string& value) {
  const auto& table = fields();
  auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown key '" + key + "'");
  it->second.set(config, key, trim(value));
}

void apply_file(PipelineConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    // Whole-line comments only: colour values start with '#'.
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  PipelineConfig config;
  apply_file(config, path);
  return config;
}

std::map<std::string, std::string> snapshot(const PipelineConfig& config) {
  std::map<std::string, std::string> out;
  for (const auto& [key, field] : fields()) out[key] = field.get(config);
  return out;
}

std::string to_text(const PipelineConfig& config) {
  std::string out;
  for (const auto& [key, value] : snapshot(config)) out += key + " = " + value + "\n";
  return out;
}

std::vector<std::string> setting_keys() {
  std::vector<std::string> keys;
  for (const auto& [key, field] : fields()) keys.push_back(key);
  return keys;
}

}  // namespace sdg::report

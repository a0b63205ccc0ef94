#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fsekit/boundary.hpp"
#include "fsekit/halfline.hpp"
#include "fsekit/potential.hpp"
#include "fsekit/weight.hpp"

namespace fsekit {

/// Nested key-value configuration: "[section]" headers, "key = value" lines,
/// '#' comments.  Keys are addressed as "section.key".
class Config {
public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  long integer_or(const std::string& key, long fallback) const;
  bool flag_or(const std::string& key, bool fallback) const;
  /// Whitespace-separated list of numbers.
  std::vector<double> numbers(const std::string& key) const;

private:
  std::map<std::string, std::string> kv_;
  std::string origin_;
};

/// Run configuration assembled from a Config: the potential, boundary
/// conditions, weight preset and the scalar run parameters, validated at
/// load time.
struct RunConfig {
  Potential potential = Potential::zero();
  BoundaryCondition bc = BoundaryCondition::dirichlet();
  HalfLineBC halfline_bc;
  WeightFunction f = WeightFunction::identity();
  double nu = 1.0;
  double eta = 0.0;
  double contour_b = 0.0; // 0: default max(1, ||V||_1)
  double tol = 1e-6;
  int threads = 0;
  Config raw;

  static RunConfig load(const std::string& path);
  static RunConfig from_config(const Config& cfg);
};

} // namespace fsekit

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "conelift/funclift.hpp"

namespace conelift::cli {

/// Bad instance or CSV input; the message names the field and its line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instance {
  int dim = 0;
  NormTag norm = NormTag::L2;
  NormTag component_norm = NormTag::L2;
  std::vector<Cone> cones;
  std::optional<Matrix> map;
  std::optional<Cone> positive_cone;
  /// cones = [X⁺, −X⁺] built from positive_cone.
  bool ordered_cones = false;
  std::vector<RhoBound> constraints;
  SamplerConfig sampler;
  double epsilon = 1e-3;

  /// Explicit map on the product of the cones, or the summing map over them.
  ConeMap cone_map() const;
  OrderedSpace ordered_space() const;
};

Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

/// Header row then one point per line; columns are coordinates.
std::vector<Vector> read_points(const std::string& path, int dim);
/// Columns label, tail_flag, x1..xd.
SampledFunction read_function(const std::string& path, int dim);

/// %.12g formatting used for every number the tool prints.
std::string fmt(double v);
std::string join(const Vector& v);

}  // namespace conelift::cli

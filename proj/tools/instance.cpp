#include "instance.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace conelift::cli {

namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw ParseError(path + " (line " + std::to_string(line_of(path)) + "): " + msg);
  }

  const json& at(const json& obj, const std::string& key, const std::string& path) const {
    if (!obj.is_object() || !obj.contains(key)) fail(path + "." + key, "missing field");
    return obj.at(key);
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
  }

  int positive_int(const json& j, const std::string& path) const {
    if (!j.is_number_integer() || j.get<long long>() <= 0) fail(path, "expected a positive integer");
    return static_cast<int>(j.get<long long>());
  }

  Vector vector(const json& j, const std::string& path) const {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
    }
    return v;
  }

  /// Row-major list of rows; `cols` fixes the width when the list may be empty.
  Matrix matrix(const json& j, const std::string& path, int cols = -1) const {
    if (!j.is_array()) fail(path, "expected an array of rows");
    if (j.empty()) {
      if (cols < 0) fail(path, "expected at least one row");
      return Matrix(0, cols);
    }
    Matrix m;
    for (std::size_t r = 0; r < j.size(); ++r) {
      const std::string rp = path + "[" + std::to_string(r) + "]";
      const Vector row = vector(j[r], rp);
      if (r == 0) m.resize(static_cast<Eigen::Index>(j.size()), row.size());
      if (row.size() != m.cols()) fail(rp, "rows must have equal length");
      m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
  }

  NormTag norm_tag(const json& j, const std::string& path) const {
    if (j == "l1") return NormTag::L1;
    if (j == "l2") return NormTag::L2;
    if (j == "linf") return NormTag::Linf;
    fail(path, "expected one of \"l1\", \"l2\", \"linf\"");
  }

  Cone cone(const json& j, const std::string& path) const {
    const json& type = at(j, "type", path);
    if (type == "orthant") return Cone::orthant(positive_int(at(j, "dim", path), path + ".dim"));
    if (type == "second_order") {
      return Cone::second_order(positive_int(at(j, "dim", path), path + ".dim"));
    }
    if (type == "halfspaces") {
      const int cols = j.contains("dim") ? positive_int(j.at("dim"), path + ".dim") : -1;
      const Matrix A = matrix(at(j, "rows", path), path + ".rows", cols);
      if (cols > 0 && A.cols() != cols) fail(path + ".rows", "row length differs from dim");
      return Cone::halfspaces(A);
    }
    if (type == "generators") {
      // Listed generator by generator; stored as columns.
      return Cone::generators(matrix(at(j, "generators", path), path + ".generators").transpose());
    }
    if (type == "negation") return Cone::negation(cone(at(j, "inner", path), path + ".inner"));
    if (type == "product") {
      const json& parts = at(j, "parts", path);
      if (!parts.is_array() || parts.empty()) fail(path + ".parts", "expected a non-empty array");
      std::vector<Cone> out;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        out.push_back(cone(parts[i], path + ".parts[" + std::to_string(i) + "]"));
      }
      return Cone::product(std::move(out));
    }
    fail(path + ".type", "unknown cone type");
  }

 private:
  // Line of the last key of `path` found by scanning the keys in order.
  int line_of(const std::string& path) const {
    std::size_t pos = 0;
    std::size_t start = 0;
    while (start < path.size()) {
      std::size_t end = path.find_first_of(".[", start);
      if (end == std::string::npos) end = path.size();
      const std::string key = path.substr(start, end - start);
      if (!key.empty() && key.back() != ']' && key != "instance") {
        const std::size_t found = text_.find("\"" + key + "\"", pos);
        if (found != std::string::npos) pos = found;
      }
      start = end + 1;
      if (end < path.size() && path[end] == '[') start = path.find(']', end) + 1;
    }
    int line = 1;
    for (std::size_t i = 0; i < pos && i < text_.size(); ++i) line += text_[i] == '\n';
    return line;
  }

  const std::string& text_;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& cell, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size()) throw ParseError(where + ": not a number: '" + cell + "'");
  return v;
}

/// Rows after the header, with their 1-based line numbers.
std::vector<std::pair<int, std::vector<std::string>>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (n == 1) continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.emplace_back(n, split_csv(line));
  }
  if (n == 0) throw ParseError(path + ": empty file, expected a header row");
  return rows;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ConeMap Instance::cone_map() const {
  if (!map) return ConeMap::summing(cones, component_norm, norm);
  const Cone domain = cones.size() == 1 ? cones.front() : Cone::product(cones);
  return ConeMap(*map, domain, component_norm, norm);
}

OrderedSpace Instance::ordered_space() const {
  if (!positive_cone) throw ParseError("instance: this command needs a positive_cone");
  return OrderedSpace(*positive_cone, norm);
}

Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  const Reader rd(text);
  const std::string root = "instance";
  if (!j.is_object()) rd.fail(root, "expected an object");

  Instance inst;
  inst.dim = rd.positive_int(rd.at(j, "dimension", root), "dimension");
  inst.norm = rd.norm_tag(rd.at(j, "norm", root), "norm");
  inst.component_norm =
      j.contains("component_norm") ? rd.norm_tag(j.at("component_norm"), "component_norm") : inst.norm;

  if (j.contains("positive_cone")) {
    inst.positive_cone = rd.cone(j.at("positive_cone"), "positive_cone");
    if (inst.positive_cone->ambient_dim() != inst.dim) {
      rd.fail("positive_cone", "dimension differs from the instance dimension");
    }
  }
  if (j.contains("cones")) {
    const json& cones = j.at("cones");
    if (!cones.is_array() || cones.empty()) rd.fail("cones", "expected a non-empty array");
    for (std::size_t i = 0; i < cones.size(); ++i) {
      inst.cones.push_back(rd.cone(cones[i], "cones[" + std::to_string(i) + "]"));
    }
  } else if (inst.positive_cone) {
    inst.cones = {*inst.positive_cone, Cone::negation(*inst.positive_cone)};
    inst.ordered_cones = true;
  } else {
    rd.fail("cones", "missing field (or give positive_cone)");
  }

  int domain = 0;
  for (const Cone& c : inst.cones) domain += c.ambient_dim();
  if (j.contains("map")) {
    inst.map = rd.matrix(j.at("map"), "map");
    if (inst.map->rows() != inst.dim) rd.fail("map", "needs one row per dimension");
    if (inst.map->cols() != domain) rd.fail("map", "needs one column per cone coordinate");
  } else {
    for (std::size_t i = 0; i < inst.cones.size(); ++i) {
      if (inst.cones[i].ambient_dim() != inst.dim) {
        rd.fail("cones[" + std::to_string(i) + "]", "summing map needs cones of the instance dimension");
      }
    }
  }

  if (j.contains("constraints")) {
    const json& cs = j.at("constraints");
    if (!cs.is_array()) rd.fail("constraints", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string p = "constraints[" + std::to_string(i) + "]";
      const json& c = cs[i];
      const json& type = rd.at(c, "type", p);
      const double bound = rd.number(rd.at(c, "bound", p), p + ".bound");
      if (bound < 0.0) rd.fail(p + ".bound", "must be nonnegative");
      if (type == "seminorm") {
        const Matrix R = rd.matrix(rd.at(c, "matrix", p), p + ".matrix");
        if (R.cols() != domain) rd.fail(p + ".matrix", "needs one column per cone coordinate");
        const NormTag tag = rd.norm_tag(rd.at(c, "norm", p), p + ".norm");
        inst.constraints.push_back({Functional::norm(NormExpr::seminorm(R, tag)), bound});
      } else if (type == "linear") {
        const Vector w = rd.vector(rd.at(c, "weights", p), p + ".weights");
        if (w.size() != domain) rd.fail(p + ".weights", "needs one weight per cone coordinate");
        inst.constraints.push_back({Functional::linear(w), bound});
      } else {
        rd.fail(p + ".type", "expected \"seminorm\" or \"linear\"");
      }
    }
  }

  if (j.contains("sampler")) {
    const json& s = j.at("sampler");
    if (s.contains("samples")) {
      const json& n = s.at("samples");
      if (!n.is_number_integer() || n.get<long long>() < 0) rd.fail("sampler.samples", "expected a nonnegative integer");
      inst.sampler.samples = static_cast<int>(n.get<long long>());
    }
    if (s.contains("seed")) {
      const json& n = s.at("seed");
      if (!n.is_number_unsigned()) rd.fail("sampler.seed", "expected a nonnegative integer");
      inst.sampler.seed = n.get<std::uint64_t>();
    }
  }
  if (j.contains("epsilon")) {
    inst.epsilon = rd.number(j.at("epsilon"), "epsilon");
    if (!(inst.epsilon > 0.0)) rd.fail("epsilon", "must be positive");
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  try {
    return parse_instance(slurp(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::vector<Vector> read_points(const std::string& path, int dim) {
  std::vector<Vector> out;
  for (const auto& [line, cells] : read_csv(path)) {
    const std::string where = path + ":" + std::to_string(line);
    if (static_cast<int>(cells.size()) != dim) {
      throw ParseError(where + ": expected " + std::to_string(dim) + " columns");
    }
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = parse_double(cells[static_cast<std::size_t>(i)], where);
    out.push_back(std::move(v));
  }
  return out;
}

SampledFunction read_function(const std::string& path, int dim) {
  SampledFunction f;
  for (const auto& [line, cells] : read_csv(path)) {
    const std::string where = path + ":" + std::to_string(line);
    if (static_cast<int>(cells.size()) != dim + 2) {
      throw ParseError(where + ": expected label, tail_flag and " + std::to_string(dim) + " coordinates");
    }
    const std::string& flag = cells[1];
    if (flag != "0" && flag != "1" && flag != "true" && flag != "false") {
      throw ParseError(where + ": tail_flag must be 0, 1, true or false");
    }
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = parse_double(cells[static_cast<std::size_t>(i) + 2], where);
    f.space.labels.push_back(cells[0]);
    f.space.tail.push_back(flag == "1" || flag == "true");
    f.values.push_back(std::move(v));
  }
  try {
    f.validate();
  } catch (const DomainError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return f;
}

std::string fmt(double v) {
  if (v == 0.0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string join(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt(v(i));
  }
  return out;
}

}  // namespace conelift::cli

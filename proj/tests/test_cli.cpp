#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "commands.hpp"
#include "doctest.h"
#include "instance.hpp"

using namespace conelift;
using namespace conelift::cli;
namespace fs = std::filesystem;

namespace {
const std::string kData = CONELIFT_TEST_DATA;

std::string data(const std::string& name) { return kData + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "conelift_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

struct Run {
  int code;
  std::string out;
};

template <class F>
Run run(F command, const Options& opt) {
  std::ostringstream out;
  const int code = command(opt, out);
  return {code, out.str()};
}

Options with_instance(const std::string& name) {
  Options o;
  o.instance = data(name);
  return o;
}

// Exit status of the installed binary for the given arguments.
int binary(const std::string& args) {
  const std::string cmd = std::string(CONELIFT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + ": ");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 2));
}
}  // namespace

TEST_CASE("instance parsing") {
  const Instance inst = load_instance(data("lattice_l2.json"));
  CHECK(inst.dim == 2);
  CHECK(inst.cones.size() == 2);
  CHECK(inst.ordered_cones);
  CHECK(inst.sampler.seed == 7);

  try {
    load_instance(data("malformed.json"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("cones[1].type") != std::string::npos);
    CHECK(msg.find("line 5") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_instance("{\"dimension\": 2, \"norm\": \"l3\", \"cones\": []}"), ParseError);
  CHECK_THROWS_AS(parse_instance("{\"dimension\": 2, \"norm\": \"l2\""), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"dimension": 2, "norm": "l2",
    "cones": [{"type": "orthant", "dim": 2}], "map": [[1, 0, 0], [0, 1, 0]]})"),
                  ParseError);
  const Instance gens = parse_instance(R"({"dimension": 2, "norm": "l1",
    "cones": [{"type": "generators", "generators": [[1, 0], [1, 1]]},
              {"type": "product", "parts": [{"type": "orthant", "dim": 1},
                                            {"type": "negation", "inner": {"type": "orthant", "dim": 1}}]}]})");
  CHECK(gens.cones[0].matrix().col(1).isApprox(Vector::Ones(2)));
  CHECK(gens.cone_map().domain_dim() == 4);
}

TEST_CASE("number formatting") {
  CHECK(fmt(0.1) == "0.1");
  CHECK(fmt(-0.0) == "0");
  CHECK(fmt(std::sqrt(2.0)) == "1.41421356237");
  CHECK(fmt(1e-20) == "1e-20");
}

TEST_CASE("check-surjective verdicts") {
  const Run yes = run(check_surjective, with_instance("lattice_l2.json"));
  CHECK(yes.code == kOk);
  CHECK(yes.out.find("mode: exact") != std::string::npos);

  const Run no = run(check_surjective, with_instance("single_orthant.json"));
  CHECK(no.code == kNotSurjective);
  const auto pos = no.out.find("witness: ");
  REQUIRE(pos != std::string::npos);
  double a = 0, b = 0;
  REQUIRE(std::sscanf(no.out.c_str() + pos, "witness: %lf,%lf", &a, &b) == 2);
  CHECK(a < 0.0);
  CHECK(b < 0.0);

  CHECK(run(check_surjective, with_instance("ice_cream.json")).out.find("mode: sampled") !=
        std::string::npos);
  CHECK(binary("check-surjective " + data("lattice_l1.json")) == 0);
  CHECK(binary("check-surjective " + data("single_orthant.json")) == 2);
  CHECK(binary("check-surjective " + data("malformed.json")) == 1);
  CHECK(binary("check-surjective " + data("missing.json")) == 1);
}

TEST_CASE("constants") {
  Options o = with_instance("lattice_l1.json");
  o.kind = "sum";
  CHECK(field(run(constant, o).out, "lower") == doctest::Approx(1.0));
  o = with_instance("lattice_l2.json");
  o.kind = "sum";
  CHECK(std::abs(field(run(constant, o).out, "lower") - std::sqrt(2.0)) < 1e-3);
  o.kind = "openness";
  CHECK(std::abs(field(run(constant, o).out, "lower") - std::sqrt(2.0)) < 1e-3);
  o = with_instance("lattice_linf.json");
  o.kind = "sum";
  CHECK(std::abs(field(run(constant, o).out, "lower") - 2.0) < 1e-3);
  o = with_instance("halfplane.json");
  o.kind = "sum";
  CHECK(field(run(constant, o).out, "lower") == doctest::Approx(1.0).epsilon(1e-6));

  o = with_instance("single_orthant.json");
  CHECK(run(constant, o).code == kNotSurjective);
  o.kind = "plain";
  CHECK_THROWS_AS(run(constant, o), ParseError);

  o = with_instance("lattice_l2.json");
  o.kind = "plain";
  o.report = scratch("plain.csv").string();
  CHECK(run(constant, o).code == kOk);
  const std::string csv = slurp(o.report);
  CHECK(csv.rfind("x1,x2,value\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("decompose") {
  Options o = with_instance("lattice_l2.json");
  o.points = data("points.csv");
  const Run r = run(decompose, o);
  CHECK(r.code == kOk);
  CHECK(r.out.find("3,-4,3,0,0,4,3,4,1.4,ok\n") != std::string::npos);
  CHECK(r.out.find("0,0,0,0,0,0,0,0,0,ok\n") != std::string::npos);

  o = with_instance("projection.json");
  o.points = data("points_1d.csv");
  const Run bad = run(decompose, o);
  CHECK(bad.code == kFailedRows);
  CHECK(bad.out.find("-1,,,,,infeasible\n") != std::string::npos);
  CHECK(binary("decompose " + data("projection.json") + " --points " + data("points_1d.csv")) == 3);
}

TEST_CASE("rightinv respects constraints") {
  Options o = with_instance("constrained.json");
  o.points = data("points.csv");
  const Run r = run(rightinv, o);
  CHECK(r.code == kOk);
  o.instance = data("constrained.json");
  o.epsilon = 1e-3;
  CHECK(run(rightinv, o).code == kOk);
}

TEST_CASE("lift") {
  Options o = with_instance("lattice_l2.json");
  o.function = data("sine.csv");
  o.report = scratch("sine").string();
  const Run r = run(cli::lift, o);
  CHECK(r.code == kOk);
  for (const char* check : {"pointwise", "sup_norm", "support", "tail", "consistency"}) {
    CHECK(r.out.find(std::string(check) + ",yes") != std::string::npos);
  }
  const SampledFunction plus = read_function(o.report + "_plus.csv", 2);
  const SampledFunction minus = read_function(o.report + "_minus.csv", 2);
  const SampledFunction f = read_function(o.function, 2);
  for (std::size_t w = 0; w < f.values.size(); ++w) {
    CHECK((plus.values[w] - f.values[w].cwiseMax(0.0)).norm() < 1e-9);
    CHECK((minus.values[w] + f.values[w].cwiseMin(0.0)).norm() < 1e-9);
  }

  o.function = data("constant.csv");
  o.report = scratch("constant").string();
  CHECK(run(cli::lift, o).code == kOk);
  const std::string plus_text = slurp(o.report + "_plus.csv");
  CHECK(plus_text.find("p0,0,0.7,0\n") != std::string::npos);
  CHECK(plus_text.find("p9,1,0.7,0\n") != std::string::npos);

  const fs::path so = scratch("orthant_only.json");
  std::ofstream(so) << R"({"dimension": 2, "norm": "l2", "cones": [{"type": "orthant", "dim": 2}]})";
  o.instance = so.string();
  CHECK(run(cli::lift, o).code == kNotSurjective);
  CHECK(binary("lift " + so.string() + " --function " + data("constant.csv") + " --report " +
               scratch("x").string()) == 2);
}

TEST_CASE("outputs are byte-identical across runs") {
  auto twice = [](const std::string& args, const std::vector<std::string>& files) {
    std::string first;
    for (int k = 0; k < 2; ++k) {
      const fs::path out = scratch("stdout_" + std::to_string(k) + ".txt");
      const std::string cmd = std::string(CONELIFT_CLI_PATH) + " " + args + " > " + out.string();
      std::system(cmd.c_str());
      std::string all = slurp(out.string());
      for (const auto& f : files) all += slurp(f);
      if (k == 0) {
        first = all;
      } else {
        CHECK(!first.empty());
        CHECK(all == first);
      }
    }
  };
  const std::string report = scratch("det_report.csv").string();
  const std::string prefix = scratch("det_lift").string();
  twice("check-surjective " + data("ice_cream.json") + " --seed 3", {});
  twice("constant --kind sum " + data("lattice_l2.json") + " --seed 9 --report " + report, {report});
  twice("constant " + data("ice_cream.json") + " --samples 64 --report " + report, {report});
  twice("decompose " + data("lattice_l2.json") + " --points " + data("points.csv"), {});
  twice("rightinv " + data("constrained.json") + " --points " + data("points.csv"), {});
  twice("lift " + data("lattice_l2.json") + " --function " + data("sine.csv") + " --report " + prefix,
        {prefix + "_plus.csv", prefix + "_minus.csv"});
}

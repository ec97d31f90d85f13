#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "instance.hpp"

using namespace conelift::cli;

int main(int argc, char** argv) {
  CLI::App app{"Cone maps, open-mapping constants and ordered-space decompositions"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("instance", opt.instance, "Instance file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--samples", opt.samples, "Random sphere directions");
    sub->add_option("--seed", opt.seed, "Sampler seed");
    sub->add_option("--epsilon", opt.epsilon, "Constraint slack");
  };

  CLI::App* surj = app.add_subcommand("check-surjective", "Decide whether T(C) is the whole space");
  common(surj);
  CLI::App* cons = app.add_subcommand("constant", "Openness or conormality constant");
  common(cons);
  cons->add_option("--kind", opt.kind, "openness, plain, max or sum")
      ->check(CLI::IsMember({"openness", "plain", "max", "sum"}));
  cons->add_option("--report", opt.report, "Per-direction CSV output");
  CLI::App* dec = app.add_subcommand("decompose", "Minimal-Euclidean preimages of points");
  common(dec);
  dec->add_option("--points", opt.points, "Points CSV")->required()->check(CLI::ExistingFile);
  CLI::App* rinv = app.add_subcommand("rightinv", "Constrained right inverse at points");
  common(rinv);
  rinv->add_option("--points", opt.points, "Points CSV")->required()->check(CLI::ExistingFile);
  CLI::App* lft = app.add_subcommand("lift", "Lift a sampled function componentwise");
  common(lft);
  lft->add_option("--function", opt.function, "Function CSV (label,tail_flag,x1..xd)")
      ->required()
      ->check(CLI::ExistingFile);
  lft->add_option("--report", opt.report, "Output prefix for component files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*surj) return check_surjective(opt, std::cout);
    if (*cons) return constant(opt, std::cout);
    if (*dec) return decompose(opt, std::cout);
    if (*rinv) return rightinv(opt, std::cout);
    return lift(opt, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
}

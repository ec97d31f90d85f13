#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace conelift::cli {

enum Exit : int { kOk = 0, kError = 1, kNotSurjective = 2, kFailedRows = 3 };

struct Options {
  std::string instance;
  std::string kind = "openness";
  std::optional<int> samples;
  std::optional<unsigned long long> seed;
  std::optional<double> epsilon;
  std::string report;
  std::string points;
  std::string function;
};

int check_surjective(const Options& opt, std::ostream& out);
int constant(const Options& opt, std::ostream& out);
int decompose(const Options& opt, std::ostream& out);
int lift(const Options& opt, std::ostream& out);
int rightinv(const Options& opt, std::ostream& out);

}  // namespace conelift::cli

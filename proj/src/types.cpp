#include "conelift/types.hpp"

#include <algorithm>
#include <cctype>

namespace conelift {

std::string_view to_string(NormTag tag) {
  switch (tag) {
    case NormTag::L1:
      return "l1";
    case NormTag::L2:
      return "l2";
    case NormTag::Linf:
      return "linf";
  }
  return "?";
}

NormTag parse_norm_tag(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "l1") return NormTag::L1;
  if (lower == "l2") return NormTag::L2;
  if (lower == "linf" || lower == "l_inf" || lower == "max") return NormTag::Linf;
  throw std::invalid_argument("unknown norm tag '" + std::string(name) + "' (expected l1, l2, linf)");
}

double norm(NormTag tag, const Vector& x) {
  if (x.size() == 0) return 0.0;
  switch (tag) {
    case NormTag::L1:
      return x.lpNorm<1>();
    case NormTag::L2:
      return x.norm();
    case NormTag::Linf:
      return x.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

}  // namespace conelift

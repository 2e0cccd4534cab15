#include "annofilter/report.hpp"

namespace annofilter {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::mace:
      return "mace";
    case Method::crowdtruth:
      return "crowdtruth";
    case Method::kappa:
      return "kappa";
    case Method::random:
      return "random";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  for (Method m : {Method::mace, Method::crowdtruth, Method::kappa, Method::random}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

}  // namespace annofilter

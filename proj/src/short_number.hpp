#pragma once

#include <cstdio>
#include <string>

namespace bjgauss::detail {

// Six significant digits for diagnostics; std::to_string uses fixed notation.
inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace bjgauss::detail

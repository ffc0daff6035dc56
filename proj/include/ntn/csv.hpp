#pragma once

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace ntn::csv {

/// Nine significant digits; nan/inf spelled as most CSV readers expect.
inline std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline void header(std::ostream& os, std::initializer_list<std::string_view> cols) {
  bool first = true;
  for (auto c : cols) {
    if (!first) os << ',';
    os << c;
    first = false;
  }
  os << '\n';
}

inline void row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << number(v);
    first = false;
  }
  os << '\n';
}

}  // namespace ntn::csv

#pragma once

#include <cstdio>
#include <string>

namespace hypbayes {

/// Round-trip formatting used by every CSV writer.
inline std::string fmt_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace hypbayes

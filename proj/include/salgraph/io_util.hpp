#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace salgraph {

// 6-decimal fixed point, the observation-file resolution.
inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// 17 significant digits: lossless decimal round-trip for doubles.
inline std::string full17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Snaps a value to the observation-file resolution so that generated worlds
// survive the 6-decimal serialization bit-exactly.
inline double quantize6(double v) {
  return std::nearbyint(v * 1e6) / 1e6;
}

}  // namespace salgraph

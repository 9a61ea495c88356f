#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace gnp {

// Shortest round-trip decimal form. std::to_chars is locale-independent and
// deterministic, which keeps CSV/JSON output byte-stable across runs.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_u64(std::uint64_t v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace gnp

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icn/error.hpp"

namespace icn {

/// A bit sequence, one symbol per byte (0 or 1).
using Bits = std::vector<std::uint8_t>;
using BitSpan = std::span<const std::uint8_t>;

/// Parses "10010" into {1,0,0,1,0}.
inline Bits bits_from_string(std::string_view text) {
  Bits out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw Error(Errc::invalid_symbol, std::string("not a binary digit: '") + c + "'");
    }
    out.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

inline std::string to_string(BitSpan bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(static_cast<char>('0' + b));
  return out;
}

inline std::size_t hamming_distance(BitSpan a, BitSpan b) {
  if (a.size() != b.size()) {
    throw Error(Errc::invalid_parameter, "hamming_distance: length mismatch (" +
                                             std::to_string(a.size()) + " vs " +
                                             std::to_string(b.size()) + ")");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

}  // namespace icn

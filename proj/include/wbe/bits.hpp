// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wbe/error.hpp"

namespace wbe {

/// One bit per element, each 0 or 1.
using BitStream = std::vector<std::uint8_t>;

/// Hex digits to bits, most significant bit of each digit first. With
/// bit_count set, the stream is truncated to that many bits.
inline BitStream bits_from_hex(std::string_view hex, std::size_t bit_count = SIZE_MAX) {
  BitStream bits;
  bits.reserve(hex.size() * 4);
  for (char ch : hex) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    int v = 0;
    if (ch >= '0' && ch <= '9') {
      v = ch - '0';
    } else if (ch >= 'a' && ch <= 'f') {
      v = ch - 'a' + 10;
    } else if (ch >= 'A' && ch <= 'F') {
      v = ch - 'A' + 10;
    } else {
      throw Error(ErrorCode::ParseError, std::string("invalid hex digit '") + ch + "'");
    }
    for (int b = 3; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((v >> b) & 1));
  }
  if (bit_count != SIZE_MAX) {
    if (bit_count > bits.size()) throw Error(ErrorCode::ParseError, "hex string shorter than bit count");
    bits.resize(bit_count);
  }
  return bits;
}

/// Inverse of bits_from_hex; a trailing partial digit is zero-padded.
inline std::string bits_to_hex(const BitStream& bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    int v = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      v = (v << 1) | (i + b < bits.size() ? (bits[i + b] & 1) : 0);
    }
    out.push_back(kDigits[v]);
  }
  return out;
}

inline BitStream bits_from_bytes(const std::vector<std::uint8_t>& bytes) {
  BitStream bits;
  bits.reserve(bytes.size() * 8);
  for (std::uint8_t byte : bytes) {
    for (int b = 7; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((byte >> b) & 1));
  }
  return bits;
}

/// Maximal-length 6-bit Fibonacci LFSR for x^6 + x^5 + 1 (period 63).
class PnSequence {
 public:
  explicit PnSequence(std::uint64_t seed)
      : state_(static_cast<std::uint32_t>(seed % 63) + 1) {}

  std::uint8_t next() {
    const std::uint32_t out = (state_ >> 5) & 1U;
    const std::uint32_t feedback = ((state_ >> 5) ^ (state_ >> 4)) & 1U;
    state_ = ((state_ << 1) | feedback) & 0x3FU;
    return static_cast<std::uint8_t>(out);
  }

  static constexpr std::size_t kPeriod = 63;

 private:
  std::uint32_t state_;
};

inline BitStream pn_sequence(std::uint64_t seed, std::size_t length) {
  PnSequence lfsr(seed);
  BitStream bits(length);
  for (auto& b : bits) b = lfsr.next();
  return bits;
}

/// Deterministic filler payload (splitmix64), used when no payload is given.
inline BitStream random_bits(std::uint64_t seed, std::size_t length) {
  BitStream bits(length);
  std::uint64_t state = seed;
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < length; ++i) {
    if (i % 64 == 0) {
      state += 0x9E3779B97F4A7C15ULL;
      std::uint64_t z = state;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      word = z ^ (z >> 31);
    }
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1U);
  }
  return bits;
}

}  // namespace wbe

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "wbe/error.hpp"

namespace wbe {

/// Mono PCM audio in the normalized float domain. Integer sample v maps to
/// v / 32768, so every int16 value has an exact float image.
struct AudioSignal {
  std::vector<double> samples;
  std::uint32_t sample_rate = 44100;
  int source_bit_depth = 16;

  std::size_t size() const noexcept { return samples.size(); }
  double duration_seconds() const noexcept {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
};

inline constexpr double kInt16Scale = 32768.0;

inline std::int16_t to_int16(double sample) {
  const double scaled = std::nearbyint(sample * kInt16Scale);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

inline double from_int16(std::int16_t value) { return static_cast<double>(value) / kInt16Scale; }

/// Saturate to int16 and back, i.e. what a write/read cycle does to the data.
inline AudioSignal quantize_int16(AudioSignal signal) {
  for (double& s : signal.samples) s = from_int16(to_int16(s));
  return signal;
}

namespace detail {

inline std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_tag(std::vector<std::uint8_t>& out, const char (&tag)[5]) {
  out.insert(out.end(), tag, tag + 4);
}

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace detail

/// Parse an in-memory RIFF/WAVE image. Only 16-bit mono PCM is accepted;
/// anything else is reported as UnsupportedFormat rather than converted.
inline AudioSignal parse_wav(std::span<const std::uint8_t> bytes) {
  using detail::read_u16;
  using detail::read_u32;
  if (bytes.size() < 12 || !std::equal(bytes.begin(), bytes.begin() + 4, "RIFF") ||
      !std::equal(bytes.begin() + 8, bytes.begin() + 12, "WAVE")) {
    throw Error(ErrorCode::UnsupportedFormat, "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::equal(chunk, chunk + 4, "fmt ")) {
      if (size < 16 || size > available) throw Error(ErrorCode::UnsupportedFormat, "truncated fmt chunk");
      std::uint16_t format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      if (format == detail::kFormatExtensible && size >= 40) {
        // First two bytes of the sub-format GUID carry the real format tag.
        format = read_u16(chunk + 8 + 24);
      }
      if (format != detail::kFormatPcm) {
        throw Error(ErrorCode::UnsupportedFormat, "only PCM WAV is supported");
      }
      have_fmt = true;
    } else if (std::equal(chunk, chunk + 4, "data")) {
      data = chunk + 8;
      data_size = std::min<std::size_t>(size, available);
    }
    pos = body + size + (size & 1U);
  }

  if (!have_fmt || data == nullptr) throw Error(ErrorCode::UnsupportedFormat, "missing fmt or data chunk");
  if (channels != 1) {
    throw Error(ErrorCode::UnsupportedFormat,
                "expected mono audio, got " + std::to_string(channels) + " channels");
  }
  if (bits != 16) {
    throw Error(ErrorCode::UnsupportedFormat, "expected 16-bit samples, got " + std::to_string(bits));
  }
  if (rate == 0) throw Error(ErrorCode::UnsupportedFormat, "sample rate is zero");

  AudioSignal signal;
  signal.sample_rate = rate;
  signal.source_bit_depth = 16;
  const std::size_t count = data_size / 2;
  signal.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    signal.samples[i] = from_int16(static_cast<std::int16_t>(read_u16(data + 2 * i)));
  }
  return signal;
}

inline AudioSignal read_wav(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::FileNotFound, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_wav(bytes);
}

/// Canonical 44-byte-header 16-bit mono PCM image. Out-of-range samples
/// saturate at the int16 limits.
inline std::vector<std::uint8_t> encode_wav(const AudioSignal& signal) {
  using namespace detail;
  if (signal.sample_rate == 0) throw Error(ErrorCode::DomainError, "sample rate must be positive");
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(signal.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, signal.sample_rate);
  put_u32(out, signal.sample_rate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : signal.samples) {
    if (!std::isfinite(s)) throw Error(ErrorCode::DomainError, "non-finite sample");
    put_u16(out, static_cast<std::uint16_t>(to_int16(s)));
  }
  return out;
}

inline void write_wav(const std::filesystem::path& path, const AudioSignal& signal) {
  const auto bytes = encode_wav(signal);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

}  // namespace wbe

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wbe/embedder.hpp"
#include "wbe/error.hpp"

namespace wbe {

inline constexpr int kKeyFormatVersion = 1;

inline std::string format_double17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Key file text. Layout and field names are fixed; floats carry 17
/// significant digits so they parse back to the same double.
inline std::string format_key(const WatermarkKey& key) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"version\": " << key.version << ",\n";
  out << "  \"epsilon\": " << format_double17(key.epsilon) << ",\n";
  out << "  \"level\": " << key.level << ",\n";
  out << "  \"filter\": \"" << key.filter << "\",\n";
  out << "  \"pn_seed\": " << key.pn_seed << ",\n";
  out << "  \"sync_length\": " << key.sync_length << ",\n";
  out << "  \"payload_length\": " << key.payload_length << ",\n";
  out << "  \"segments\": [";
  for (std::size_t i = 0; i < key.segments.size(); ++i) {
    const auto& s = key.segments[i];
    out << (i == 0 ? "\n" : ",\n") << "    {\"start\": " << s.start << ", \"length\": " << s.length
        << ", \"f_mean\": " << format_double17(s.f_mean) << "}";
  }
  out << (key.segments.empty() ? "]\n" : "\n  ]\n");
  out << "}\n";
  return out.str();
}

inline WatermarkKey parse_key(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("key file is not valid JSON: ") + e.what());
  }

  WatermarkKey key;
  try {
    key.version = doc.at("version").get<int>();
    if (key.version != kKeyFormatVersion) {
      throw Error(ErrorCode::ParseError, "unsupported key version " + std::to_string(key.version));
    }
    key.epsilon = doc.at("epsilon").get<double>();
    key.level = doc.at("level").get<int>();
    key.filter = doc.at("filter").get<std::string>();
    key.pn_seed = doc.at("pn_seed").get<std::uint64_t>();
    key.sync_length = doc.at("sync_length").get<std::size_t>();
    key.payload_length = doc.at("payload_length").get<std::size_t>();
    for (const auto& s : doc.at("segments")) {
      key.segments.push_back({s.at("start").get<std::size_t>(), s.at("length").get<std::size_t>(),
                              s.at("f_mean").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed key file: ") + e.what());
  }
  return key;
}

/// Structural checks a key must pass before it can drive extraction.
inline void validate_key(const WatermarkKey& key) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::KeyMismatch, why); };
  if (key.level < 1 || key.level > 30) fail("level out of range");
  if (!(key.epsilon > 0.0)) fail("epsilon must be positive");
  if (key.sync_length < 1) fail("sync length must be positive");
  if (key.segments.empty()) fail("key has no segments");
  try {
    (void)filter_by_name(key.filter);
  } catch (const Error&) {
    fail("unknown filter '" + key.filter + "'");
  }
  const std::size_t block = level_block(key.level);
  std::size_t room = 0;
  for (std::size_t s = 0; s < key.segments.size(); ++s) {
    const auto& seg = key.segments[s];
    if (seg.length == 0 || seg.length % block != 0) fail("segment length is not a multiple of 2^level");
    if (!epsilon_admissible(seg.f_mean, key.epsilon)) fail("segment F_mean incompatible with epsilon");
    const auto [begin, end] = payload_slice(s, key.segments.size(), key.payload_length);
    if (key.sync_length + (end - begin) > pair_count(seg.length, key.level)) {
      fail("segment " + std::to_string(s) + " cannot hold its payload slice");
    }
    room += pair_count(seg.length, key.level) - key.sync_length;
  }
  if (key.payload_length > room) fail("payload length exceeds layout capacity");
}

inline void write_key(const std::filesystem::path& path, const WatermarkKey& key) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << format_key(key);
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

inline WatermarkKey read_key(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::FileNotFound, path.string());
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_key(buf.str());
}

}  // namespace wbe

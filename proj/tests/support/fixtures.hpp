// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "wbe/audio_io.hpp"

#ifndef WBE_CLIP_DIR
#define WBE_CLIP_DIR "clips"
#endif

namespace wbe::fixtures {

inline const char* const kClipNames[] = {"popular", "symphony", "piano", "dance"};

inline AudioSignal load_clip(const std::string& name) {
  return read_wav(std::filesystem::path(WBE_CLIP_DIR) / (name + ".wav"));
}

inline std::vector<double> gaussian_samples(std::size_t n, std::uint64_t seed, double sigma = 0.1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  std::vector<double> x(n);
  for (double& v : x) v = dist(rng);
  return x;
}

/// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("wbe-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace wbe::fixtures

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

// Writes the synthetic test clips (popular, symphony, piano, dance) as
// 16-bit mono WAV files into the given directory.

#include <cstdio>
#include <filesystem>
#include <string>

#include "support/clips.hpp"
#include "wbe/audio_io.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s OUTPUT_DIR\n", argv[0]);
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  try {
    for (const auto& clip : wbe::clips::kClips) {
      const auto path = dir / (std::string(clip.name) + ".wav");
      wbe::write_wav(path, clip.make());
      std::printf("%s\n", path.string().c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "wbe/audio_io.hpp"

using namespace wbe;

namespace {

std::vector<std::uint8_t> header_with(std::uint16_t channels, std::uint16_t bits, std::uint16_t format = 1) {
  AudioSignal s;
  s.samples = {0.0, 0.5};
  auto bytes = encode_wav(s);
  bytes[20] = static_cast<std::uint8_t>(format);
  bytes[22] = static_cast<std::uint8_t>(channels);
  bytes[34] = static_cast<std::uint8_t>(bits);
  return bytes;
}

}  // namespace

TEST(AudioIo, SilenceSecondReadsAsZeros) {
  wbe::fixtures::TempDir dir;
  AudioSignal silence;
  silence.samples.assign(44100, 0.0);
  write_wav(dir / "silence.wav", silence);
  const AudioSignal got = read_wav(dir / "silence.wav");
  ASSERT_EQ(got.size(), 44100u);
  EXPECT_EQ(got.sample_rate, 44100u);
  for (double v : got.samples) ASSERT_EQ(v, 0.0);
}

TEST(AudioIo, FullScaleMapsToFraction) {
  EXPECT_EQ(from_int16(32767), 32767.0 / 32768.0);
  EXPECT_EQ(from_int16(-32768), -1.0);
}

TEST(AudioIo, SaturatesOutOfRange) {
  EXPECT_EQ(to_int16(1.5), 32767);
  EXPECT_EQ(to_int16(-2.0), -32768);
  EXPECT_EQ(to_int16(1.0), 32767);
}

TEST(AudioIo, EveryInt16SurvivesRoundTrip) {
  for (int v = -32768; v <= 32767; ++v) {
    ASSERT_EQ(to_int16(from_int16(static_cast<std::int16_t>(v))), v);
  }
}

TEST(AudioIo, FileRoundTripIsExact) {
  wbe::fixtures::TempDir dir;
  AudioSignal s;
  s.sample_rate = 22050;
  for (int v = -32768; v <= 32767; v += 7) s.samples.push_back(from_int16(static_cast<std::int16_t>(v)));
  write_wav(dir / "ramp.wav", s);
  const AudioSignal got = read_wav(dir / "ramp.wav");
  EXPECT_EQ(got.sample_rate, 22050u);
  EXPECT_EQ(got.samples, s.samples);
}

TEST(AudioIo, RejectsStereo) {
  const auto bytes = header_with(2, 16);
  try {
    parse_wav(bytes);
    FAIL() << "stereo accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedFormat);
  }
}

TEST(AudioIo, RejectsOtherBitDepthsAndFloat) {
  for (auto bytes : {header_with(1, 24), header_with(1, 8), header_with(1, 32, 3)}) {
    try {
      parse_wav(bytes);
      FAIL() << "format accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::UnsupportedFormat);
    }
  }
}

TEST(AudioIo, SkipsUnknownChunks) {
  AudioSignal s;
  s.samples = {0.25, -0.25, 0.125};
  auto bytes = encode_wav(s);
  // Insert a "LIST" chunk of odd size (padded) between fmt and data.
  const std::vector<std::uint8_t> list = {'L', 'I', 'S', 'T', 3, 0, 0, 0, 'a', 'b', 'c', 0};
  bytes.insert(bytes.begin() + 36, list.begin(), list.end());
  const AudioSignal got = parse_wav(bytes);
  EXPECT_EQ(got.samples, s.samples);
}

TEST(AudioIo, MissingFileAndGarbage) {
  try {
    read_wav("/nonexistent/definitely/missing.wav");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
  }
  const std::vector<std::uint8_t> junk(64, 0x41);
  EXPECT_THROW(parse_wav(junk), Error);
}

TEST(AudioIo, NonFiniteSamplesRefused) {
  AudioSignal s;
  s.samples = {0.0, std::nan("")};
  EXPECT_THROW(encode_wav(s), Error);
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "wbe/key_file.hpp"

using namespace wbe;

namespace {

WatermarkKey sample_key() {
  WatermarkKey k;
  k.epsilon = 0.03;
  k.level = 8;
  k.pn_seed = 7;
  k.payload_length = 500;
  for (std::size_t s = 0; s < 4; ++s) k.segments.push_back({s * 128000, 128000, 0.1 * (s + 3) + 1.0 / 3.0 * 1e-3});
  return k;
}

}  // namespace

TEST(KeyFile, RoundTripIsExact) {
  const WatermarkKey k = sample_key();
  const std::string text = format_key(k);
  const WatermarkKey back = parse_key(text);
  EXPECT_EQ(back.epsilon, k.epsilon);
  EXPECT_EQ(back.level, k.level);
  EXPECT_EQ(back.filter, k.filter);
  EXPECT_EQ(back.pn_seed, k.pn_seed);
  EXPECT_EQ(back.sync_length, k.sync_length);
  EXPECT_EQ(back.payload_length, k.payload_length);
  ASSERT_EQ(back.segments.size(), 4u);
  for (std::size_t s = 0; s < 4; ++s) {
    EXPECT_EQ(back.segments[s].start, k.segments[s].start);
    EXPECT_EQ(back.segments[s].f_mean, k.segments[s].f_mean);
  }
  EXPECT_EQ(format_key(back), text);
  EXPECT_NO_THROW(validate_key(back));
}

TEST(KeyFile, FieldNamesAreFixed) {
  const std::string text = format_key(sample_key());
  for (const char* field : {"\"version\"", "\"epsilon\"", "\"level\"", "\"filter\"", "\"pn_seed\"", "\"sync_length\"",
                            "\"payload_length\"", "\"segments\"", "\"start\"", "\"length\"", "\"f_mean\""}) {
    EXPECT_NE(text.find(field), std::string::npos) << field;
  }
}

TEST(KeyFile, CorruptTextIsParseError) {
  for (const char* bad : {"", "{", "{\"version\": 1}", "not json at all", "{\"version\": 2, \"epsilon\": 0.03}"}) {
    try {
      parse_key(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
    }
  }
}

TEST(KeyFile, InconsistentKeyIsRejected) {
  WatermarkKey k = sample_key();
  k.segments[1].length = 1000;
  EXPECT_THROW(validate_key(k), Error);
  k = sample_key();
  k.segments[2].f_mean = 0.05;
  EXPECT_THROW(validate_key(k), Error);
  k = sample_key();
  k.filter = "coif3";
  EXPECT_THROW(validate_key(k), Error);
  k = sample_key();
  k.payload_length = 4 * 250;
  try {
    validate_key(k);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::KeyMismatch);
  }
}

TEST(KeyFile, ReadWriteFile) {
  wbe::fixtures::TempDir dir;
  write_key(dir / "k.json", sample_key());
  EXPECT_EQ(format_key(read_key(dir / "k.json")), format_key(sample_key()));
  try {
    read_key(dir / "missing.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
  }
}

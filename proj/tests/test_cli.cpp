// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "support/fixtures.hpp"

#ifndef WBE_CLI_PATH
#define WBE_CLI_PATH "wbe_cli"
#endif

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(WBE_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) r.out += buf.data();
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string clip_path(const std::string& name) { return std::string(WBE_CLIP_DIR) + "/" + name + ".wav"; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kPayload = "0123456789abcdef0123456789abcdef0123456789abcdef";

}  // namespace

TEST(Cli, EmbedThenExtract) {
  wbe::fixtures::TempDir dir;
  const auto wav = (dir / "marked.wav").string();
  const auto key = (dir / "key.json").string();
  const CliRun e = run_cli("embed --in " + clip_path("popular") + " --out " + wav + " --key " + key +
                        " --payload-hex " + kPayload);
  ASSERT_EQ(e.status, 0) << e.out;
  EXPECT_NE(e.out.find("capacity_bits 1000\n"), std::string::npos) << e.out;
  EXPECT_NE(e.out.find("snr_db"), std::string::npos);

  const CliRun x = run_cli("extract --in " + wav + " --key " + key + " --expect-hex " + kPayload);
  ASSERT_EQ(x.status, 0);
  EXPECT_NE(x.out.find("payload " + kPayload + "\n"), std::string::npos) << x.out;
  EXPECT_NE(x.out.find("ber_percent 0.0000"), std::string::npos);
  EXPECT_NE(x.out.find("segment 3 sync found offset 0"), std::string::npos) << x.out;
}

TEST(Cli, KeyFilesAreReproducible) {
  wbe::fixtures::TempDir dir;
  for (const char* tag : {"a", "b"}) {
    const CliRun e = run_cli("embed --in " + clip_path("piano") + " --out " + (dir / (std::string(tag) + ".wav")).string() +
                          " --key " + (dir / (std::string(tag) + ".json")).string() + " --payload-hex ff00");
    ASSERT_EQ(e.status, 0);
  }
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
  EXPECT_EQ(slurp(dir / "a.wav"), slurp(dir / "b.wav"));
}

TEST(Cli, AttackThenExtractWithFlags) {
  wbe::fixtures::TempDir dir;
  const auto wav = (dir / "m.wav").string();
  const auto key = (dir / "k.json").string();
  ASSERT_EQ(run_cli("embed --in " + clip_path("symphony") + " --out " + wav + " --key " + key + " --level 7" +
                    " --payload-hex " + kPayload)
                .status,
            0);
  const auto attacked = (dir / "a.wav").string();
  ASSERT_EQ(run_cli("attack --in " + wav + " --out " + attacked + " --kind amplitude --param 0.8").status, 0);
  const auto flags = (dir / "flags.json").string();
  const CliRun x = run_cli("extract --in " + attacked + " --key " + key + " --flags-out " + flags);
  ASSERT_EQ(x.status, 0);
  EXPECT_NE(x.out.find("payload " + kPayload), std::string::npos);
  EXPECT_NE(x.out.find("soft_bits 0"), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(flags));
  EXPECT_EQ(j["payload_hex"], kPayload);
  EXPECT_EQ(j["hard"].get<std::string>(), std::string(kPayload.size() * 4, '1'));
}

TEST(Cli, ExitCodesPerErrorClass) {
  wbe::fixtures::TempDir dir;
  const auto out = (dir / "o.wav").string();
  const auto key = (dir / "k.json").string();
  const std::string base = "embed --in " + clip_path("popular") + " --out " + out + " --key " + key;

  EXPECT_EQ(run_cli("").status, 2);
  EXPECT_EQ(run_cli("embed --in x.wav").status, 2);
  EXPECT_EQ(run_cli("--version").status, 0);
  // FileNotFound
  EXPECT_EQ(run_cli("embed --in /nonexistent.wav --out " + out + " --key " + key + " --payload-hex 00").status, 10);
  // KeyInvariantViolated
  EXPECT_EQ(run_cli(base + " --epsilon 0.4 --payload-hex 00").status, 19);
  // CapacityExceeded
  EXPECT_EQ(run_cli(base + " --payload-hex " + std::string(300, 'f')).status, 20);
  // ParseError on a corrupt key
  {
    std::ofstream(key) << "{ this is not a key";
  }
  EXPECT_EQ(run_cli("extract --in " + clip_path("popular") + " --key " + key).status, 13);
  // Bad attack parameters
  EXPECT_EQ(run_cli("attack --in " + clip_path("popular") + " --out " + out + " --kind resample --param 96000").status,
            23);
  EXPECT_EQ(run_cli("attack --in " + clip_path("popular") + " --out " + out + " --kind lowpass --param 40").status,
            24);
}

TEST(Cli, EvaluateAmplitudeSweep) {
  wbe::fixtures::TempDir dir;
  const auto report = (dir / "r.json").string();
  const auto table = (dir / "t.txt").string();
  const CliRun r = run_cli("evaluate --in " + clip_path("dance") + " --levels 8 --attacks amplitude --report " + report +
                        " --table " + table);
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(slurp(report));
  ASSERT_EQ(j["runs"].size(), 1u);
  EXPECT_EQ(j["runs"][0]["clip"], "dance");
  ASSERT_EQ(j["runs"][0]["rows"].size(), 5u);
  for (const auto& row : j["runs"][0]["rows"]) EXPECT_LE(row["ber_percent"].get<double>(), 2.0);
  EXPECT_NE(slurp(table).find("BER (%) FOR AMPLITUDE SCALING"), std::string::npos);
}

TEST(Cli, EvaluateWithoutAttacksHasOneRow) {
  const CliRun r = run_cli("evaluate --in " + clip_path("piano") + " --levels 7 --attacks none");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["runs"][0]["rows"].size(), 1u);
  EXPECT_EQ(j["runs"][0]["rows"][0]["ber_percent"], 0.0);
}

TEST(Cli, Stats) {
  const CliRun r = run_cli("stats --in " + clip_path("popular") + " --level 7");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("pairs 2000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("mean 0."), std::string::npos);
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

// Command-line front end: embed, extract, attack, evaluate, stats.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wbe/wbe.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

// Library errors map to 10 + their code, one exit status per error class.
int exit_code_for(wbe::ErrorCode code) { return 10 + static_cast<int>(code); }

struct PayloadArgs {
  std::string hex;
  std::string file;
};

void add_payload_options(CLI::App* cmd, PayloadArgs& p) {
  auto* hex = cmd->add_option("--payload-hex", p.hex, "Payload as hex digits, MSB first");
  auto* file = cmd->add_option("--payload-file", p.file, "Payload as raw bytes from a file");
  hex->excludes(file);
}

std::optional<wbe::BitStream> load_payload(const PayloadArgs& p) {
  if (!p.hex.empty()) return wbe::bits_from_hex(p.hex);
  if (!p.file.empty()) {
    if (!fs::exists(p.file)) throw wbe::Error(wbe::ErrorCode::FileNotFound, p.file);
    std::ifstream in(p.file, std::ios::binary);
    if (!in) throw wbe::Error(wbe::ErrorCode::IoError, "cannot open " + p.file);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return wbe::bits_from_bytes(bytes);
  }
  return std::nullopt;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw wbe::Error(wbe::ErrorCode::IoError, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw wbe::Error(wbe::ErrorCode::IoError, "short write to " + path);
}

void add_embed_options(CLI::App* cmd, wbe::EmbedConfig& c, bool with_level) {
  cmd->add_option("--epsilon", c.epsilon, "Embedding strength in nats")->capture_default_str();
  if (with_level) cmd->add_option("--level", c.level, "DWT decomposition level")->capture_default_str();
  cmd->add_option("--segments", c.segments, "Number of segments")->capture_default_str();
  cmd->add_option("--filter", c.filter, "Wavelet filter (db8, haar)")->capture_default_str();
  cmd->add_option("--pn-seed", c.pn_seed, "Sync PN sequence seed")->capture_default_str();
  cmd->add_option("--sync-length", c.sync_length, "Sync prefix length in bits")->capture_default_str();
}

void add_sync_options(CLI::App* cmd, wbe::ExtractOptions& o) {
  cmd->add_flag("--recompute-mean", o.recompute_mean, "Estimate F_mean from the received audio");
  cmd->add_option("--sync-stride", o.sync.stride, "Sync search stride in samples (0: 2^level)")
      ->capture_default_str();
  cmd->add_option("--sync-threshold", o.sync.threshold, "Sync correlation threshold")->capture_default_str();
  cmd->add_option("--sync-window", o.sync.window, "Sync search half-width in samples (-1: auto)")
      ->capture_default_str();
}

void add_mp3_options(CLI::App* cmd, wbe::Mp3Options& m) {
  cmd->add_option("--mp3-encoder", m.encoder,
                  std::string("MP3 round-trip program (default $") + wbe::kMp3EncoderEnv + ", then lame)");
  cmd->add_option("--mp3-command", m.command, "Shell template: {encoder} {input} {output} {bitrate} {mp3}")
      ->capture_default_str();
}

int run_embed(const std::string& in, const std::string& out, const std::string& key_path, const PayloadArgs& p,
              const wbe::EmbedConfig& config) {
  const wbe::AudioSignal audio = wbe::read_wav(in);
  const auto payload = load_payload(p);
  if (!payload) throw CLI::ValidationError("embed", "one of --payload-hex or --payload-file is required");
  const auto layout = wbe::segment_layout(audio.size(), config.level, config.segments);

  wbe::EmbedResult result = wbe::embed(audio, *payload, config);
  const wbe::AudioSignal stored = wbe::quantize_int16(std::move(result.watermarked));
  wbe::write_wav(out, stored);
  wbe::write_key(key_path, result.key);

  std::printf("capacity_bits %zu\n", wbe::capacity(audio.size(), config.level, 0, 1));
  std::printf("net_capacity_bits %zu\n", wbe::net_capacity(layout, config.level, config.sync_length));
  std::printf("payload_bits %zu\n", payload->size());
  std::printf("snr_db %.4f\n", wbe::snr(audio, stored));
  return kExitOk;
}

int run_extract(const std::string& in, const std::string& key_path, const wbe::ExtractOptions& options,
                const std::string& flags_out, const std::string& expect_hex) {
  const wbe::AudioSignal audio = wbe::read_wav(in);
  const wbe::WatermarkKey key = wbe::read_key(key_path);
  const wbe::ExtractResult got = wbe::extract(audio, key, options);

  std::printf("payload %s\n", wbe::bits_to_hex(got.payload).c_str());
  std::printf("payload_bits %zu soft_bits %zu\n", got.payload.size(), got.soft_count());
  for (std::size_t s = 0; s < got.segments.size(); ++s) {
    const auto& seg = got.segments[s];
    std::printf("segment %zu sync %s offset %td correlation %.4f f_mean %.6f soft %zu\n", s,
                seg.sync.found ? "found" : "missing", seg.sync.offset, seg.sync.correlation, seg.f_mean,
                seg.soft_bits);
  }
  if (!expect_hex.empty()) {
    const wbe::BitStream expected = wbe::bits_from_hex(expect_hex, got.payload.size());
    std::printf("ber_percent %.4f\n", wbe::ber(expected, got.payload));
  }
  if (!flags_out.empty()) {
    nlohmann::ordered_json j;
    std::string bits;
    std::string hard;
    for (std::size_t i = 0; i < got.payload.size(); ++i) {
      bits.push_back(got.payload[i] ? '1' : '0');
      hard.push_back(got.hard[i] ? '1' : '0');
    }
    j["payload_hex"] = wbe::bits_to_hex(got.payload);
    j["bits"] = bits;
    j["hard"] = hard;
    nlohmann::ordered_json segs = nlohmann::ordered_json::array();
    for (const auto& seg : got.segments) {
      segs.push_back({{"sync_found", seg.sync.found},
                      {"offset", seg.sync.offset},
                      {"correlation", seg.sync.correlation},
                      {"f_mean", seg.f_mean},
                      {"soft_bits", seg.soft_bits}});
    }
    j["segments"] = std::move(segs);
    write_text(flags_out, j.dump(2) + "\n");
  }
  return kExitOk;
}

int run_attack(const std::string& in, const std::string& out, const std::string& kind, double param,
               const wbe::Mp3Options& mp3) {
  const wbe::AudioSignal audio = wbe::read_wav(in);
  const wbe::AttackSpec spec{wbe::attack_kind_from_string(kind), param};
  wbe::write_wav(out, wbe::quantize_int16(wbe::apply_attack(audio, spec, mp3)));
  return kExitOk;
}

std::vector<wbe::AttackSpec> parse_attack_selection(const std::vector<std::string>& names) {
  std::vector<wbe::AttackSpec> specs;
  for (const auto& name : names) {
    if (name == "all") {
      const auto all = wbe::full_attack_sweep();
      specs.insert(specs.end(), all.begin(), all.end());
      continue;
    }
    // kind or kind=param
    const auto eq = name.find('=');
    const wbe::AttackKind kind = wbe::attack_kind_from_string(name.substr(0, eq));
    if (eq == std::string::npos) {
      const auto grid = wbe::default_attack_grid(kind);
      specs.insert(specs.end(), grid.begin(), grid.end());
    } else {
      try {
        specs.push_back({kind, std::stod(name.substr(eq + 1))});
      } catch (const std::exception&) {
        throw wbe::Error(wbe::ErrorCode::ParseError, "bad attack parameter in '" + name + "'");
      }
    }
  }
  return specs;
}

int run_evaluate(const std::vector<std::string>& inputs, wbe::EvaluateConfig config,
                 const std::vector<std::string>& attacks, const PayloadArgs& p, const std::string& report_path,
                 const std::string& table_path) {
  std::vector<wbe::NamedClip> clips;
  for (const auto& path : inputs) clips.push_back({fs::path(path).stem().string(), wbe::read_wav(path)});
  config.attacks = parse_attack_selection(attacks);
  config.payload = load_payload(p);

  const wbe::EvalReport report = wbe::evaluate(clips, config);
  write_text(report_path, wbe::format_report(report));
  if (!table_path.empty()) write_text(table_path, wbe::render_tables(report));
  return kExitOk;
}

int run_stats(const std::string& in, int level, const std::string& filter, int segments) {
  const wbe::AudioSignal audio = wbe::read_wav(in);
  const wbe::WbeStatistics s = wbe::wbe_statistics(audio, level, wbe::filter_by_name(filter), segments);
  std::printf("pairs %zu\nmean %.6f\nstddev %.6f\n", s.pairs, s.mean, s.stddev);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind audio watermarking with wavelet-based entropy"};
  app.set_version_flag("--version", std::string(wbe::kToolVersion));
  app.require_subcommand(1);

  // embed
  std::string embed_in, embed_out, embed_key;
  PayloadArgs embed_payload;
  wbe::EmbedConfig embed_config;
  auto* embed = app.add_subcommand("embed", "Embed a payload and write the key file");
  embed->add_option("--in", embed_in, "Input WAV (16-bit mono)")->required();
  embed->add_option("--out", embed_out, "Watermarked WAV")->required();
  embed->add_option("--key", embed_key, "Key file to write")->required();
  add_payload_options(embed, embed_payload);
  add_embed_options(embed, embed_config, true);

  // extract
  std::string extract_in, extract_key, flags_out, expect_hex;
  wbe::ExtractOptions extract_options;
  auto* extract = app.add_subcommand("extract", "Recover the payload using the key file");
  extract->add_option("--in", extract_in, "Watermarked (possibly attacked) WAV")->required();
  extract->add_option("--key", extract_key, "Key file from embed")->required();
  extract->add_option("--flags-out", flags_out, "Write per-bit flags as JSON ('-' for stdout)");
  extract->add_option("--expect-hex", expect_hex, "Reference payload; prints the bit error rate");
  add_sync_options(extract, extract_options);

  // attack
  std::string attack_in, attack_out, attack_kind;
  double attack_param = 0.0;
  wbe::Mp3Options attack_mp3;
  auto* attack = app.add_subcommand("attack", "Apply one degradation to a WAV file");
  attack->add_option("--in", attack_in, "Input WAV")->required();
  attack->add_option("--out", attack_out, "Output WAV")->required();
  attack->add_option("--kind", attack_kind, "resample | mp3 | lowpass | amplitude | timescale | none")->required();
  attack->add_option("--param", attack_param, "Hz | kbps | kHz | factor | percent")->required();
  add_mp3_options(attack, attack_mp3);

  // evaluate
  std::vector<std::string> eval_inputs;
  std::vector<std::string> eval_attacks{"all"};
  std::string report_path = "-";
  std::string table_path;
  PayloadArgs eval_payload;
  wbe::EvaluateConfig eval_config;
  bool serial = false;
  auto* evaluate = app.add_subcommand("evaluate", "Embed, attack and extract over a parameter sweep");
  evaluate->add_option("--in", eval_inputs, "Input WAV files")->required();
  evaluate->add_option("--levels", eval_config.levels, "DWT levels")->delimiter(',')->capture_default_str();
  evaluate->add_option("--attacks", eval_attacks, "all | none | kind | kind=param, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  evaluate->add_option("--report", report_path, "JSON report path ('-' for stdout)")->capture_default_str();
  evaluate->add_option("--table", table_path, "Plain-text tables path ('-' for stdout)");
  evaluate->add_option("--payload-seed", eval_config.payload_seed, "Seed of the random default payload")
      ->capture_default_str();
  evaluate->add_flag("--serial", serial, "Run attack rows one at a time");
  add_payload_options(evaluate, eval_payload);
  add_embed_options(evaluate, eval_config.embed, false);
  add_sync_options(evaluate, eval_config.extract);
  add_mp3_options(evaluate, eval_config.mp3);

  // stats
  std::string stats_in;
  int stats_level = 8;
  int stats_segments = 1;
  std::string stats_filter = "db8";
  auto* stats = app.add_subcommand("stats", "Mean and standard deviation of the pair entropy");
  stats->add_option("--in", stats_in, "Input WAV")->required();
  stats->add_option("--level", stats_level, "DWT level")->capture_default_str();
  stats->add_option("--filter", stats_filter, "Wavelet filter")->capture_default_str();
  stats->add_option("--segments", stats_segments, "Number of segments")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*embed) return run_embed(embed_in, embed_out, embed_key, embed_payload, embed_config);
    if (*extract) return run_extract(extract_in, extract_key, extract_options, flags_out, expect_hex);
    if (*attack) return run_attack(attack_in, attack_out, attack_kind, attack_param, attack_mp3);
    if (*evaluate) {
      eval_config.parallel = !serial;
      std::vector<std::string> selection;
      for (const auto& a : eval_attacks) {
        if (a != "none") selection.push_back(a);
      }
      return run_evaluate(eval_inputs, eval_config, selection, eval_payload, report_path, table_path);
    }
    if (*stats) return run_stats(stats_in, stats_level, stats_filter, stats_segments);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const wbe::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}

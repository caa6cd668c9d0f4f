// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include <algorithm>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wbe/attacks.hpp"
#include "wbe/audio_io.hpp"
#include "wbe/bits.hpp"
#include "wbe/embedder.hpp"
#include "wbe/extractor.hpp"
#include "wbe/metrics.hpp"

namespace wbe {

struct EvaluateConfig {
  EmbedConfig embed;  // level is overridden per run
  std::vector<int> levels{7, 8};
  std::vector<AttackSpec> attacks;  // the no-attack row is always added
  Mp3Options mp3;
  ExtractOptions extract;
  /// Fixed payload; when empty, random bits filling the net capacity.
  std::optional<BitStream> payload;
  std::uint64_t payload_seed = 1;
  bool parallel = true;
};

struct NamedClip {
  std::string name;
  AudioSignal audio;
};

/// Every default grid, in table order.
inline std::vector<AttackSpec> full_attack_sweep() {
  std::vector<AttackSpec> all;
  for (AttackKind kind : {AttackKind::resample, AttackKind::mp3_external, AttackKind::lowpass,
                          AttackKind::amplitude_scale, AttackKind::time_scale}) {
    const auto grid = default_attack_grid(kind);
    all.insert(all.end(), grid.begin(), grid.end());
  }
  return all;
}

namespace detail {

inline EvalRow run_attack(const AudioSignal& marked, const WatermarkKey& key, const BitStream& payload,
                          const AttackSpec& spec, const EvaluateConfig& config) {
  EvalRow row;
  row.attack = spec;
  AudioSignal attacked;
  try {
    attacked = quantize_int16(apply_attack(marked, spec, config.mp3));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EncoderUnavailable) throw;
    row.skipped = true;
    row.note = e.what();
    return row;
  }
  const ExtractResult got = extract(attacked, key, config.extract);
  row.bits_total = payload.size();
  row.bits_error = bit_errors(payload, got.payload);
  row.ber_percent = ber(payload, got.payload);
  row.soft_bits = got.soft_count();
  for (const auto& seg : got.segments) row.sync_found.push_back(seg.sync.found);
  return row;
}

}  // namespace detail

/// Embed once at `level`, store as 16-bit, then attack and extract per row.
inline EvalRun evaluate_clip(const NamedClip& clip, int level, const EvaluateConfig& config) {
  EmbedConfig ec = config.embed;
  ec.level = level;

  EvalRun run;
  run.clip = clip.name;
  run.level = level;
  const auto layout = segment_layout(clip.audio.size(), level, ec.segments);
  run.capacity_bits = capacity(clip.audio.size(), level, 0, 1);
  run.net_capacity_bits = net_capacity(layout, level, ec.sync_length);

  const BitStream payload = config.payload ? *config.payload : random_bits(config.payload_seed, run.net_capacity_bits);
  run.payload_bits = payload.size();

  EmbedResult embedded = embed(clip.audio, payload, ec);
  const AudioSignal marked = quantize_int16(std::move(embedded.watermarked));
  run.snr_db = snr(clip.audio, marked);
  for (const auto& seg : embedded.key.segments) run.f_means.push_back(seg.f_mean);

  std::vector<AttackSpec> specs{{AttackKind::none, 0.0}};
  for (const auto& spec : config.attacks) {
    if (spec.kind != AttackKind::none) specs.push_back(spec);
  }
  std::stable_sort(specs.begin(), specs.end(), [](const AttackSpec& a, const AttackSpec& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.parameter < b.parameter;
  });
  specs.erase(std::unique(specs.begin(), specs.end(),
                          [](const AttackSpec& a, const AttackSpec& b) {
                            return a.kind == b.kind && a.parameter == b.parameter;
                          }),
              specs.end());

  // Rows are independent; results land by index, so order is fixed.
  run.rows.resize(specs.size());
  if (config.parallel) {
    std::vector<std::future<EvalRow>> jobs;
    for (const auto& spec : specs) {
      jobs.push_back(std::async(std::launch::async, [&, spec] {
        return detail::run_attack(marked, embedded.key, payload, spec, config);
      }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) run.rows[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      run.rows[i] = detail::run_attack(marked, embedded.key, payload, specs[i], config);
    }
  }
  return run;
}

inline EvalReport evaluate(const std::vector<NamedClip>& clips, const EvaluateConfig& config) {
  EvalReport report;
  report.epsilon = config.embed.epsilon;
  report.filter = filter_by_name(config.embed.filter).name;
  report.segments = config.embed.segments;
  report.pn_seed = config.embed.pn_seed;
  report.sync_length = config.embed.sync_length;
  report.sync_stride = config.extract.sync.stride;
  report.sync_threshold = config.extract.sync.threshold;
  report.recompute_mean = config.extract.recompute_mean;

  std::vector<int> levels = config.levels;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (const auto& clip : clips) {
    for (int level : levels) report.runs.push_back(evaluate_clip(clip, level, config));
  }
  return report;
}

}  // namespace wbe

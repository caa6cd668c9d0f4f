// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wbe/attacks.hpp"
#include "wbe/audio_io.hpp"
#include "wbe/bits.hpp"
#include "wbe/embedder.hpp"
#include "wbe/error.hpp"
#include "wbe/wavelet.hpp"

namespace wbe {

/// 10 log10(|s|^2 / |s' - s|^2) in dB; +inf when the signals are identical.
inline double snr(const AudioSignal& original, const AudioSignal& watermarked) {
  if (original.size() != watermarked.size()) {
    throw Error(ErrorCode::LengthMismatch, "signals differ in length");
  }
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double d = watermarked.samples[i] - original.samples[i];
    signal += original.samples[i] * original.samples[i];
    noise += d * d;
  }
  if (signal == 0.0) throw Error(ErrorCode::ZeroSignal, "original signal has zero energy");
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / noise);
}

inline std::size_t bit_errors(const BitStream& sent, const BitStream& received) {
  if (sent.size() != received.size()) throw Error(ErrorCode::LengthMismatch, "bit streams differ in length");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < sent.size(); ++i) errors += (sent[i] & 1) != (received[i] & 1) ? 1 : 0;
  return errors;
}

/// Bit error rate in percent.
inline double ber(const BitStream& sent, const BitStream& received) {
  const std::size_t errors = bit_errors(sent, received);
  if (sent.empty()) return 0.0;
  return 100.0 * static_cast<double>(errors) / static_cast<double>(sent.size());
}

/// Payload bits an audio of `length` samples can carry: one bit per pair of
/// level-H approximation coefficients, summed over segments, less the sync
/// prefix in each segment. With sync_overhead = 0 this is the gross figure.
inline std::size_t capacity(std::size_t length, int level, std::size_t sync_overhead, int segments) {
  const auto layout = segment_layout(length, level, segments);
  std::size_t total = 0;
  for (const auto& seg : layout) {
    const std::size_t pairs = pair_count(seg.length, level);
    total += pairs > sync_overhead ? pairs - sync_overhead : 0;
  }
  return total;
}

struct WbeStatistics {
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::size_t pairs = 0;
};

/// Mean and population standard deviation of the pair entropy over every
/// pair of the level-H approximation band, pooled across segments.
inline WbeStatistics wbe_statistics(const AudioSignal& audio, int level, const WaveletFilter& filter,
                                    int segments = 1) {
  const auto layout = segment_layout(audio.size(), level, segments);
  std::vector<double> values;
  for (const auto& seg : layout) {
    std::span<const double> samples(audio.samples.data() + seg.start, seg.length);
    for (const auto& p : pairs_of(dwt(samples, filter, level).approximation)) values.push_back(wbe_pair(p));
  }
  if (values.size() < 2) throw Error(ErrorCode::TooShort, "audio too short for two coefficient pairs");
  WbeStatistics stats;
  stats.pairs = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - stats.mean) * (v - stats.mean);
  stats.stddev = std::sqrt(sq / static_cast<double>(values.size()));
  return stats;
}

// ---------------------------------------------------------------------------
// Evaluation report

inline constexpr const char* kReportSchema = "wbe-eval-report/1";

#ifdef WBE_VERSION
inline constexpr const char* kToolVersion = WBE_VERSION;
#else
inline constexpr const char* kToolVersion = "1.0.0";
#endif

struct EvalRow {
  AttackSpec attack;
  bool skipped = false;
  std::string note;
  double ber_percent = 0.0;
  std::size_t bits_total = 0;
  std::size_t bits_error = 0;
  std::size_t soft_bits = 0;
  std::vector<bool> sync_found;
};

struct EvalRun {
  std::string clip;
  int level = 8;
  double snr_db = 0.0;
  std::size_t capacity_bits = 0;      // gross
  std::size_t net_capacity_bits = 0;  // after sync prefixes
  std::size_t payload_bits = 0;
  std::vector<double> f_means;
  std::vector<EvalRow> rows;
};

struct EvalReport {
  double epsilon = 0.03;
  std::string filter = "db8";
  int segments = 4;
  std::uint64_t pn_seed = 1;
  std::size_t sync_length = 63;
  std::size_t sync_stride = 0;
  double sync_threshold = 0.8;
  bool recompute_mean = false;
  std::vector<EvalRun> runs;
};

inline nlohmann::ordered_json report_to_json(const EvalReport& report) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["schema"] = kReportSchema;
  doc["tool_version"] = kToolVersion;
  doc["config"] = {{"epsilon", report.epsilon},
                   {"filter", report.filter},
                   {"segments", report.segments},
                   {"pn_seed", report.pn_seed},
                   {"sync_length", report.sync_length},
                   {"sync_stride", report.sync_stride},
                   {"sync_threshold", report.sync_threshold},
                   {"f_mean_source", report.recompute_mean ? "recomputed" : "key"}};
  ordered_json runs = ordered_json::array();
  for (const auto& run : report.runs) {
    ordered_json r;
    r["clip"] = run.clip;
    r["level"] = run.level;
    if (std::isinf(run.snr_db)) {
      r["snr_db"] = "inf";
    } else {
      r["snr_db"] = run.snr_db;
    }
    r["capacity_bits"] = run.capacity_bits;
    r["net_capacity_bits"] = run.net_capacity_bits;
    r["payload_bits"] = run.payload_bits;
    r["f_means"] = run.f_means;
    ordered_json rows = ordered_json::array();
    for (const auto& row : run.rows) {
      ordered_json j;
      j["attack"] = {{"kind", to_string(row.attack.kind)}, {"parameter", row.attack.parameter}};
      j["status"] = row.skipped ? "skipped" : "ok";
      if (row.skipped) {
        j["note"] = row.note;
      } else {
        j["ber_percent"] = row.ber_percent;
        j["bits_total"] = row.bits_total;
        j["bits_error"] = row.bits_error;
        j["soft_bits"] = row.soft_bits;
        j["sync_found"] = row.sync_found;
      }
      rows.push_back(std::move(j));
    }
    r["rows"] = std::move(rows);
    runs.push_back(std::move(r));
  }
  doc["runs"] = std::move(runs);
  return doc;
}

inline std::string format_report(const EvalReport& report) { return report_to_json(report).dump(2) + "\n"; }

namespace detail {

inline std::string fixed(double v, int digits) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

inline std::string attack_title(AttackKind kind) {
  switch (kind) {
    case AttackKind::none: return "BER (%) WITHOUT ATTACK";
    case AttackKind::resample: return "BER (%) FOR RE-SAMPLING (Hz)";
    case AttackKind::mp3_external: return "BER (%) FOR MP3 COMPRESSION (kbps)";
    case AttackKind::lowpass: return "BER (%) FOR LOW-PASS FILTERING (kHz)";
    case AttackKind::amplitude_scale: return "BER (%) FOR AMPLITUDE SCALING";
    case AttackKind::time_scale: return "BER (%) FOR TIME SCALING (%)";
  }
  return "";
}

}  // namespace detail

/// Plain-text tables: one summary (SNR and capacity per clip and level),
/// then one BER table per attack family with a column per DWT level.
inline std::string render_tables(const EvalReport& report) {
  using detail::fixed;
  using detail::pad;
  std::set<int> levels;
  std::vector<std::string> clips;
  for (const auto& run : report.runs) {
    levels.insert(run.level);
    if (std::find(clips.begin(), clips.end(), run.clip) == clips.end()) clips.push_back(run.clip);
  }
  auto find_run = [&](const std::string& clip, int level) -> const EvalRun* {
    for (const auto& run : report.runs) {
      if (run.clip == clip && run.level == level) return &run;
    }
    return nullptr;
  };

  std::ostringstream out;
  out << "SNR (dB) AND EMBEDDING CAPACITY (epsilon " << report.epsilon << ", filter " << report.filter << ")\n";
  out << pad("clip", 14);
  for (int level : levels) out << pad("L" + std::to_string(level) + " SNR", 12) << pad("L" + std::to_string(level) + " bits", 12);
  out << "\n";
  for (const auto& clip : clips) {
    out << pad(clip, 14);
    for (int level : levels) {
      const EvalRun* run = find_run(clip, level);
      out << pad(run ? fixed(run->snr_db, 1) : "-", 12) << pad(run ? std::to_string(run->capacity_bits) : "-", 12);
    }
    out << "\n";
  }

  std::map<AttackKind, std::vector<double>> params;
  for (const auto& run : report.runs) {
    for (const auto& row : run.rows) {
      auto& list = params[row.attack.kind];
      if (std::find(list.begin(), list.end(), row.attack.parameter) == list.end()) list.push_back(row.attack.parameter);
    }
  }
  for (const auto& [kind, values] : params) {
    out << "\n" << detail::attack_title(kind) << "\n";
    out << pad("parameter", 12) << pad("clip", 14);
    for (int level : levels) out << pad("DWT level " + std::to_string(level), 16);
    out << "\n";
    for (double p : values) {
      for (const auto& clip : clips) {
        std::ostringstream param;
        param << p;
        out << pad(param.str(), 12) << pad(clip, 14);
        for (int level : levels) {
          std::string cell = "-";
          if (const EvalRun* run = find_run(clip, level)) {
            for (const auto& row : run->rows) {
              if (row.attack.kind == kind && row.attack.parameter == p) {
                cell = row.skipped ? "skipped" : fixed(row.ber_percent, 1);
              }
            }
          }
          out << pad(cell, 16);
        }
        out << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace wbe

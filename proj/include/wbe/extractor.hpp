// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "wbe/audio_io.hpp"
#include "wbe/bits.hpp"
#include "wbe/embedder.hpp"
#include "wbe/entropy.hpp"
#include "wbe/error.hpp"
#include "wbe/key_file.hpp"
#include "wbe/wavelet.hpp"

namespace wbe {

struct DecodedBit {
  std::uint8_t bit = 0;
  bool hard = false;
};

/// Band decision on the pair entropy. Values outside both bands fall back to
/// the side of F_mean they are on and are marked soft.
inline DecodedBit decode_bit(const CoefficientPair& pair, double f_mean, double epsilon) {
  const double w = wbe_pair(pair);
  if (w >= f_mean + epsilon && w <= f_mean + 2.0 * epsilon) return {1, true};
  if (w >= f_mean - 2.0 * epsilon && w <= f_mean - epsilon) return {0, true};
  return {static_cast<std::uint8_t>(w >= f_mean ? 1 : 0), false};
}

struct SyncSearch {
  /// Candidate offsets span [-window, +window] samples. Negative means just
  /// under half a segment: every segment carries the same prefix, so a wider
  /// window would reach the neighbouring segment's copy.
  std::ptrdiff_t window = -1;
  /// Offset granularity in samples; 0 means 2^level. Must divide 2^level.
  std::size_t stride = 0;
  double threshold = 0.8;
};

struct SyncResult {
  std::ptrdiff_t offset = 0;
  double correlation = -1.0;
  bool found = false;
};

/// Sync correlation for every segment of one signal.
///
/// For offsets that are a multiple of 2^level apart, the level-H coefficients
/// of a shifted window are a shifted slice of one low-pass cascade over the
/// whole (zero padded) signal, as long as the window's own periodic wrap is
/// not involved. The sync prefix sits at the start of each segment, far from
/// the wrap, so one cascade per offset phase serves every candidate.
class SyncScanner {
 public:
  SyncScanner(const AudioSignal& audio, const WatermarkKey& key, SyncSearch search)
      : key_(key), search_(search), filter_(filter_by_name(key.filter)) {
    block_ = level_block(key.level);
    if (search_.stride == 0) search_.stride = block_;
    if (block_ % search_.stride != 0) {
      throw Error(ErrorCode::DomainError, "sync stride must divide 2^level");
    }
    const std::size_t seg_len = key.segments.empty() ? 0 : key.segments.front().length;
    window_ = search_.window < 0 ? (seg_len > 0 ? (seg_len - 1) / 2 : 0) : static_cast<std::size_t>(search_.window);
    window_ -= window_ % search_.stride;

    for (const auto& seg : key.segments) {
      if (seg.start >= audio.size()) {
        throw Error(ErrorCode::WindowOutOfBounds,
                    "segment at sample " + std::to_string(seg.start) + " lies beyond the audio");
      }
    }

    const std::size_t sync_span = (2 * key.sync_length + filter_.length()) * block_;
    front_pad_ = (window_ / block_ + 1) * block_;
    const std::size_t back_pad = window_ + sync_span + block_;
    padded_.assign(front_pad_ + audio.size() + back_pad, 0.0);
    std::copy(audio.samples.begin(), audio.samples.end(),
              padded_.begin() + static_cast<std::ptrdiff_t>(front_pad_));
    expected_ = pn_sequence(key.pn_seed, key.sync_length);
  }

  SyncResult find(std::size_t segment, double f_mean) {
    const SegmentInfo& seg = key_.segments.at(segment);
    const auto stride = static_cast<std::ptrdiff_t>(search_.stride);
    const auto limit = static_cast<std::ptrdiff_t>(window_);

    SyncResult best;
    bool have = false;
    // Candidates in order 0, -s, +s, -2s, +2s, ...; ties keep the earlier one.
    for (std::ptrdiff_t k = 0; k * stride <= limit; ++k) {
      for (std::ptrdiff_t sign : {-1, 1}) {
        if (k == 0 && sign == 1) continue;
        const std::ptrdiff_t offset = sign * k * stride;
        const double corr = correlation_at(seg.start, offset, f_mean);
        if (!have || corr > best.correlation) {
          best.offset = offset;
          best.correlation = corr;
          have = true;
        }
        if (best.correlation >= 1.0) {
          best.found = best.correlation >= search_.threshold;
          return best;
        }
      }
    }
    best.found = best.correlation >= search_.threshold;
    return best;
  }

  /// Agreement with the PN prefix at one candidate offset, mapped to [-1, 1].
  double correlation_at(std::size_t segment_start, std::ptrdiff_t offset, double f_mean) {
    const auto pos = static_cast<std::ptrdiff_t>(front_pad_ + segment_start) + offset;
    const std::size_t p = static_cast<std::size_t>(pos);
    const std::size_t phase = p % block_;
    const std::vector<double>& coeffs = cascade(phase);
    const std::size_t index = (p - phase) / block_;
    std::size_t matches = 0;
    for (std::size_t j = 0; j < expected_.size(); ++j) {
      const std::size_t a = index + 2 * j;
      if (a + 1 >= coeffs.size()) break;
      const DecodedBit d = decode_bit({coeffs[a], coeffs[a + 1]}, f_mean, key_.epsilon);
      matches += d.bit == expected_[j] ? 1 : 0;
    }
    return 2.0 * static_cast<double>(matches) / static_cast<double>(expected_.size()) - 1.0;
  }

 private:
  const std::vector<double>& cascade(std::size_t phase) {
    auto it = cascades_.find(phase);
    if (it == cascades_.end()) {
      std::span<const double> tail(padded_.data() + phase, padded_.size() - phase);
      it = cascades_.emplace(phase, approximation_band(tail, filter_, key_.level)).first;
    }
    return it->second;
  }

  WatermarkKey key_;
  SyncSearch search_;
  const WaveletFilter& filter_;
  std::size_t block_ = 0;
  std::size_t window_ = 0;
  std::size_t front_pad_ = 0;
  std::vector<double> padded_;
  BitStream expected_;
  std::map<std::size_t, std::vector<double>> cascades_;
};

inline SyncResult find_sync(const AudioSignal& audio, const WatermarkKey& key, std::size_t segment,
                            const SyncSearch& search = {}, std::optional<double> f_mean = std::nullopt) {
  validate_key(key);
  SyncScanner scanner(audio, key, search);
  return scanner.find(segment, f_mean.value_or(key.segments.at(segment).f_mean));
}

struct ExtractOptions {
  SyncSearch sync;
  /// Estimate F_mean from the received signal instead of using the key.
  bool recompute_mean = false;
};

struct SegmentReport {
  SyncResult sync;
  double f_mean = 0.0;
  std::size_t payload_bits = 0;
  std::size_t soft_bits = 0;
};

struct ExtractResult {
  BitStream payload;
  std::vector<std::uint8_t> hard;  // per payload bit
  std::vector<SegmentReport> segments;

  std::size_t soft_count() const {
    std::size_t n = 0;
    for (auto h : hard) n += h ? 0 : 1;
    return n;
  }
};

namespace detail {

// Samples [start, start + length) of the signal, zero outside its bounds.
inline std::vector<double> window_of(const AudioSignal& audio, std::ptrdiff_t start, std::size_t length) {
  std::vector<double> out(length, 0.0);
  const auto n = static_cast<std::ptrdiff_t>(audio.size());
  for (std::size_t i = 0; i < length; ++i) {
    const std::ptrdiff_t src = start + static_cast<std::ptrdiff_t>(i);
    if (src >= 0 && src < n) out[i] = audio.samples[static_cast<std::size_t>(src)];
  }
  return out;
}

}  // namespace detail

/// Blind detection: per segment, locate the sync prefix, then decode the
/// payload slice at that offset. A segment whose sync is not found is decoded
/// at its nominal position and reported with found = false.
inline ExtractResult extract(const AudioSignal& audio, const WatermarkKey& key,
                             const ExtractOptions& options = {}) {
  validate_key(key);
  const WaveletFilter& filter = filter_by_name(key.filter);
  SyncScanner scanner(audio, key, options.sync);

  ExtractResult result;
  result.payload.reserve(key.payload_length);
  result.hard.reserve(key.payload_length);

  for (std::size_t s = 0; s < key.segments.size(); ++s) {
    const SegmentInfo& seg = key.segments[s];
    SegmentReport report;

    double f_mean = seg.f_mean;
    if (options.recompute_mean) {
      const auto nominal = detail::window_of(audio, static_cast<std::ptrdiff_t>(seg.start), seg.length);
      f_mean = compute_f_mean(pairs_of(approximation_band(nominal, filter, key.level)));
    }

    report.sync = scanner.find(s, f_mean);
    const std::ptrdiff_t offset = report.sync.found ? report.sync.offset : 0;
    const auto window =
        detail::window_of(audio, static_cast<std::ptrdiff_t>(seg.start) + offset, seg.length);
    const std::vector<double> approx = approximation_band(window, filter, key.level);
    if (options.recompute_mean && offset != 0) f_mean = compute_f_mean(pairs_of(approx));
    report.f_mean = f_mean;

    const auto [begin, end] = payload_slice(s, key.segments.size(), key.payload_length);
    for (std::size_t i = 0; i < end - begin; ++i) {
      const std::size_t j = key.sync_length + i;
      const DecodedBit d = decode_bit({approx[2 * j], approx[2 * j + 1]}, f_mean, key.epsilon);
      result.payload.push_back(d.bit);
      result.hard.push_back(d.hard ? 1 : 0);
      report.soft_bits += d.hard ? 0 : 1;
    }
    report.payload_bits = end - begin;
    result.segments.push_back(report);
  }
  return result;
}

}  // namespace wbe

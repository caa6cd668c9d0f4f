// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wbe/audio_io.hpp"
#include "wbe/bits.hpp"
#include "wbe/entropy.hpp"
#include "wbe/error.hpp"
#include "wbe/wavelet.hpp"

namespace wbe {

struct EmbedConfig {
  double epsilon = 0.03;  // secret key, nats
  int level = 8;
  int segments = 4;
  std::string filter = "db8";
  std::uint64_t pn_seed = 1;
  std::size_t sync_length = 63;
  double delta = 0.001;
};

struct SegmentInfo {
  std::size_t start = 0;
  std::size_t length = 0;
  double f_mean = 0.0;
};

/// Side information the detector needs. F_mean is stored per segment and
/// measured on the original (unmarked) coefficients.
struct WatermarkKey {
  int version = 1;
  double epsilon = 0.03;
  int level = 8;
  std::string filter = "db8";
  std::uint64_t pn_seed = 1;
  std::size_t sync_length = 63;
  std::size_t payload_length = 0;
  std::vector<SegmentInfo> segments;
};

struct SegmentSpan {
  std::size_t start = 0;
  std::size_t length = 0;
};

/// Contiguous equal-length segments from sample 0, each a multiple of
/// 2^level. The remainder at the end of the signal is not watermarked.
inline std::vector<SegmentSpan> segment_layout(std::size_t total_samples, int level, int segments) {
  if (segments < 1) throw Error(ErrorCode::DomainError, "segment count must be at least 1");
  if (level < 1 || level > 30) throw Error(ErrorCode::DomainError, "level must be in [1, 30]");
  const std::size_t block = level_block(level);
  const std::size_t count = static_cast<std::size_t>(segments);
  const std::size_t length = total_samples / (count * block) * block;
  std::vector<SegmentSpan> layout;
  if (length == 0) return layout;
  for (std::size_t s = 0; s < count; ++s) layout.push_back({s * length, length});
  return layout;
}

/// Number of coefficient pairs in the approximation band of a segment.
inline std::size_t pair_count(std::size_t segment_length, int level) {
  return (segment_length >> level) / 2;
}

/// Payload bits [first, second) carried by segment s of n.
inline std::pair<std::size_t, std::size_t> payload_slice(std::size_t segment, std::size_t segments,
                                                         std::size_t payload_length) {
  return {segment * payload_length / segments, (segment + 1) * payload_length / segments};
}

inline std::vector<CoefficientPair> pairs_of(std::span<const double> approximation) {
  std::vector<CoefficientPair> pairs(approximation.size() / 2);
  for (std::size_t j = 0; j < pairs.size(); ++j) pairs[j] = {approximation[2 * j], approximation[2 * j + 1]};
  return pairs;
}

inline double compute_f_mean(std::span<const CoefficientPair> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "no coefficient pairs");
  double sum = 0.0;
  for (const auto& p : pairs) sum += wbe_pair(p);
  return sum / static_cast<double>(pairs.size());
}

/// 0 < 2 eps < min(ln 2 - F_mean, F_mean - 0).
inline bool epsilon_admissible(double f_mean, double epsilon) {
  return epsilon > 0.0 && 2.0 * epsilon < std::min(kEntropyMax - f_mean, f_mean - kEntropyMin);
}

inline void require_epsilon_admissible(double f_mean, double epsilon) {
  if (!epsilon_admissible(f_mean, epsilon)) {
    throw Error(ErrorCode::KeyInvariantViolated,
                "epsilon " + std::to_string(epsilon) + " too large for F_mean " + std::to_string(f_mean) +
                    " (need 0 < 2*eps < min(ln2 - F_mean, F_mean))");
  }
}

/// Entropy the pair is steered to for a given bit: the middle of
/// [F_mean + eps, F_mean + 2eps] for 1, of [F_mean - 2eps, F_mean - eps] for 0.
inline double bit_target(std::uint8_t bit, double f_mean, double epsilon) {
  return bit ? f_mean + 1.5 * epsilon : f_mean - 1.5 * epsilon;
}

inline double plan_bit(std::uint8_t bit, double f_mean, double epsilon, double delta) {
  require_epsilon_admissible(f_mean, epsilon);
  return solve_f_inverse(bit_target(bit, f_mean, epsilon), delta);
}

struct ScalingFactors {
  double alpha0 = 1.0;
  double alpha1 = 1.0;
};

/// Minimizer of the normalized coefficient distortion
///   ((a0 - 1)^2 |c0|^2 + (a1 - 1)^2 |c1|^2) / (|c0|^2 + |c1|^2)
/// on the line a0 = gamma * a1 (Lagrange stationarity, solved in closed form).
inline ScalingFactors optimal_alphas(const CoefficientPair& pair, double gamma) {
  const double p0 = floored_magnitude(pair.c0);
  const double p1 = floored_magnitude(pair.c1);
  const double e0 = p0 * p0;
  const double e1 = p1 * p1;
  const double alpha1 = (gamma * e0 + e1) / (gamma * gamma * e0 + e1);
  return {gamma * alpha1, alpha1};
}

inline double scaling_distortion(const CoefficientPair& pair, const ScalingFactors& alphas) {
  const double e0 = floored_magnitude(pair.c0) * floored_magnitude(pair.c0);
  const double e1 = floored_magnitude(pair.c1) * floored_magnitude(pair.c1);
  const double d0 = alphas.alpha0 - 1.0;
  const double d1 = alphas.alpha1 - 1.0;
  return (d0 * d0 * e0 + d1 * d1 * e1) / (e0 + e1);
}

struct BitEmbedding {
  CoefficientPair pair;
  ScalingFactors alphas;
  double x = 0.5;
};

/// Rescale a pair so its entropy lands in the band for `bit`. Both roots x*
/// and 1 - x* of f(x) = target are tried; the one with lower distortion wins.
/// Signs of the original coefficients are kept.
inline BitEmbedding embed_bit_detailed(const CoefficientPair& pair, std::uint8_t bit, double f_mean,
                                       double epsilon, double delta) {
  const double x_left = plan_bit(bit, f_mean, epsilon, delta);
  const double m0 = floored_magnitude(pair.c0);
  const double m1 = floored_magnitude(pair.c1);
  const double mu = m1 / m0;

  BitEmbedding best;
  double best_distortion = 0.0;
  bool have = false;
  for (double x : {x_left, 1.0 - x_left}) {
    const ScalingFactors alphas = optimal_alphas(pair, gamma_from_x(x, mu));
    const double d = scaling_distortion(pair, alphas);
    if (!have || d < best_distortion) {
      best_distortion = d;
      best.alphas = alphas;
      best.x = x;
      have = true;
    }
  }
  best.pair = {std::copysign(best.alphas.alpha0 * m0, pair.c0),
               std::copysign(best.alphas.alpha1 * m1, pair.c1)};
  return best;
}

inline CoefficientPair embed_bit(const CoefficientPair& pair, std::uint8_t bit, double f_mean,
                                 double epsilon, double delta) {
  return embed_bit_detailed(pair, bit, f_mean, epsilon, delta).pair;
}

/// Sync prefix followed by this segment's payload slice.
inline BitStream frame_bits(const BitStream& sync, const BitStream& payload, std::size_t begin,
                            std::size_t end) {
  BitStream frame(sync);
  frame.insert(frame.end(), payload.begin() + static_cast<std::ptrdiff_t>(begin),
               payload.begin() + static_cast<std::ptrdiff_t>(end));
  return frame;
}

/// Net payload capacity of a layout after the per-segment sync prefix.
inline std::size_t net_capacity(std::span<const SegmentSpan> layout, int level, std::size_t sync_length) {
  std::size_t total = 0;
  for (const auto& seg : layout) {
    const std::size_t pairs = pair_count(seg.length, level);
    total += pairs > sync_length ? pairs - sync_length : 0;
  }
  return total;
}

struct EmbedResult {
  AudioSignal watermarked;
  WatermarkKey key;
};

inline void validate_config(const EmbedConfig& config) {
  if (!(config.epsilon > 0.0)) throw Error(ErrorCode::DomainError, "epsilon must be positive");
  if (!(config.delta > 0.0 && config.delta < 0.25)) throw Error(ErrorCode::DomainError, "delta must lie in (0, 1/4)");
  if (config.level < 1 || config.level > 30) throw Error(ErrorCode::DomainError, "level must be in [1, 30]");
  if (config.segments < 1) throw Error(ErrorCode::DomainError, "segment count must be at least 1");
  if (config.sync_length < 1) throw Error(ErrorCode::DomainError, "sync length must be at least 1");
  (void)filter_by_name(config.filter);
}

inline EmbedResult embed(const AudioSignal& audio, const BitStream& payload, const EmbedConfig& config) {
  validate_config(config);
  const WaveletFilter& filter = filter_by_name(config.filter);
  const auto layout = segment_layout(audio.size(), config.level, config.segments);
  if (layout.empty()) {
    throw Error(ErrorCode::CapacityExceeded, "audio too short for " + std::to_string(config.segments) +
                                                 " segments at level " + std::to_string(config.level));
  }

  const std::size_t pairs_per_segment = pair_count(layout.front().length, config.level);
  const std::size_t per_segment_need =
      config.sync_length + (payload.size() + layout.size() - 1) / layout.size();
  if (per_segment_need > pairs_per_segment) {
    throw Error(ErrorCode::CapacityExceeded,
                "payload of " + std::to_string(payload.size()) + " bits exceeds net capacity of " +
                    std::to_string(net_capacity(layout, config.level, config.sync_length)) + " bits");
  }

  const BitStream sync = pn_sequence(config.pn_seed, config.sync_length);

  EmbedResult result;
  result.watermarked = audio;
  WatermarkKey& key = result.key;
  key.epsilon = config.epsilon;
  key.level = config.level;
  key.filter = filter.name;
  key.pn_seed = config.pn_seed;
  key.sync_length = config.sync_length;
  key.payload_length = payload.size();

  for (std::size_t s = 0; s < layout.size(); ++s) {
    const SegmentSpan seg = layout[s];
    std::span<const double> samples(audio.samples.data() + seg.start, seg.length);
    WaveletDecomposition decomp = dwt(samples, filter, config.level);

    const double f_mean = compute_f_mean(pairs_of(decomp.approximation));
    require_epsilon_admissible(f_mean, config.epsilon);

    const auto [begin, end] = payload_slice(s, layout.size(), payload.size());
    const BitStream frame = frame_bits(sync, payload, begin, end);
    for (std::size_t j = 0; j < frame.size(); ++j) {
      const CoefficientPair pair{decomp.approximation[2 * j], decomp.approximation[2 * j + 1]};
      const CoefficientPair marked = embed_bit(pair, frame[j], f_mean, config.epsilon, config.delta);
      decomp.approximation[2 * j] = marked.c0;
      decomp.approximation[2 * j + 1] = marked.c1;
    }

    const std::vector<double> rebuilt = idwt(decomp, filter);
    std::copy(rebuilt.begin(), rebuilt.end(), result.watermarked.samples.begin() + static_cast<std::ptrdiff_t>(seg.start));
    key.segments.push_back({seg.start, seg.length, f_mean});
  }
  return result;
}

}  // namespace wbe

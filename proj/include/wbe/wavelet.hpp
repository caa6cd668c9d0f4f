// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wbe/error.hpp"

namespace wbe {

/// Orthogonal two-channel filter bank. The high-pass branch is the quadrature
/// mirror of the low-pass one: g[m] = (-1)^m h[K-1-m].
struct WaveletFilter {
  std::string name;
  std::vector<double> lowpass;
  std::vector<double> highpass;

  std::size_t length() const noexcept { return lowpass.size(); }
};

inline WaveletFilter make_orthogonal_filter(std::string name, std::vector<double> lowpass) {
  const std::size_t k = lowpass.size();
  if (k < 2 || k % 2 != 0) throw Error(ErrorCode::DomainError, "filter length must be even");
  std::vector<double> highpass(k);
  for (std::size_t m = 0; m < k; ++m) {
    highpass[m] = (m % 2 == 0 ? 1.0 : -1.0) * lowpass[k - 1 - m];
  }
  return WaveletFilter{std::move(name), std::move(lowpass), std::move(highpass)};
}

inline const WaveletFilter& haar_filter() {
  static const WaveletFilter filter =
      make_orthogonal_filter("haar", {0.70710678118654752440, 0.70710678118654752440});
  return filter;
}

// Daubechies, 8 vanishing moments (16 taps).
inline const WaveletFilter& db8_filter() {
  static const WaveletFilter filter = make_orthogonal_filter(
      "db8", {0.054415842243104010, 0.31287159091429995, 0.67563073629728980, 0.58535468365420671,
              -0.015829105256349306, -0.28401554296154690, 0.00047248457391328277,
              0.12874742662047847, -0.017369301001807547, -0.044088253930794755,
              0.013981027917398282, 0.0087460940474057770, -0.0048703529934515740,
              -0.00039174037337694705, 0.00067544940645056930, -0.00011747678412476953});
  return filter;
}

inline const WaveletFilter& filter_by_name(std::string_view name) {
  if (name == "db8") return db8_filter();
  if (name == "haar") return haar_filter();
  throw Error(ErrorCode::DomainError, "unknown wavelet filter '" + std::string(name) + "'");
}

/// Multi-level decomposition of one segment. details[0] is the finest band
/// (level 1), details[level-1] the coarsest.
struct WaveletDecomposition {
  int level = 0;
  std::vector<double> approximation;
  std::vector<std::vector<double>> details;
  std::size_t segment_length = 0;
};

namespace detail {

// One periodized analysis step: out[i] = sum_m taps[m] * x[(2i + m) mod n]
// for i < n/2. The sum order is fixed so that a window and the same samples
// inside a longer signal produce bit-identical interior coefficients.
inline void analysis_step(std::span<const double> x, std::span<const double> taps,
                          std::span<double> out) {
  const std::size_t n = x.size() & ~std::size_t{1};
  const std::size_t half = n / 2;
  const std::size_t k = taps.size();
  for (std::size_t i = 0; i < half; ++i) {
    double acc = 0.0;
    const std::size_t base = 2 * i;
    if (base + k <= n) {
      for (std::size_t m = 0; m < k; ++m) acc += taps[m] * x[base + m];
    } else {
      for (std::size_t m = 0; m < k; ++m) acc += taps[m] * x[(base + m) % n];
    }
    out[i] = acc;
  }
}

// Adjoint of analysis_step for both branches at once.
inline void synthesis_step(std::span<const double> approx, std::span<const double> detail,
                           const WaveletFilter& filter, std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t k = filter.length();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < approx.size(); ++i) {
    const double a = approx[i];
    const double d = detail[i];
    const std::size_t base = 2 * i;
    for (std::size_t m = 0; m < k; ++m) {
      out[(base + m) % n] += filter.lowpass[m] * a + filter.highpass[m] * d;
    }
  }
}

}  // namespace detail

inline std::size_t level_block(int level) { return std::size_t{1} << level; }

inline WaveletDecomposition dwt(std::span<const double> segment, const WaveletFilter& filter,
                                int level) {
  if (level < 1 || level > 30) throw Error(ErrorCode::BadLength, "level must be in [1, 30]");
  const std::size_t block = level_block(level);
  if (segment.empty() || segment.size() % block != 0) {
    throw Error(ErrorCode::BadLength, "segment length " + std::to_string(segment.size()) +
                                          " is not a positive multiple of 2^" + std::to_string(level));
  }

  WaveletDecomposition out;
  out.level = level;
  out.segment_length = segment.size();
  out.details.reserve(static_cast<std::size_t>(level));

  std::vector<double> current(segment.begin(), segment.end());
  for (int j = 0; j < level; ++j) {
    const std::size_t half = current.size() / 2;
    std::vector<double> approx(half);
    std::vector<double> detail(half);
    detail::analysis_step(current, filter.lowpass, approx);
    detail::analysis_step(current, filter.highpass, detail);
    out.details.push_back(std::move(detail));
    current = std::move(approx);
  }
  out.approximation = std::move(current);
  return out;
}

inline std::vector<double> idwt(const WaveletDecomposition& decomp, const WaveletFilter& filter) {
  const int level = decomp.level;
  if (level < 1 || decomp.details.size() != static_cast<std::size_t>(level)) {
    throw Error(ErrorCode::ShapeMismatch, "detail band count does not match level");
  }
  const std::size_t block = level_block(level);
  if (decomp.segment_length == 0 || decomp.segment_length % block != 0 ||
      decomp.approximation.size() != decomp.segment_length / block) {
    throw Error(ErrorCode::ShapeMismatch, "approximation length does not match segment length");
  }
  for (int j = 0; j < level; ++j) {
    if (decomp.details[static_cast<std::size_t>(j)].size() != decomp.segment_length >> (j + 1)) {
      throw Error(ErrorCode::ShapeMismatch, "detail band " + std::to_string(j + 1) + " has wrong length");
    }
  }

  std::vector<double> current = decomp.approximation;
  for (int j = level - 1; j >= 0; --j) {
    const auto& detail = decomp.details[static_cast<std::size_t>(j)];
    std::vector<double> up(detail.size() * 2);
    detail::synthesis_step(current, detail, filter, up);
    current = std::move(up);
  }
  return current;
}

/// Low-pass branch only, applied `level` times. On a segment whose length is
/// a multiple of 2^level this equals dwt(...).approximation; on arbitrary
/// signals each level keeps floor(n/2) samples.
inline std::vector<double> approximation_band(std::span<const double> x, const WaveletFilter& filter,
                                              int level) {
  std::vector<double> current(x.begin(), x.end());
  for (int j = 0; j < level; ++j) {
    std::vector<double> next(current.size() / 2);
    detail::analysis_step(current, filter.lowpass, next);
    current = std::move(next);
  }
  return current;
}

inline double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

inline double energy(const WaveletDecomposition& decomp) {
  double e = energy(decomp.approximation);
  for (const auto& band : decomp.details) e += energy(band);
  return e;
}

}  // namespace wbe

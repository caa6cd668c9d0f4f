// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "wbe/error.hpp"

namespace wbe {

namespace detail {

inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

inline double kaiser(double t, double beta) {
  // t in [-1, 1]
  const double r = 1.0 - t * t;
  if (r <= 0.0) return 0.0;
  return std::cyl_bessel_i(0.0, beta * std::sqrt(r)) / std::cyl_bessel_i(0.0, beta);
}

// Whole-sample symmetric extension: x[-k] = x[k], x[n-1+k] = x[n-1-k].
inline double mirrored(std::span<const double> x, std::ptrdiff_t i) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  if (n == 1) return x[0];
  const std::ptrdiff_t period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  if (i >= n) i = period - i;
  return x[static_cast<std::size_t>(i)];
}

}  // namespace detail

struct ResamplerDesign {
  /// Taps per polyphase branch, counted at the lower of the two rates.
  std::size_t taps_per_phase = 64;
  double kaiser_beta = 8.0;
};

/// Rational sample-rate conversion by up/down with a Kaiser-windowed sinc.
///
/// Output sample n sits at input position t = n * down / up. The kernel
/// cutoff is min(1, up/down) of the input Nyquist rate, so one polyphase
/// table of `up` branches covers every output sample. Boundaries use
/// symmetric extension, and the kernel is centred (zero group delay).
class RationalResampler {
 public:
  RationalResampler(std::size_t up, std::size_t down, ResamplerDesign design = {}) {
    if (up == 0 || down == 0) throw Error(ErrorCode::BadRate, "resampling factors must be positive");
    const std::size_t g = std::gcd(up, down);
    up_ = up / g;
    down_ = down / g;
    cutoff_ = std::min(1.0, static_cast<double>(up_) / static_cast<double>(down_));
    const double half_width = static_cast<double>(design.taps_per_phase) / 2.0 / cutoff_;
    reach_ = static_cast<std::ptrdiff_t>(std::ceil(half_width));
    const std::size_t width = static_cast<std::size_t>(2 * reach_ + 1);
    table_.assign(up_ * width, 0.0);
    for (std::size_t phase = 0; phase < up_; ++phase) {
      const double frac = static_cast<double>(phase) / static_cast<double>(up_);
      for (std::size_t j = 0; j < width; ++j) {
        // Tap for input sample base + reach - j, at distance d from t = base + frac.
        const double d = frac + static_cast<double>(static_cast<std::ptrdiff_t>(j) - reach_);
        if (std::abs(d) > half_width) continue;
        table_[phase * width + j] = cutoff_ * detail::sinc(cutoff_ * d) * detail::kaiser(d / half_width, design.kaiser_beta);
      }
    }
  }

  std::size_t up() const noexcept { return up_; }
  std::size_t down() const noexcept { return down_; }

  std::vector<double> process(std::span<const double> x, std::size_t out_length) const {
    std::vector<double> y(out_length, 0.0);
    if (x.empty()) return y;
    const std::size_t width = static_cast<std::size_t>(2 * reach_ + 1);
    const auto n_in = static_cast<std::ptrdiff_t>(x.size());
    for (std::size_t n = 0; n < out_length; ++n) {
      const std::size_t pos = n * down_;
      const auto base = static_cast<std::ptrdiff_t>(pos / up_);
      const std::size_t phase = pos % up_;
      const double* taps = table_.data() + phase * width;
      const std::ptrdiff_t first = base + reach_;  // input index for j = 0
      double acc = 0.0;
      if (first - static_cast<std::ptrdiff_t>(width) + 1 >= 0 && first < n_in) {
        for (std::size_t j = 0; j < width; ++j) acc += taps[j] * x[static_cast<std::size_t>(first - static_cast<std::ptrdiff_t>(j))];
      } else {
        for (std::size_t j = 0; j < width; ++j) acc += taps[j] * detail::mirrored(x, first - static_cast<std::ptrdiff_t>(j));
      }
      y[n] = acc;
    }
    return y;
  }

  /// Natural output length ceil(n * up / down).
  std::size_t output_length(std::size_t n) const { return (n * up_ + down_ - 1) / down_; }

 private:
  std::size_t up_ = 1;
  std::size_t down_ = 1;
  double cutoff_ = 1.0;
  std::ptrdiff_t reach_ = 0;
  std::vector<double> table_;
};

/// Linear-phase low-pass: Hamming-windowed sinc, unity DC gain.
inline std::vector<double> design_lowpass(std::size_t taps, double cutoff_hz, double sample_rate) {
  if (taps % 2 == 0) throw Error(ErrorCode::DomainError, "low-pass length must be odd");
  const double fc = cutoff_hz / sample_rate;  // cycles per sample
  const double centre = static_cast<double>(taps - 1) / 2.0;
  std::vector<double> h(taps);
  double sum = 0.0;
  for (std::size_t i = 0; i < taps; ++i) {
    const double k = static_cast<double>(i) - centre;
    const double window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                                 static_cast<double>(taps - 1));
    h[i] = 2.0 * fc * detail::sinc(2.0 * fc * k) * window;
    sum += h[i];
  }
  for (double& v : h) v /= sum;
  return h;
}

/// Centred FIR filtering with symmetric boundary extension; output aligned
/// with the input and of the same length.
inline std::vector<double> filter_centred(std::span<const double> x, std::span<const double> h) {
  std::vector<double> y(x.size(), 0.0);
  if (x.empty()) return y;
  const auto half = static_cast<std::ptrdiff_t>(h.size() / 2);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    if (i - half >= 0 && i + half < n) {
      const double* src = x.data() + (i - half);
      for (std::size_t m = 0; m < h.size(); ++m) acc += h[m] * src[m];
    } else {
      for (std::size_t m = 0; m < h.size(); ++m) {
        acc += h[m] * detail::mirrored(x, i - half + static_cast<std::ptrdiff_t>(m));
      }
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

}  // namespace wbe

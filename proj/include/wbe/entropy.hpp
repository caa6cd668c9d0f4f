// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "wbe/error.hpp"

namespace wbe {

/// Entropies are measured in nats throughout; the largest value a pair can
/// reach is ln 2.
inline constexpr double kEntropyMax = std::numbers::ln2;
inline constexpr double kEntropyMin = 0.0;

/// Magnitudes below this are raised to it before any ratio is formed, which
/// keeps mu = |c1|/|c0| finite and makes every pair embeddable.
inline constexpr double kMagnitudeFloor = 1e-12;

/// Two consecutive approximation coefficients, signs included.
struct CoefficientPair {
  double c0 = 0.0;
  double c1 = 0.0;
};

inline double floored_magnitude(double c) { return std::max(std::abs(c), kMagnitudeFloor); }

namespace detail {
// z ln z, continuously extended to 0 at z = 0.
inline double xlogx(double z) { return z > 0.0 ? z * std::log(z) : 0.0; }
}  // namespace detail

/// Wavelet-based entropy of a coefficient pair.
inline double wbe_pair(const CoefficientPair& pair) {
  const double m0 = floored_magnitude(pair.c0);
  const double m1 = floored_magnitude(pair.c1);
  const double sum = m0 + m1;
  return -(detail::xlogx(m0 / sum) + detail::xlogx(m1 / sum));
}

/// Entropy of the normalized magnitude distribution of N >= 2 coefficients.
inline double wbe_general(std::span<const double> coeffs) {
  if (coeffs.size() < 2) throw Error(ErrorCode::EmptyInput, "need at least two coefficients");
  double sum = 0.0;
  for (double c : coeffs) sum += floored_magnitude(c);
  double h = 0.0;
  for (double c : coeffs) h -= detail::xlogx(floored_magnitude(c) / sum);
  return h;
}

/// Characteristic curve f(x) = -(x ln x + (1-x) ln(1-x)) on [0, 1], with
/// f(0) = f(1) = 0.
inline double f_curve(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::DomainError, "f_curve argument outside [0, 1]");
  return 0.0 - (detail::xlogx(x) + detail::xlogx(1.0 - x));  // +0 at the endpoints
}

struct BisectionSettings {
  double value_tolerance = 1e-9;
  double width_tolerance = 1e-12;
  int max_iterations = 200;
  int max_bracket_attempts = 64;
};

/// Root of f(x) = target on the increasing branch x in (0, 1/2).
///
/// The search starts on [delta, 1/2 - delta]. When f(delta) - target and
/// f(1/2 - delta) - target do not have opposite signs, delta is halved until
/// they do; a target that never gets bracketed is NoRoot.
inline double solve_f_inverse(double target, double delta, const BisectionSettings& settings = {}) {
  if (!(delta > 0.0 && delta < 0.25)) throw Error(ErrorCode::DomainError, "delta must lie in (0, 1/4)");
  if (!(target > kEntropyMin && target < kEntropyMax)) {
    throw Error(ErrorCode::NoRoot, "target entropy " + std::to_string(target) + " outside (0, ln 2)");
  }

  double lo = delta;
  double hi = 0.5 - delta;
  for (int attempt = 0;; ++attempt) {
    const double flo = f_curve(lo) - target;
    const double fhi = f_curve(hi) - target;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi < 0.0) break;
    if (attempt >= settings.max_bracket_attempts) {
      throw Error(ErrorCode::NoRoot, "could not bracket target entropy " + std::to_string(target));
    }
    delta *= 0.5;
    lo = delta;
    hi = 0.5 - delta;
  }

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < settings.max_iterations; ++it) {
    const double fm = f_curve(mid) - target;
    if (std::abs(fm) <= settings.value_tolerance || hi - lo <= settings.width_tolerance) break;
    // f is increasing on the bracket.
    if (fm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    mid = 0.5 * (lo + hi);
  }
  return mid;
}

/// Scaling ratio gamma = alpha0/alpha1 that moves a pair with magnitude ratio
/// mu onto the curve point x: gamma / (gamma + mu) = x.
inline double gamma_from_x(double x_star, double mu) {
  if (!(x_star > 0.0 && x_star < 1.0)) throw Error(ErrorCode::DomainError, "x* must lie in (0, 1)");
  if (!(mu > 0.0)) throw Error(ErrorCode::DomainError, "mu must be positive");
  return mu * x_star / (1.0 - x_star);
}

}  // namespace wbe

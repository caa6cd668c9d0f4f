// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

// Deterministic synthetic test material. Four 512000-sample mono clips at
// 44.1 kHz in different styles; all generated from integer seeds with a
// fully specified generator so every platform writes the same files.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "wbe/audio_io.hpp"

namespace wbe::clips {

inline constexpr std::size_t kClipLength = 512000;
inline constexpr std::uint32_t kClipRate = 44100;

namespace detail {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// std::mt19937_64 output is fixed by the standard; distributions are not,
// so uniform/normal draws are derived by hand.
class Noise {
 public:
  explicit Noise(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * uniform() - 1.0; }
  double gaussian() {
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

inline double midi_hz(double note) { return 440.0 * std::pow(2.0, (note - 69.0) / 12.0); }

// Additive harmonic tone with a 1/k^rolloff spectrum.
inline void add_tone(std::vector<double>& out, std::size_t start, std::size_t length, double hz, double amp,
                     int harmonics, double rolloff, double attack_s, double decay_per_s, double phase = 0.0) {
  const double fs = kClipRate;
  const std::size_t end = std::min(out.size(), start + length);
  const auto attack = static_cast<std::size_t>(std::max(1.0, attack_s * fs));
  for (std::size_t i = start; i < end; ++i) {
    const double t = static_cast<double>(i - start) / fs;
    const std::size_t k = i - start;
    double env = amp * std::exp(-decay_per_s * t);
    if (k < attack) env *= static_cast<double>(k) / static_cast<double>(attack);
    const std::size_t remain = end - i;
    if (remain < 441) env *= static_cast<double>(remain) / 441.0;  // 10 ms release
    double v = 0.0;
    for (int h = 1; h <= harmonics; ++h) {
      const double f = hz * h;
      if (f > 0.45 * fs) break;
      v += std::sin(kTwoPi * f * t + phase * h) / std::pow(h, rolloff);
    }
    out[i] += env * v;
  }
}

// One-pole low-pass over a noise burst: soft percussion.
inline void add_noise_hit(std::vector<double>& out, std::size_t start, double amp, double decay_per_s, double smooth,
                          Noise& rng) {
  const double fs = kClipRate;
  const auto length = static_cast<std::size_t>(fs * 5.0 / decay_per_s);
  double state = 0.0;
  for (std::size_t k = 0; k < length && start + k < out.size(); ++k) {
    const double t = static_cast<double>(k) / fs;
    state += smooth * (rng.symmetric() - state);
    out[start + k] += amp * std::exp(-decay_per_s * t) * state;
  }
}

// Pitch-swept sine kick drum.
inline void add_kick(std::vector<double>& out, std::size_t start, double amp) {
  const double fs = kClipRate;
  double phase = 0.0;
  for (std::size_t k = 0; k < static_cast<std::size_t>(0.35 * fs) && start + k < out.size(); ++k) {
    const double t = static_cast<double>(k) / fs;
    const double hz = 48.0 + 110.0 * std::exp(-t * 30.0);
    phase += kTwoPi * hz / fs;
    out[start + k] += amp * std::exp(-t * 9.0) * std::sin(phase);
  }
}

// Quiet broadband floor so no stretch of the clip is digital silence.
inline void add_floor(std::vector<double>& out, double amp, Noise& rng) {
  double state = 0.0;
  for (double& v : out) {
    state += 0.2 * (rng.gaussian() - state);
    v += amp * state;
  }
}

inline AudioSignal finish(std::vector<double> samples, double peak) {
  double m = 0.0;
  for (double v : samples) m = std::max(m, std::abs(v));
  for (double& v : samples) v *= peak / m;
  AudioSignal a;
  a.samples = std::move(samples);
  a.sample_rate = kClipRate;
  return quantize_int16(std::move(a));
}

inline std::size_t at(double seconds) { return static_cast<std::size_t>(seconds * kClipRate); }

}  // namespace detail

/// Mid-tempo song: bass line, chord pads, a lead melody and light drums.
inline AudioSignal popular() {
  using namespace detail;
  std::vector<double> x(kClipLength, 0.0);
  Noise rng(0x5eed0001);
  const double beat = 0.5;  // 120 bpm
  const int roots[] = {45, 41, 48, 43};  // A F C G
  const int melody[] = {69, 72, 74, 72, 69, 67, 65, 67, 69, 72, 76, 74, 72, 69, 67, 69};
  for (int bar = 0; bar * 4 * beat < 11.7; ++bar) {
    const int root = roots[bar % 4];
    const double t0 = bar * 4 * beat;
    for (int b = 0; b < 4; ++b) add_tone(x, at(t0 + b * beat), at(beat * 0.9), midi_hz(root - 12 + (b % 2 ? 7 : 0)), 0.14, 6, 1.2, 0.01, 3.0);
    for (int n : {0, 4, 7}) add_tone(x, at(t0), at(4 * beat), midi_hz(root + 12 + n), 0.08, 8, 1.5, 0.08, 0.2);
    for (int b = 0; b < 4; ++b) {
      const int note = melody[(bar * 4 + b) % 16];
      add_tone(x, at(t0 + b * beat), at(beat * 0.95), midi_hz(note), 0.12, 10, 1.0, 0.03, 0.8, 0.3);
      add_noise_hit(x, at(t0 + b * beat + beat / 2), 0.05, 40.0, 0.9, rng);
    }
    add_kick(x, at(t0), 0.14);
    add_kick(x, at(t0 + 2 * beat), 0.14);
  }
  add_floor(x, 0.004, rng);
  return finish(std::move(x), 0.70);
}

/// Orchestral texture: sustained string chords with slow swells over a cello line.
inline AudioSignal symphony() {
  using namespace detail;
  std::vector<double> x(kClipLength, 0.0);
  Noise rng(0x5eed0002);
  const int chords[][4] = {{50, 57, 62, 66}, {47, 54, 59, 62}, {43, 50, 55, 59}, {45, 52, 57, 61}, {50, 57, 62, 69}};
  const double span = 2.4;
  for (int c = 0; c * span < 11.7; ++c) {
    const auto& chord = chords[c % 5];
    for (int v = 0; v < 4; ++v) {
      for (int d = -1; d <= 1; ++d) {  // detuned section
        add_tone(x, at(c * span), at(span + 0.2), midi_hz(chord[v]) * (1.0 + 0.002 * d), 0.06, 12, 1.1, 0.6, 0.05,
                 0.7 * d + v);
      }
    }
    add_tone(x, at(c * span), at(span), midi_hz(chord[0] - 12), 0.09, 8, 1.3, 0.3, 0.1);
    add_tone(x, at(c * span + span / 2), at(span / 2), midi_hz(chord[2] + 12), 0.05, 6, 1.0, 0.2, 0.3);
  }
  // Timpani rolls.
  for (double t = 1.0; t < 11.5; t += 3.1) add_tone(x, at(t), at(1.2), midi_hz(38), 0.12, 3, 2.0, 0.005, 4.0);
  add_floor(x, 0.003, rng);
  return finish(std::move(x), 0.60);
}

/// Solo piano: decaying, slightly inharmonic notes across the keyboard.
inline AudioSignal piano() {
  using namespace detail;
  std::vector<double> x(kClipLength, 0.0);
  Noise rng(0x5eed0003);
  const int left[] = {36, 31, 33, 38, 36, 29, 31, 33};
  const int right[] = {72, 76, 79, 77, 74, 72, 71, 74, 76, 72, 69, 71};
  for (int i = 0; i * 0.75 < 11.7; ++i) {
    const double t = i * 0.75;
    add_tone(x, at(t), at(2.5), midi_hz(left[i % 8]), 0.16, 10, 1.4, 0.004, 2.0);
    add_tone(x, at(t), at(2.0), midi_hz(left[i % 8] + 12), 0.08, 8, 1.4, 0.004, 2.4);
    for (int k = 0; k < 2; ++k) {
      const double tt = t + k * 0.375;
      add_tone(x, at(tt), at(1.5), midi_hz(right[(2 * i + k) % 12]), 0.2, 12, 1.2, 0.003, 2.2);
      add_tone(x, at(tt), at(1.5), midi_hz(right[(2 * i + k) % 12]) * 2.003, 0.03, 4, 1.0, 0.003, 3.0);
    }
  }
  add_floor(x, 0.003, rng);
  return finish(std::move(x), 0.65);
}

/// Club track: four-on-the-floor kick, sub bass, off-beat hats and a saw lead. Mixed hot.
inline AudioSignal dance() {
  using namespace detail;
  std::vector<double> x(kClipLength, 0.0);
  Noise rng(0x5eed0004);
  const double beat = 60.0 / 128.0;
  const int bass[] = {33, 33, 36, 31};
  for (int b = 0; b * beat < 11.7; ++b) {
    const double t = b * beat;
    add_kick(x, at(t), 0.14);
    add_tone(x, at(t + beat / 2), at(beat / 2), midi_hz(bass[(b / 4) % 4]), 0.1, 5, 1.0, 0.005, 4.0);
    add_noise_hit(x, at(t + beat / 2), 0.2, 60.0, 0.95, rng);
    if (b % 2 == 1) add_noise_hit(x, at(t), 0.15, 18.0, 0.5, rng);  // clap
    add_tone(x, at(t), at(beat), midi_hz(bass[(b / 4) % 4] + 36 + (b % 3) * 3), 0.12, 20, 1.0, 0.01, 4.0);
  }
  add_floor(x, 0.005, rng);
  return finish(std::move(x), 0.89);
}

struct ClipEntry {
  const char* name;
  AudioSignal (*make)();
};

inline constexpr ClipEntry kClips[] = {
    {"popular", &popular}, {"symphony", &symphony}, {"piano", &piano}, {"dance", &dance}};

}  // namespace wbe::clips

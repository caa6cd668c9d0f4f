// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wbe-watermark Authors

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include "wbe/audio_io.hpp"
#include "wbe/error.hpp"
#include "wbe/resample.hpp"

namespace wbe {

enum class AttackKind { none, resample, mp3_external, lowpass, amplitude_scale, time_scale };

constexpr std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::none: return "none";
    case AttackKind::resample: return "resample";
    case AttackKind::mp3_external: return "mp3_external";
    case AttackKind::lowpass: return "lowpass";
    case AttackKind::amplitude_scale: return "amplitude_scale";
    case AttackKind::time_scale: return "time_scale";
  }
  return "none";
}

inline AttackKind attack_kind_from_string(std::string_view name) {
  if (name == "none") return AttackKind::none;
  if (name == "resample" || name == "resampling") return AttackKind::resample;
  if (name == "mp3" || name == "mp3_external") return AttackKind::mp3_external;
  if (name == "lowpass" || name == "low_pass") return AttackKind::lowpass;
  if (name == "amplitude" || name == "amplitude_scale") return AttackKind::amplitude_scale;
  if (name == "timescale" || name == "time_scale") return AttackKind::time_scale;
  throw Error(ErrorCode::ParseError, "unknown attack kind '" + std::string(name) + "'");
}

/// parameter units: resample Hz, mp3 kbps, lowpass kHz, amplitude factor,
/// time scale percent.
struct AttackSpec {
  AttackKind kind = AttackKind::none;
  double parameter = 0.0;
};

inline AudioSignal attack_resample(const AudioSignal& audio, std::uint32_t intermediate_rate,
                                   ResamplerDesign design = {}) {
  if (intermediate_rate == 0 || intermediate_rate > audio.sample_rate) {
    throw Error(ErrorCode::BadRate, "intermediate rate " + std::to_string(intermediate_rate) +
                                        " Hz must be positive and not above " +
                                        std::to_string(audio.sample_rate) + " Hz");
  }
  const RationalResampler down(intermediate_rate, audio.sample_rate, design);
  const RationalResampler up(audio.sample_rate, intermediate_rate, design);
  const auto low = down.process(audio.samples, down.output_length(audio.size()));
  AudioSignal out = audio;
  out.samples = up.process(low, audio.size());
  return out;
}

inline AudioSignal attack_lowpass(const AudioSignal& audio, double cutoff_khz, std::size_t taps = 255) {
  const double cutoff_hz = cutoff_khz * 1000.0;
  if (!(cutoff_hz > 0.0 && cutoff_hz < audio.sample_rate / 2.0)) {
    throw Error(ErrorCode::BadCutoff, "cutoff must lie in (0, Nyquist)");
  }
  const auto h = design_lowpass(taps, cutoff_hz, audio.sample_rate);
  AudioSignal out = audio;
  out.samples = filter_centred(audio.samples, h);
  return out;
}

/// Scale then saturate to [-1, 1], as a 16-bit file would.
inline AudioSignal attack_amplitude(const AudioSignal& audio, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::DomainError, "scaling factor must be positive");
  AudioSignal out = audio;
  for (double& s : out.samples) s = std::clamp(s * tau, -1.0, 1.0);
  return out;
}

/// Speed change by resampling: duration grows by `percent`, the sample rate
/// tag stays, so pitch moves with it.
inline AudioSignal attack_timescale(const AudioSignal& audio, double percent, ResamplerDesign design = {}) {
  if (!(std::abs(percent) < 50.0)) throw Error(ErrorCode::DomainError, "time scale percent must lie in (-50, 50)");
  if (percent == 0.0) return audio;
  constexpr std::size_t kDenominator = 10000;
  const auto numerator = static_cast<std::size_t>(std::llround((100.0 + percent) / 100.0 * kDenominator));
  const RationalResampler resampler(numerator, kDenominator, design);
  const double factor = static_cast<double>(resampler.up()) / static_cast<double>(resampler.down());
  const auto length = static_cast<std::size_t>(std::llround(static_cast<double>(audio.size()) * factor));
  AudioSignal out = audio;
  out.samples = resampler.process(audio.samples, length);
  return out;
}

// ---------------------------------------------------------------------------
// MP3 through an external program.

inline constexpr const char* kMp3EncoderEnv = "WBE_MP3_ENCODER";

/// `command` is a shell template; {encoder}, {input}, {output}, {bitrate}
/// and {mp3} (a scratch path for the compressed stream) are substituted.
/// The default treats the encoder as a WAV-in/WAV-out round-trip program.
struct Mp3Options {
  std::string encoder;  // empty: $WBE_MP3_ENCODER, else "lame"
  std::string command = "{encoder} {input} {output} {bitrate}";
  std::size_t align_search = 4096;
};

inline std::string resolve_mp3_encoder(const Mp3Options& options) {
  if (!options.encoder.empty()) return options.encoder;
  if (const char* env = std::getenv(kMp3EncoderEnv); env != nullptr && *env != '\0') return env;
  return "lame";
}

inline bool executable_available(const std::string& program) {
  namespace fs = std::filesystem;
  if (program.find('/') != std::string::npos) return ::access(program.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  if (path == nullptr) return false;
  std::string_view rest(path);
  while (!rest.empty()) {
    const auto colon = rest.find(':');
    const std::string dir(rest.substr(0, colon));
    const fs::path candidate = fs::path(dir.empty() ? "." : dir) / program;
    if (::access(candidate.c_str(), X_OK) == 0) return true;
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  return false;
}

namespace detail {

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

inline std::string substitute(std::string text, std::string_view name, const std::string& value) {
  const std::string token = "{" + std::string(name) + "}";
  for (std::size_t pos = text.find(token); pos != std::string::npos; pos = text.find(token, pos + value.size())) {
    text.replace(pos, token.size(), value);
  }
  return text;
}

inline std::filesystem::path unique_scratch_dir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("wbe-mp3-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
                    std::to_string(rd()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace detail

/// Lag (in samples) that best aligns `received` to `reference`:
/// received[n + lag] ~ reference[n], searched over [-max_lag, max_lag].
inline std::ptrdiff_t best_alignment(std::span<const double> reference, std::span<const double> received,
                                     std::size_t max_lag, std::size_t probe = 32768) {
  const auto n = static_cast<std::ptrdiff_t>(std::min({reference.size(), probe}));
  const auto m = static_cast<std::ptrdiff_t>(received.size());
  const auto lag_limit = static_cast<std::ptrdiff_t>(max_lag);
  std::ptrdiff_t best_lag = 0;
  double best = -INFINITY;
  for (std::ptrdiff_t lag = -lag_limit; lag <= lag_limit; ++lag) {
    double acc = 0.0;
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -lag);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n, m - lag);
    for (std::ptrdiff_t i = lo; i < hi; ++i) acc += reference[static_cast<std::size_t>(i)] * received[static_cast<std::size_t>(i + lag)];
    if (acc > best || (acc == best && std::abs(lag) < std::abs(best_lag))) {
      best = acc;
      best_lag = lag;
    }
  }
  return best_lag;
}

inline AudioSignal attack_mp3_external(const AudioSignal& audio, int bitrate_kbps, const Mp3Options& options = {}) {
  if (bitrate_kbps <= 0) throw Error(ErrorCode::DomainError, "bitrate must be positive");
  const std::string encoder = resolve_mp3_encoder(options);
  if (!executable_available(encoder)) {
    throw Error(ErrorCode::EncoderUnavailable, "MP3 encoder '" + encoder + "' not found");
  }

  const auto dir = detail::unique_scratch_dir();
  const auto input = dir / "in.wav";
  const auto output = dir / "out.wav";
  const auto mp3 = dir / "stream.mp3";
  struct Cleanup {
    std::filesystem::path dir;
    ~Cleanup() {
      std::error_code ec;
      std::filesystem::remove_all(dir, ec);
    }
  } cleanup{dir};

  write_wav(input, audio);
  std::string cmd = options.command;
  cmd = detail::substitute(cmd, "encoder", detail::shell_quote(encoder));
  cmd = detail::substitute(cmd, "input", detail::shell_quote(input.string()));
  cmd = detail::substitute(cmd, "output", detail::shell_quote(output.string()));
  cmd = detail::substitute(cmd, "mp3", detail::shell_quote(mp3.string()));
  cmd = detail::substitute(cmd, "bitrate", std::to_string(bitrate_kbps));
  cmd += " >/dev/null 2>&1";
  if (std::system(cmd.c_str()) != 0) throw Error(ErrorCode::EncoderFailed, "command failed: " + cmd);

  AudioSignal decoded;
  try {
    decoded = read_wav(output);
  } catch (const Error& e) {
    throw Error(ErrorCode::EncoderFailed, std::string("unreadable decoder output: ") + e.what());
  }
  if (decoded.sample_rate != audio.sample_rate) {
    throw Error(ErrorCode::EncoderFailed, "decoder changed the sample rate");
  }

  const std::ptrdiff_t lag = best_alignment(audio.samples, decoded.samples, options.align_search);
  AudioSignal out = audio;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(i) + lag;
    out.samples[i] = (src >= 0 && src < static_cast<std::ptrdiff_t>(decoded.size()))
                         ? decoded.samples[static_cast<std::size_t>(src)]
                         : 0.0;
  }
  return out;
}

inline AudioSignal apply_attack(const AudioSignal& audio, const AttackSpec& spec, const Mp3Options& mp3 = {}) {
  switch (spec.kind) {
    case AttackKind::none: return audio;
    case AttackKind::resample: {
      if (!(spec.parameter > 0.0) || spec.parameter != std::floor(spec.parameter)) {
        throw Error(ErrorCode::BadRate, "resample rate must be a positive integer");
      }
      return attack_resample(audio, static_cast<std::uint32_t>(spec.parameter));
    }
    case AttackKind::mp3_external: return attack_mp3_external(audio, static_cast<int>(std::lround(spec.parameter)), mp3);
    case AttackKind::lowpass: return attack_lowpass(audio, spec.parameter);
    case AttackKind::amplitude_scale: return attack_amplitude(audio, spec.parameter);
    case AttackKind::time_scale: return attack_timescale(audio, spec.parameter);
  }
  return audio;
}

/// Default parameter grids, one per attack family.
inline std::vector<AttackSpec> default_attack_grid(AttackKind kind) {
  std::vector<double> params;
  switch (kind) {
    case AttackKind::none: params = {0.0}; break;
    case AttackKind::resample: params = {22050, 11025, 8000}; break;
    case AttackKind::mp3_external: params = {128, 112, 96, 80}; break;
    case AttackKind::lowpass: params = {3}; break;
    case AttackKind::amplitude_scale: params = {0.2, 0.8, 1.1, 1.2}; break;
    case AttackKind::time_scale: params = {-5, -2, 2, 5}; break;
  }
  std::vector<AttackSpec> out;
  for (double p : params) out.push_back({kind, p});
  return out;
}

}  // namespace wbe

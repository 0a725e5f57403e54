#pragma once

// HaengJin entropy of a sound wave: the mean of the pitch and amplitude
// perceptions, (log2(f/f0) + log2(a/a0)) / 2 bits/response, with K fixed at 1.

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>

#include "weberbits/error.hpp"
#include "weberbits/weber_fechner.hpp"

namespace weberbits {

inline constexpr std::string_view kFrequencyUnit = "Hz";
inline constexpr std::string_view kDefaultAmplitudeUnit = "arb";
inline constexpr std::string_view kHaengJinUnit = "bits/response";

// Number of perceptual responses the mean is taken over (pitch, amplitude).
inline constexpr double kResponsesPerWave = 2.0;

class SoundWave {
 public:
  SoundWave(double frequency, double amplitude,
            std::string amplitude_unit = std::string(kDefaultAmplitudeUnit))
      : frequency_(frequency), amplitude_(amplitude), amplitude_unit_(std::move(amplitude_unit)) {
    detail::require_positive(frequency, "frequency");
    detail::require_positive(amplitude, "amplitude");
  }

  double frequency() const noexcept { return frequency_; }
  double amplitude() const noexcept { return amplitude_; }
  const std::string& amplitude_unit() const noexcept { return amplitude_unit_; }

 private:
  double frequency_;
  double amplitude_;
  std::string amplitude_unit_;
};

class PerceptionThresholds {
 public:
  PerceptionThresholds(double f0, double a0,
                       std::string amplitude_unit = std::string(kDefaultAmplitudeUnit))
      : f0_(f0), a0_(a0), amplitude_unit_(std::move(amplitude_unit)) {
    detail::require_positive(f0, "frequency threshold");
    detail::require_positive(a0, "amplitude threshold");
  }

  double f0() const noexcept { return f0_; }
  double a0() const noexcept { return a0_; }
  const std::string& amplitude_unit() const noexcept { return amplitude_unit_; }

 private:
  double f0_;
  double a0_;
  std::string amplitude_unit_;
};

struct HaengJinEntropy {
  double value = 0.0;
};

namespace detail {

inline void check_in_range(const SoundWave& wave, const PerceptionThresholds& thr) {
  if (wave.amplitude_unit() != thr.amplitude_unit()) {
    throw Error(ErrorKind::UnitMismatch, "wave amplitude unit '" + wave.amplitude_unit() +
                                             "' does not match threshold unit '" +
                                             thr.amplitude_unit() + "'");
  }
  if (wave.frequency() < thr.f0()) {
    throw Error(ErrorKind::BelowThreshold, "frequency " + detail::num(wave.frequency()) +
                                               " Hz is below threshold " +
                                               detail::num(thr.f0()) + " Hz");
  }
  if (wave.amplitude() < thr.a0()) {
    throw Error(ErrorKind::BelowThreshold, "amplitude " + detail::num(wave.amplitude()) +
                                               " is below threshold " + detail::num(thr.a0()));
  }
}

inline Stimulus pitch_stimulus(const SoundWave& w, const PerceptionThresholds& t) {
  return Stimulus(w.frequency(), t.f0(), std::string(kFrequencyUnit));
}

inline Stimulus amplitude_stimulus(const SoundWave& w, const PerceptionThresholds& t) {
  return Stimulus(w.amplitude(), t.a0(), w.amplitude_unit());
}

}  // namespace detail

// log2(f/f0) + log2(a/a0) = log2(f a / (f0 a0)).
inline PerceptionBits total_perception(const SoundWave& wave, const PerceptionThresholds& thr) {
  detail::check_in_range(wave, thr);
  const double pitch = perceive(detail::pitch_stimulus(wave, thr)).value;
  const double loudness = perceive(detail::amplitude_stimulus(wave, thr)).value;
  return {pitch + loudness, PerceptionUnit::Bits};
}

inline HaengJinEntropy haengjin_entropy(const SoundWave& wave, const PerceptionThresholds& thr) {
  return {total_perception(wave, thr).value / kResponsesPerWave};
}

// Relative energy (f a)^2; equal f a products imply equal energy.
inline double energy_proxy(const SoundWave& wave) noexcept {
  const double product = wave.frequency() * wave.amplitude();
  return product * product;
}

// (f0/f) log2(f/f0) + (a0/a) log2(a/a0). This weighting is not invariant under
// changes that preserve f a, which is why it does not qualify as the entropy.
inline PerceptionBits rejected_shannon_form(const SoundWave& wave,
                                            const PerceptionThresholds& thr) {
  detail::check_in_range(wave, thr);
  const double pitch = perceive(detail::pitch_stimulus(wave, thr)).value;
  const double loudness = perceive(detail::amplitude_stimulus(wave, thr)).value;
  return {(thr.f0() / wave.frequency()) * pitch + (thr.a0() / wave.amplitude()) * loudness,
          PerceptionUnit::Bits};
}

// True iff |f1 a1 - f2 a2| <= rel_tol * max(f1 a1, f2 a2). Both waves must be
// perceivable under thr.
inline bool entropy_equivalent(const SoundWave& w1, const SoundWave& w2,
                               const PerceptionThresholds& thr, double rel_tol) {
  detail::check_in_range(w1, thr);
  detail::check_in_range(w2, thr);
  if (!(rel_tol >= 0.0)) {
    throw Error(ErrorKind::OutOfRange, "relative tolerance must be non-negative");
  }
  const double p1 = w1.frequency() * w1.amplitude();
  const double p2 = w2.frequency() * w2.amplitude();
  return std::abs(p1 - p2) <= rel_tol * std::max(p1, p2);
}

}  // namespace weberbits

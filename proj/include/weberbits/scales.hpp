#pragma once

// Classical logarithmic stimulus scales: sound intensity level, stellar
// magnitudes and equal-temperament pitch.

#include <cmath>
#include <string>

#include "weberbits/error.hpp"
#include "weberbits/haengjin.hpp"
#include "weberbits/weber_fechner.hpp"

namespace weberbits {

// Standard threshold of hearing, W/m^2.
inline constexpr double kHearingThresholdIntensity = 1e-12;

// Magnitudes per decade of brightness ratio; a ratio of 100 is exactly 5.
inline constexpr double kPogsonMagnitudesPerDecade = 2.5;

inline constexpr double kSemitonesPerOctave = 12.0;

struct IntensityLevel {
  double bels = 0.0;

  constexpr double decibels() const noexcept { return 10.0 * bels; }
};

struct MagnitudeDifference {
  double value = 0.0;
};

struct PitchInterval {
  double semitones = 0.0;
};

inline IntensityLevel intensity_level_bels(double intensity) {
  detail::require_positive(intensity, "intensity");
  return {std::log10(intensity / kHearingThresholdIntensity)};
}

// m2 - m1 for stars of brightness b1 and b2. Evaluated as a difference of
// logarithms so that swapping the arguments negates the result exactly.
inline MagnitudeDifference magnitude_difference(double b1, double b2) {
  detail::require_positive(b1, "brightness b1");
  detail::require_positive(b2, "brightness b2");
  return {kPogsonMagnitudesPerDecade * (std::log10(b1) - std::log10(b2))};
}

inline double equal_temperament_frequency(double reference, PitchInterval interval) {
  detail::require_positive(reference, "reference frequency");
  if (!std::isfinite(interval.semitones)) {
    throw Error(ErrorKind::OutOfRange, "semitone offset must be finite");
  }
  return reference * std::exp2(interval.semitones / kSemitonesPerOctave);
}

inline double equal_temperament_frequency(double reference, double semitones) {
  return equal_temperament_frequency(reference, PitchInterval{semitones});
}

// One octave above the reference is exactly one bit.
inline PerceptionBits pitch_perception_bits(double frequency, double reference) {
  return perceive(Stimulus(frequency, reference, std::string(kFrequencyUnit)));
}

}  // namespace weberbits

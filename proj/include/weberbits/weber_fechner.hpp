#pragma once

// Weber-Fechner perception in bits: R = K * log2(S / S0).
//
// The gain is stored once, in the bits domain (K). The natural-log gain k of
// the differential form dR = k dS/S is derived from it through K = k * ln 2.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>

#include "weberbits/error.hpp"

namespace weberbits {

enum class PerceptionUnit { Bits, Nats };

constexpr std::string_view to_string(PerceptionUnit unit) noexcept {
  return unit == PerceptionUnit::Bits ? "bits" : "nats";
}

struct PerceptionBits {
  double value = 0.0;
  PerceptionUnit unit = PerceptionUnit::Bits;
};

// A magnitude with an opaque unit label. Labels are only ever compared for
// equality.
struct Quantity {
  double value = 0.0;
  std::string unit;
};

namespace detail {

inline void require_positive(double x, std::string_view what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorKind::NonPositiveInput,
                std::string(what) + " must be a finite positive value, got " + detail::num(x));
  }
}

// log2(num / den) for positive finite operands, falling back to a difference
// of logarithms when the ratio itself is not representable.
inline double log2_ratio(double numerator, double denominator) {
  const double ratio = numerator / denominator;
  if (std::isfinite(ratio) && std::isnormal(ratio)) {
    return std::log2(ratio);
  }
  return std::log2(numerator) - std::log2(denominator);
}

}  // namespace detail

class Stimulus {
 public:
  Stimulus(double magnitude, double threshold, std::string unit = {})
      : Stimulus(Quantity{magnitude, unit}, Quantity{threshold, unit}) {}

  Stimulus(Quantity magnitude, Quantity threshold)
      : magnitude_(std::move(magnitude)), threshold_(std::move(threshold)) {
    detail::require_positive(magnitude_.value, "stimulus magnitude");
    detail::require_positive(threshold_.value, "stimulus threshold");
    if (magnitude_.unit != threshold_.unit) {
      throw Error(ErrorKind::UnitMismatch, "stimulus unit '" + magnitude_.unit +
                                               "' does not match threshold unit '" +
                                               threshold_.unit + "'");
    }
  }

  double magnitude() const noexcept { return magnitude_.value; }
  double threshold() const noexcept { return threshold_.value; }
  const std::string& unit() const noexcept { return magnitude_.unit; }

 private:
  Quantity magnitude_;
  Quantity threshold_;
};

class Gain {
 public:
  constexpr Gain() = default;

  explicit Gain(double bits_gain) : bits_(bits_gain) {
    detail::require_positive(bits_gain, "gain K");
  }

  static Gain from_natural(double k) {
    detail::require_positive(k, "natural gain k");
    return Gain(k * std::numbers::ln2);
  }

  constexpr double bits() const noexcept { return bits_; }
  constexpr double natural() const noexcept { return bits_ / std::numbers::ln2; }

 private:
  double bits_ = 1.0;
};

inline PerceptionBits convert(PerceptionBits response, PerceptionUnit target) noexcept {
  if (response.unit == target) return response;
  if (target == PerceptionUnit::Nats) {
    return {response.value * std::numbers::ln2, PerceptionUnit::Nats};
  }
  return {response.value / std::numbers::ln2, PerceptionUnit::Bits};
}

// Throws BelowThreshold for S < S0; S == S0 yields exactly 0.
inline PerceptionBits perceive(const Stimulus& stimulus, Gain gain = {}) {
  if (stimulus.magnitude() < stimulus.threshold()) {
    throw Error(ErrorKind::BelowThreshold,
                "stimulus " + detail::num(stimulus.magnitude()) + " is below threshold " +
                    detail::num(stimulus.threshold()));
  }
  if (stimulus.magnitude() == stimulus.threshold()) return {0.0, PerceptionUnit::Bits};
  return {gain.bits() * detail::log2_ratio(stimulus.magnitude(), stimulus.threshold()),
          PerceptionUnit::Bits};
}

inline Stimulus perceive_inverse(PerceptionBits response, const Quantity& threshold,
                                 Gain gain = {}) {
  if (response.value < 0.0 || std::isnan(response.value)) {
    throw Error(ErrorKind::NegativeResponse,
                "response must be non-negative, got " + detail::num(response.value));
  }
  detail::require_positive(threshold.value, "threshold");
  const double bits = convert(response, PerceptionUnit::Bits).value;
  const double magnitude = threshold.value * std::exp2(bits / gain.bits());
  return Stimulus(Quantity{magnitude, threshold.unit}, threshold);
}

enum class NodeSpacing { Logarithmic, Linear };

// Composite trapezoid rule for dR = k dS/S over [threshold, target]. Returns
// nats. Logarithmic spacing converges as O(steps^-2) uniformly in the ratio
// target/threshold; linear spacing degrades for large ratios.
inline PerceptionBits integrate_weber_ode(double threshold, double target, double k_natural,
                                          std::size_t steps,
                                          NodeSpacing spacing = NodeSpacing::Logarithmic) {
  detail::require_positive(threshold, "threshold");
  detail::require_positive(target, "target");
  detail::require_positive(k_natural, "natural gain k");
  if (steps == 0) throw Error(ErrorKind::InvalidSteps, "steps must be at least 1");
  if (target < threshold) {
    throw Error(ErrorKind::BelowThreshold, "target " + detail::num(target) +
                                               " is below threshold " + detail::num(threshold));
  }
  if (target == threshold) return {0.0, PerceptionUnit::Nats};

  const auto n = static_cast<double>(steps);
  auto node = [&](std::size_t i) {
    if (i == steps) return target;
    const double t = static_cast<double>(i) / n;
    return spacing == NodeSpacing::Logarithmic ? threshold * std::pow(target / threshold, t)
                                               : threshold + (target - threshold) * t;
  };

  double sum = 0.0;
  double lo = threshold;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double hi = node(i);
    sum += 0.5 * (hi - lo) * (1.0 / lo + 1.0 / hi);
    lo = hi;
  }
  return {k_natural * sum, PerceptionUnit::Nats};
}

}  // namespace weberbits

#pragma once

// Shannon information content and entropy. Information is the Weber-Fechner
// response to a probability stimulus whose threshold is P0 = 1:
// I = -log2(P / P0).

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "weberbits/error.hpp"
#include "weberbits/weber_fechner.hpp"

namespace weberbits {

inline constexpr double kProbabilityThreshold = 1.0;
inline constexpr double kDistributionSumTolerance = 1e-9;

class Probability {
 public:
  explicit Probability(double p) : p_(p) {
    if (!(p > 0.0 && p <= kProbabilityThreshold)) {
      throw Error(ErrorKind::OutOfRange, "probability must lie in (0, 1], got " + detail::num(p));
    }
  }

  double value() const noexcept { return p_; }

 private:
  double p_;
};

// Entries must be non-negative and sum to 1 within kDistributionSumTolerance.
// Nothing is renormalized.
class DiscreteDistribution {
 public:
  explicit DiscreteDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
      throw Error(ErrorKind::InvalidDistribution, "distribution needs at least one entry");
    }
    double total = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw Error(ErrorKind::InvalidDistribution,
                    "probabilities must be finite and non-negative, got " + detail::num(p));
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kDistributionSumTolerance) {
      throw Error(ErrorKind::InvalidDistribution,
                  "probabilities sum to " + detail::num(total) + ", expected 1");
    }
  }

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

inline PerceptionBits information(Probability p) {
  // 0.0 - x keeps the certain event at +0 rather than -0.
  return {0.0 - std::log2(p.value() / kProbabilityThreshold), PerceptionUnit::Bits};
}

inline PerceptionBits shannon_entropy(const DiscreteDistribution& dist) {
  double h = 0.0;
  for (double p : dist.probs()) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return {h, PerceptionUnit::Bits};
}

}  // namespace weberbits

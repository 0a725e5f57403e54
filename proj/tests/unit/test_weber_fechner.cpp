#include "weberbits/weber_fechner.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "support/oracles.hpp"

using namespace weberbits;
using weberbits::testing::rel_close;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected weberbits::Error");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("perceive anchors at threshold and one doubling", "[weber]") {
  CHECK(perceive(Stimulus(100, 100, "g")).value == 0.0);
  CHECK(perceive(Stimulus(200, 100, "g")).value == 1.0);
  CHECK(perceive(Stimulus(200, 100, "g")).unit == PerceptionUnit::Bits);
}

TEST_CASE("perceive matches Weber's 100:118 = 150:177 ratio", "[weber]") {
  const double a = perceive(Stimulus(118, 100, "g")).value;
  const double b = perceive(Stimulus(177, 150, "g")).value;
  CHECK(rel_close(a, weberbits::testing::kLog2Of1p18, 1e-15));
  CHECK(rel_close(a, b, 1e-12));
}

TEST_CASE("perceive scales with gain K", "[weber]") {
  CHECK(perceive(Stimulus(400, 100), Gain(3.0)).value == 6.0);
}

TEST_CASE("perceive rejects invalid stimuli", "[weber][errors]") {
  CHECK(kind_of([] { perceive(Stimulus(50, 100, "g")); }) == ErrorKind::BelowThreshold);
  CHECK(kind_of([] { Stimulus(0, 100, "g"); }) == ErrorKind::NonPositiveInput);
  CHECK(kind_of([] { Stimulus(10, -1, "g"); }) == ErrorKind::NonPositiveInput);
  CHECK(kind_of([] { Stimulus(NAN, 1); }) == ErrorKind::NonPositiveInput);
  CHECK(kind_of([] { Stimulus(INFINITY, 1); }) == ErrorKind::NonPositiveInput);
  CHECK(kind_of([] { Stimulus(Quantity{200, "g"}, Quantity{100, "kg"}); }) ==
        ErrorKind::UnitMismatch);
  CHECK(kind_of([] { Gain(0.0); }) == ErrorKind::NonPositiveInput);
}

TEST_CASE("perceive survives ratios beyond double range", "[weber]") {
  const double r = perceive(Stimulus(1e300, 1e-300)).value;
  CHECK(rel_close(r, std::log2(1e300) - std::log2(1e-300), 1e-12));
}

TEST_CASE("perceive_inverse examples", "[weber]") {
  CHECK(perceive_inverse({0.0}, Quantity{100, "g"}).magnitude() == 100.0);
  CHECK(perceive_inverse({1.0}, Quantity{100, "g"}).magnitude() == 200.0);
  const Stimulus s = perceive_inverse({0.23878686}, Quantity{150, "g"});
  // 150 * 2^0.23878686, mpmath: 177.0000000506554...
  CHECK(rel_close(s.magnitude(), 177.0000000506554512744, 1e-13));
  CHECK(s.unit() == "g");
  CHECK(rel_close(perceive_inverse({weberbits::testing::kLn2, PerceptionUnit::Nats}, Quantity{3, ""}).magnitude(),
                  6.0, 1e-15));
}

TEST_CASE("perceive_inverse rejects negative responses", "[weber][errors]") {
  CHECK(kind_of([] { perceive_inverse({-0.1}, Quantity{100, "g"}); }) ==
        ErrorKind::NegativeResponse);
  CHECK(kind_of([] { perceive_inverse({1.0}, Quantity{0, "g"}); }) == ErrorKind::NonPositiveInput);
}

TEST_CASE("integrate_weber_ode examples", "[weber][ode]") {
  CHECK(integrate_weber_ode(100, 100, 1, 10).value == 0.0);
  const auto ln2 = integrate_weber_ode(100, 200, 1, 10'000);
  CHECK(ln2.unit == PerceptionUnit::Nats);
  CHECK(std::abs(ln2.value - weberbits::testing::kLn2) < 1e-6);
  CHECK(std::abs(integrate_weber_ode(1, 10, 2, 10'000).value - weberbits::testing::kTwoLn10) <
        1e-5);
}

TEST_CASE("integrate_weber_ode errors", "[weber][ode][errors]") {
  CHECK(kind_of([] { integrate_weber_ode(100, 200, 1, 0); }) == ErrorKind::InvalidSteps);
  CHECK(kind_of([] { integrate_weber_ode(0, 200, 1, 10); }) == ErrorKind::NonPositiveInput);
  CHECK(kind_of([] { integrate_weber_ode(1, 2, -1, 10); }) == ErrorKind::NonPositiveInput);
  CHECK(kind_of([] { integrate_weber_ode(2, 1, 1, 10); }) == ErrorKind::BelowThreshold);
}

TEST_CASE("integrate_weber_ode converges to the closed form", "[weber][ode][property]") {
  auto rng = weberbits::testing::make_rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const double s0 = weberbits::testing::log_uniform(rng, 1e-6, 1e6);
    const double ratio = weberbits::testing::log_uniform(rng, 1.0001, 1e3);
    const double k = weberbits::testing::log_uniform(rng, 0.1, 10);
    const double exact = k * std::log(ratio);
    const double approx = integrate_weber_ode(s0, s0 * ratio, k, 10'000).value;
    CHECK(rel_close(approx, exact, 1e-5));
  }
  // Second-order convergence on log-spaced nodes.
  double previous = INFINITY;
  for (std::size_t n : {10u, 100u, 1000u, 10000u}) {
    const double error = std::abs(integrate_weber_ode(1, 1000, 1, n).value - std::log(1000.0));
    CHECK(error < previous);
    previous = error;
  }
}

TEST_CASE("linear node spacing also converges", "[weber][ode]") {
  const double coarse = std::abs(integrate_weber_ode(100, 200, 1, 100, NodeSpacing::Linear).value -
                                 weberbits::testing::kLn2);
  const double fine = std::abs(integrate_weber_ode(100, 200, 1, 10'000, NodeSpacing::Linear).value -
                               weberbits::testing::kLn2);
  CHECK(fine < coarse);
  CHECK(fine < 1e-8);
}

TEST_CASE("convert between bits and nats", "[weber]") {
  CHECK(rel_close(convert({1.0}, PerceptionUnit::Nats).value, weberbits::testing::kLn2, 1e-15));
  CHECK(convert({0.0}, PerceptionUnit::Nats).value == 0.0);
  CHECK(rel_close(convert({0.6931472, PerceptionUnit::Nats}, PerceptionUnit::Bits).value, 1.0,
                  1e-7));
  CHECK(convert({0.3, PerceptionUnit::Nats}, PerceptionUnit::Nats).value == 0.3);
}

TEST_CASE("Gain relates K and k through ln 2", "[weber]") {
  const Gain g = Gain::from_natural(1.0);
  CHECK(rel_close(g.bits(), weberbits::testing::kLn2, 1e-15));
  CHECK(rel_close(g.natural(), 1.0, 1e-15));
  // k ln x == K log2 x
  CHECK(rel_close(perceive(Stimulus(7, 2), Gain::from_natural(3.0)).value, 3.0 * std::log(3.5),
                  1e-12));
}

TEST_CASE("Weber-Fechner invariants hold on random stimuli", "[weber][property]") {
  auto rng = weberbits::testing::make_rng(2);
  using weberbits::testing::log_uniform;
  for (int trial = 0; trial < 2000; ++trial) {
    const double s0 = log_uniform(rng, 1e-9, 1e9);
    const double r1 = log_uniform(rng, 1.01, 1e4);
    const double r2 = log_uniform(rng, 1.01, 1e4);
    const double s1 = s0 * r1;
    const double s2 = s0 * r2;
    const Gain k(log_uniform(rng, 0.01, 100));

    CHECK(perceive(Stimulus(s0, s0), k).value == 0.0);

    const double p1 = perceive(Stimulus(s1, s0), k).value;
    const double p2 = perceive(Stimulus(s2, s0), k).value;
    if (s1 < s2) CHECK(p1 < p2);
    if (s2 < s1) CHECK(p2 < p1);

    const double c = log_uniform(rng, 1e-6, 1e6);
    CHECK(rel_close(perceive(Stimulus(c * s1, c * s0), k).value, p1, 1e-12));

    CHECK(rel_close(perceive(Stimulus(s1 * s2 / s0, s0), k).value, p1 + p2, 1e-12));

    CHECK(rel_close(perceive_inverse({p1}, Quantity{s0, ""}, k).magnitude(), s1, 1e-12));

    // Bits expressed in nats equal the natural-log form k ln(S/S0) with k = 1.
    CHECK(rel_close(convert(perceive(Stimulus(s1, s0)), PerceptionUnit::Nats).value,
                    std::log(s1 / s0), 1e-12));

    const double bits = perceive(Stimulus(s1, s0)).value;
    CHECK(rel_close(convert(convert({bits}, PerceptionUnit::Nats), PerceptionUnit::Bits).value, bits,
                    4e-16));
  }
}

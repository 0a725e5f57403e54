#include "weberbits/audio.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "support/oracles.hpp"

using namespace weberbits;
using weberbits::testing::rel_close;
using weberbits::testing::sine;

namespace {

SampleBuffer make_buffer(std::vector<double> samples, std::uint32_t rate = 44100) {
  return SampleBuffer{std::move(samples), rate, 1};
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected weberbits::Error");
  return ErrorKind::IoError;
}

// Largest tolerated entropy deviation given |df| <= 0.5 Hz and |da|/a <= 2%.
double propagated_entropy_tolerance(double f) {
  return 0.5 * (std::log2(1.0 + 0.5 / (f - 0.5)) + -std::log2(1.0 - 0.02));
}

}  // namespace

TEST_CASE("pure sine is recovered in every frame", "[audio]") {
  const auto buf = make_buffer(sine(440, 0.5, 44100, 3 * 44100));
  const auto frames = analyze_frames(buf, 4096, 2048);
  REQUIRE(frames.size() == (3 * 44100 - 4096) / 2048 + 1);
  for (const auto& f : frames) {
    CHECK(std::abs(f.dominant_frequency - 440.0) <= 0.5);
    CHECK(std::abs(f.amplitude - 0.5) <= 0.02 * 0.5);
  }
  for (std::size_t i = 1; i < frames.size(); ++i) {
    CHECK(frames[i].start_time - frames[i - 1].start_time == Catch::Approx(2048.0 / 44100));
  }
}

TEST_CASE("silence produces no frames", "[audio]") {
  const auto buf = make_buffer(std::vector<double>(20000, 0.0));
  CHECK(analyze_frames(buf, 4096, 2048).empty());
  const auto quiet = make_buffer(sine(1000, 1e-8, 44100, 8192));
  CHECK(analyze_frames(quiet, 4096, 4096).empty());
}

TEST_CASE("the stronger of two tones wins", "[audio]") {
  auto a = sine(440, 0.5, 44100, 44100);
  const auto b = sine(880, 0.1, 44100, 44100, 0.7);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  for (const auto& f : analyze_frames(make_buffer(std::move(a)), 4096, 2048)) {
    CHECK(std::abs(f.dominant_frequency - 440.0) <= 0.5);
  }
}

TEST_CASE("analysis parameter validation", "[audio][errors]") {
  const auto buf = make_buffer(sine(440, 0.5, 44100, 5000));
  CHECK(kind_of([&] { analyze_frames(buf, 8192, 1024); }) == ErrorKind::WindowTooLarge);
  CHECK(kind_of([&] { analyze_frames(buf, 1000, 100); }) == ErrorKind::InvalidWindowSize);
  CHECK(kind_of([&] { analyze_frames(buf, 128, 64); }) == ErrorKind::InvalidWindowSize);
  CHECK(kind_of([&] { analyze_frames(buf, 131072, 64); }) == ErrorKind::InvalidWindowSize);
  CHECK(kind_of([&] { analyze_frames(buf, 1024, 0); }) == ErrorKind::InvalidHop);
  CHECK(kind_of([&] { analyze_frames(buf, 1024, 2048); }) == ErrorKind::InvalidHop);
}

TEST_CASE("FFT-backed estimate agrees with a direct DFT", "[audio][oracle]") {
  // Same peak-picking and refinement, but the spectrum comes from a naive DFT.
  auto rng = weberbits::testing::make_rng(8);
  std::uniform_real_distribution<double> freq(300, 8000), amp(0.05, 0.6), phase(0, 6.28);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t n = 512;
    auto x = sine(freq(rng), amp(rng), 44100, n, phase(rng));
    const auto y = sine(freq(rng), 0.3 * amp(rng), 44100, n, phase(rng));
    for (std::size_t i = 0; i < n; ++i) x[i] += y[i];

    const auto frames = analyze_frames(make_buffer(x), n, n, 1);
    REQUIRE(frames.size() == 1);

    const auto mags = weberbits::testing::naive_hann_spectrum(x);
    std::size_t k = 1;
    for (std::size_t i = 2; i < n / 2; ++i) {
      if (mags[i] > mags[k]) k = i;
    }
    const double a = std::log(mags[k - 1]), b = std::log(mags[k]), c = std::log(mags[k + 1]);
    const double d = 0.5 * (a - c) / (a - 2 * b + c);
    const double x_pi = std::numbers::pi * d;
    const double response = std::sin(x_pi) / x_pi / (1 - d * d);
    CHECK(rel_close(frames[0].dominant_frequency, (k + d) * 44100.0 / n, 1e-9));
    CHECK(rel_close(frames[0].amplitude, 2 * mags[k] / response / (0.5 * n), 1e-9));
  }
}

TEST_CASE("frequency and amplitude recovery over a sine corpus", "[audio][property]") {
  auto rng = weberbits::testing::make_rng(9);
  std::uniform_real_distribution<double> freq(50, 5000), amp(0.1, 1.0), phase(0, 6.28);
  std::size_t total = 0, freq_ok = 0, amp_ok = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const double f = freq(rng), a = amp(rng);
    const auto frames = analyze_frames(make_buffer(sine(f, a, 44100, 44100, phase(rng))), 4096, 2048);
    for (const auto& fr : frames) {
      ++total;
      freq_ok += std::abs(fr.dominant_frequency - f) <= 0.5;
      amp_ok += std::abs(fr.amplitude - a) <= 0.02 * a;
    }
  }
  REQUIRE(total > 0);
  CHECK(static_cast<double>(freq_ok) >= 0.95 * static_cast<double>(total));
  CHECK(static_cast<double>(amp_ok) >= 0.95 * static_cast<double>(total));
}

TEST_CASE("frame lists are identical for any thread count", "[audio][property]") {
  auto x = sine(1234.5, 0.3, 48000, 48000 * 2);
  auto rng = weberbits::testing::make_rng(10);
  std::normal_distribution<double> noise(0, 0.01);
  for (auto& s : x) s += noise(rng);
  const auto buf = make_buffer(std::move(x), 48000);
  const auto reference = analyze_frames(buf, 2048, 512, 1);
  for (unsigned threads : {2u, 3u, 8u, 0u}) {
    const auto other = analyze_frames(buf, 2048, 512, threads);
    REQUIRE(other.size() == reference.size());
    for (std::size_t i = 0; i < other.size(); ++i) {
      CHECK(other[i].start_time == reference[i].start_time);
      CHECK(other[i].dominant_frequency == reference[i].dominant_frequency);
      CHECK(other[i].amplitude == reference[i].amplitude);
    }
  }
}

TEST_CASE("entropy series maps frames through HaengJin entropy", "[audio]") {
  const PerceptionThresholds thr(20, 1e-4, std::string(kFullScaleUnit));
  const std::vector<AnalysisFrame> frames = {{0.0, 40, 2e-4}, {0.1, 10, 1e-4}, {0.2, 40, 5e-5}};
  const auto series = entropy_series(frames, thr);
  REQUIRE(series.size() == 3);
  REQUIRE(series[0].entropy);
  CHECK(series[0].entropy->value == 1.0);
  CHECK(series[1].below_threshold());
  CHECK(series[2].below_threshold());
  CHECK(series[1].start_time == 0.1);

  CHECK(kind_of([&] { entropy_series(frames, PerceptionThresholds(20, 1e-4, "Pa")); }) ==
        ErrorKind::UnitMismatch);
}

TEST_CASE("entropy pipeline on a synthetic sine matches the closed form", "[audio]") {
  const PerceptionThresholds thr(20, 1e-4, std::string(kFullScaleUnit));
  const auto frames = analyze_frames(make_buffer(sine(440, 0.5, 44100, 2 * 44100)), 4096, 2048);
  const auto series = entropy_series(frames, thr);
  REQUIRE_FALSE(series.empty());
  const double tol = propagated_entropy_tolerance(440);
  for (const auto& p : series) {
    REQUIRE(p.entropy);
    CHECK(std::abs(p.entropy->value - weberbits::testing::kSineEntropy) <= tol);
  }
  for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i].start_time > series[i - 1].start_time);
}

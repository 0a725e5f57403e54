#pragma once

// Per-window (frequency, amplitude) estimation from PCM audio and the
// HaengJin entropy time series built on it.
//
// Each window is Hann-weighted and transformed with FFTW. The strongest bin
// strictly between DC and Nyquist is refined by a three-point parabola in
// log-magnitude; its magnitude is divided by the Hann main-lobe response at
// the refined offset to undo scalloping before normalizing by the window's
// coherent gain.

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "weberbits/error.hpp"
#include "weberbits/haengjin.hpp"
#include "weberbits/wav.hpp"

namespace weberbits {

inline constexpr std::size_t kMinWindowSize = 256;
inline constexpr std::size_t kMaxWindowSize = 65536;
inline constexpr std::size_t kDefaultWindowSize = 4096;
inline constexpr std::size_t kDefaultHop = 2048;
inline constexpr double kSilenceFloor = 1e-6;
inline constexpr double kHannCoherentGain = 0.5;

// Amplitude unit of decoded audio: linear, relative to digital full scale.
inline constexpr std::string_view kFullScaleUnit = "FS";

struct AnalysisFrame {
  double start_time = 0.0;
  double dominant_frequency = 0.0;
  double amplitude = 0.0;
};

struct EntropyPoint {
  double start_time = 0.0;
  double frequency = 0.0;
  double amplitude = 0.0;
  std::optional<HaengJinEntropy> entropy;  // empty when below threshold

  bool below_threshold() const noexcept { return !entropy.has_value(); }
};

using EntropySeries = std::vector<EntropyPoint>;

namespace audio_detail {

// The FFTW planner is not re-entrant; execution on distinct buffers is.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_alloc(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

class RealFftPlan {
 public:
  explicit RealFftPlan(std::size_t n) : n_(n) {
    auto in = fftw_alloc<double>(n);
    auto out = fftw_alloc<fftw_complex>(n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("FFTW planning failed");
  }

  RealFftPlan(const RealFftPlan&) = delete;
  RealFftPlan& operator=(const RealFftPlan&) = delete;

  ~RealFftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }

  std::size_t size() const noexcept { return n_; }

  // in and out must come from fftw_malloc so their alignment matches the plan.
  void execute(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(plan_, in, out); }

 private:
  std::size_t n_;
  fftw_plan plan_ = nullptr;
};

inline std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

// Hann main-lobe response relative to its peak, at an offset of d bins.
inline double hann_response(double d) {
  if (std::abs(d) < 1e-12) return 1.0;
  const double x = std::numbers::pi * d;
  return (std::sin(x) / x) / (1.0 - d * d);
}

struct Workspace {
  explicit Workspace(std::size_t n)
      : in(fftw_alloc<double>(n)), out(fftw_alloc<fftw_complex>(n / 2 + 1)), mags(n / 2 + 1) {}

  FftwBuffer<double> in;
  FftwBuffer<fftw_complex> out;
  std::vector<double> mags;
};

inline std::optional<AnalysisFrame> analyze_window(std::span<const double> samples,
                                                   std::span<const double> window,
                                                   double sample_rate, const RealFftPlan& plan,
                                                   Workspace& ws) {
  const std::size_t n = plan.size();
  for (std::size_t i = 0; i < n; ++i) ws.in[i] = samples[i] * window[i];
  plan.execute(ws.in.get(), ws.out.get());
  for (std::size_t k = 0; k <= n / 2; ++k) ws.mags[k] = std::hypot(ws.out[k][0], ws.out[k][1]);

  std::size_t peak = 1;
  for (std::size_t k = 2; k < n / 2; ++k) {
    if (ws.mags[k] > ws.mags[peak]) peak = k;
  }

  const double left = ws.mags[peak - 1];
  const double centre = ws.mags[peak];
  const double right = ws.mags[peak + 1];
  double offset = 0.0;
  if (left > 0.0 && centre > 0.0 && right > 0.0) {
    const double a = std::log(left);
    const double b = std::log(centre);
    const double c = std::log(right);
    const double curvature = a - 2.0 * b + c;
    if (curvature < 0.0) offset = std::clamp(0.5 * (a - c) / curvature, -0.5, 0.5);
  }

  const double peak_magnitude = centre / hann_response(offset);
  const double amplitude = 2.0 * peak_magnitude / (kHannCoherentGain * static_cast<double>(n));
  if (!(amplitude >= kSilenceFloor)) return std::nullopt;

  AnalysisFrame frame;
  frame.dominant_frequency = (static_cast<double>(peak) + offset) * sample_rate /
                             static_cast<double>(n);
  frame.amplitude = std::min(amplitude, 1.0);
  return frame;
}

}  // namespace audio_detail

// Frames are returned in window order regardless of the thread count;
// threads == 0 uses the hardware concurrency.
inline std::vector<AnalysisFrame> analyze_frames(const SampleBuffer& buffer,
                                                 std::size_t window_size = kDefaultWindowSize,
                                                 std::size_t hop = kDefaultHop,
                                                 unsigned threads = 0) {
  if (window_size < kMinWindowSize || window_size > kMaxWindowSize ||
      !std::has_single_bit(window_size)) {
    throw Error(ErrorKind::InvalidWindowSize,
                "window size must be a power of two in [256, 65536], got " +
                    std::to_string(window_size));
  }
  if (hop < 1 || hop > window_size) {
    throw Error(ErrorKind::InvalidHop,
                "hop must be in [1, window size], got " + std::to_string(hop));
  }
  if (buffer.sample_rate == 0) {
    throw Error(ErrorKind::NonPositiveInput, "sample rate must be positive");
  }
  if (window_size > buffer.samples.size()) {
    throw Error(ErrorKind::WindowTooLarge, "window of " + std::to_string(window_size) +
                                               " samples exceeds buffer of " +
                                               std::to_string(buffer.samples.size()));
  }

  const std::size_t count = (buffer.samples.size() - window_size) / hop + 1;
  const audio_detail::RealFftPlan plan(window_size);
  const std::vector<double> window = audio_detail::hann_window(window_size);
  const double rate = static_cast<double>(buffer.sample_rate);
  const std::span<const double> samples(buffer.samples);

  std::vector<std::optional<AnalysisFrame>> slots(count);
  auto work = [&](std::size_t begin, std::size_t end) {
    audio_detail::Workspace ws(window_size);
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t start = i * hop;
      auto frame = audio_detail::analyze_window(samples.subspan(start, window_size), window, rate,
                                                plan, ws);
      if (frame) frame->start_time = static_cast<double>(start) / rate;
      slots[i] = frame;
    }
  };

  std::size_t workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::clamp<std::size_t>(workers, 1, count);
  if (workers == 1) {
    work(0, count);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t begin = 0; begin < count; begin += chunk) {
      pool.emplace_back(work, begin, std::min(count, begin + chunk));
    }
  }

  std::vector<AnalysisFrame> frames;
  frames.reserve(count);
  for (const auto& slot : slots) {
    if (slot) frames.push_back(*slot);
  }
  return frames;
}

// Frames outside the thresholds are kept, flagged as below threshold.
inline EntropySeries entropy_series(std::span<const AnalysisFrame> frames,
                                    const PerceptionThresholds& thr) {
  if (thr.amplitude_unit() != kFullScaleUnit) {
    throw Error(ErrorKind::UnitMismatch, "audio amplitudes are in full-scale units ('" +
                                             std::string(kFullScaleUnit) + "'), threshold uses '" +
                                             thr.amplitude_unit() + "'");
  }
  EntropySeries series;
  series.reserve(frames.size());
  for (const auto& frame : frames) {
    EntropyPoint point{frame.start_time, frame.dominant_frequency, frame.amplitude, std::nullopt};
    if (frame.dominant_frequency >= thr.f0() && frame.amplitude >= thr.a0()) {
      point.entropy = haengjin_entropy(
          SoundWave(frame.dominant_frequency, frame.amplitude, std::string(kFullScaleUnit)), thr);
    }
    series.push_back(point);
  }
  return series;
}

}  // namespace weberbits

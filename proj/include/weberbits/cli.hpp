#pragma once

// Command-line front end. Every subcommand maps onto exactly one library
// operation; run() is kept free of process globals so it can be driven
// in-process.
//
// Exit codes: 0 success, 1 usage, 2 validation failure, 3 I/O or format error.
// Threshold and gain values resolve as flag > --config file > $WEBER_BITS_CONFIG.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "weberbits/audio.hpp"
#include "weberbits/config.hpp"
#include "weberbits/error.hpp"
#include "weberbits/haengjin.hpp"
#include "weberbits/record.hpp"
#include "weberbits/scales.hpp"
#include "weberbits/shannon.hpp"
#include "weberbits/wav.hpp"
#include "weberbits/weber_fechner.hpp"

namespace weberbits::cli {

inline constexpr std::string_view kProgramName = "weber-bits";
inline constexpr std::string_view kConfigEnvVar = "WEBER_BITS_CONFIG";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,
  kExitIo = 3,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandOutput {
  std::vector<std::string> input_keys;
  std::vector<OutputRecord> records;
};

inline std::optional<std::string> config_path_from_env() {
  const char* value = std::getenv(std::string(kConfigEnvVar).c_str());
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

namespace detail {

inline CommandOutput single(OutputRecord record) {
  CommandOutput out;
  for (const auto& [key, value] : record.inputs) out.input_keys.push_back(key);
  out.records.push_back(std::move(record));
  return out;
}

inline double require(const std::optional<double>& v, std::string_view flag) {
  if (!v) throw UsageError("missing required option --" + std::string(flag));
  return *v;
}

inline double resolve(const std::optional<double>& flag, const std::optional<double>& config,
                      std::string_view name) {
  if (flag) return *flag;
  if (config) return *config;
  throw UsageError("missing --" + std::string(name) + " (not set by flag or config)");
}

inline std::vector<double> parse_probs(const std::string& text) {
  std::vector<double> probs;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw UsageError("--probs: '" + std::string(item) + "' is not a number");
    }
    probs.push_back(value);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return probs;
}

inline std::string join_probs(const std::vector<double>& probs) {
  std::string out;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (i != 0) out += ',';
    out += format_double(probs[i]);
  }
  return out;
}

// Negative counts are mapped to 0 so the library reports its own error kind.
inline std::size_t to_count(std::int64_t v) { return v < 0 ? 0 : static_cast<std::size_t>(v); }

inline int exit_code_for(ErrorKind kind) {
  return is_format_error(kind) ? kExitIo : kExitValidation;
}

}  // namespace detail

// args excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err,
               std::optional<std::string> env_config_path = std::nullopt) {
  CLI::App app{"Weber-Fechner perception, Shannon information and HaengJin entropy in bits",
               std::string(kProgramName)};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string format_name = "json";
  std::string config_path;
  app.add_option("--format", format_name, "Output format")
      ->check(CLI::IsMember({"json", "csv", "plain"}))
      ->capture_default_str();
  app.add_option("--config", config_path, "key = value file with freq_threshold, amp_threshold, gain");

  // Flag storage shared by all subcommands.
  std::optional<double> stimulus, threshold, gain, response, target, k_natural, p, freq, amp,
      freq_threshold, amp_threshold, freq1, amp1, freq2, amp2, intensity, b1, b2, reference,
      semitones;
  double rel_tol = 1e-9;
  std::int64_t steps = 0;
  std::int64_t window = static_cast<std::int64_t>(kDefaultWindowSize);
  std::int64_t hop = static_cast<std::int64_t>(kDefaultHop);
  unsigned threads = 0;
  std::string unit, threshold_unit, response_unit = "bits", spacing = "log", probs_text,
      amp_unit = std::string(kDefaultAmplitudeUnit), input_path;
  bool clamp = false;
  bool decibels = false;

  Config config;
  std::vector<std::pair<CLI::App*, std::function<CommandOutput()>>> handlers;
  auto command = [&](const char* name, const char* description,
                     std::function<CommandOutput()> handler) {
    CLI::App* sub = app.add_subcommand(name, description);
    handlers.emplace_back(sub, std::move(handler));
    return sub;
  };

  auto thresholds = [&] {
    return PerceptionThresholds(detail::resolve(freq_threshold, config.freq_threshold,
                                                "freq-threshold"),
                                detail::resolve(amp_threshold, config.amp_threshold,
                                                "amp-threshold"),
                                amp_unit);
  };
  auto resolved_gain = [&] { return gain ? *gain : config.gain.value_or(1.0); };
  bool amp_unit_given = false;
  auto wave_inputs = [&](const SoundWave& w, const PerceptionThresholds& t) {
    std::vector<std::pair<std::string, InputValue>> in = {{"freq", w.frequency()},
                                                          {"amp", w.amplitude()},
                                                          {"freq_threshold", t.f0()},
                                                          {"amp_threshold", t.a0()}};
    if (amp_unit_given) in.emplace_back("amp_unit", amp_unit);
    return in;
  };

  // perceive
  auto* perceive_cmd = command("perceive", "Perception R = K log2(S/S0) in bits", [&] {
    const double g = resolved_gain();
    const std::string thr_unit = threshold_unit.empty() ? unit : threshold_unit;
    const Stimulus s(Quantity{detail::require(stimulus, "stimulus"), unit},
                     Quantity{detail::require(threshold, "threshold"), thr_unit});
    const Gain k(g);
    OutputRecord r{"perceive", {{"stimulus", s.magnitude()}, {"threshold", s.threshold()},
                                {"gain", g}}, {}, "bits", false};
    if (!unit.empty()) r.inputs.emplace_back("stimulus_unit", unit);
    try {
      r.value = perceive(s, k).value;
    } catch (const Error& e) {
      if (!clamp || e.kind() != ErrorKind::BelowThreshold) throw;
      r.value = 0.0;
      r.below_threshold = true;
    }
    return detail::single(std::move(r));
  });
  perceive_cmd->add_option("--stimulus", stimulus, "Stimulus magnitude S");
  perceive_cmd->add_option("--threshold", threshold, "Threshold S0");
  perceive_cmd->add_option("--gain", gain, "Gain K (default 1)");
  perceive_cmd->add_option("--unit", unit, "Unit label of S and S0");
  perceive_cmd->add_option("--threshold-unit", threshold_unit, "Unit label of S0 if different");
  perceive_cmd->add_flag("--clamp", clamp, "Report sub-threshold stimuli as 0 bits");

  // perceive-inverse
  auto* inverse_cmd = command("perceive-inverse", "Stimulus S = S0 2^(R/K) for a response R", [&] {
    const double g = resolved_gain();
    const auto u = response_unit == "nats" ? PerceptionUnit::Nats : PerceptionUnit::Bits;
    const double r_value = detail::require(response, "response");
    const Stimulus s = perceive_inverse(PerceptionBits{r_value, u},
                                        Quantity{detail::require(threshold, "threshold"), unit},
                                        Gain(g));
    return detail::single({"perceive-inverse",
                           {{"response", r_value},
                            {"response_unit", response_unit},
                            {"threshold", s.threshold()},
                            {"gain", g}},
                           s.magnitude(),
                           unit,
                           false});
  });
  inverse_cmd->add_option("--response", response, "Response R");
  inverse_cmd->add_option("--response-unit", response_unit, "bits or nats")
      ->check(CLI::IsMember({"bits", "nats"}));
  inverse_cmd->add_option("--threshold", threshold, "Threshold S0");
  inverse_cmd->add_option("--gain", gain, "Gain K (default 1)");
  inverse_cmd->add_option("--unit", unit, "Unit label of S0");

  // integrate-ode
  auto* ode_cmd = command("integrate-ode", "Trapezoid integration of dR = k dS/S, in nats", [&] {
    const double s0 = detail::require(threshold, "threshold");
    const double s = detail::require(target, "target");
    const double k = detail::require(k_natural, "k");
    const auto nodes = spacing == "linear" ? NodeSpacing::Linear : NodeSpacing::Logarithmic;
    const auto result = integrate_weber_ode(s0, s, k, detail::to_count(steps), nodes);
    return detail::single({"integrate-ode",
                           {{"threshold", s0},
                            {"target", s},
                            {"k", k},
                            {"steps", static_cast<double>(steps)},
                            {"spacing", spacing}},
                           result.value,
                           "nats",
                           false});
  });
  ode_cmd->add_option("--threshold", threshold, "Lower limit S0");
  ode_cmd->add_option("--target", target, "Upper limit S");
  ode_cmd->add_option("--k", k_natural, "Natural-log gain k");
  ode_cmd->add_option("--steps", steps, "Number of trapezoid panels")->required();
  ode_cmd->add_option("--spacing", spacing, "Node spacing")
      ->check(CLI::IsMember({"log", "linear"}));

  // information
  auto* info_cmd = command("information", "Shannon information -log2 p in bits", [&] {
    const double pv = detail::require(p, "p");
    return detail::single(
        {"information", {{"p", pv}}, information(Probability(pv)).value, "bits", false});
  });
  info_cmd->add_option("--p", p, "Event probability in (0, 1]");

  // entropy
  auto* entropy_cmd = command("entropy", "Shannon entropy of a distribution", [&] {
    const auto probs = detail::parse_probs(probs_text);
    const DiscreteDistribution dist(probs);
    return detail::single({"entropy", {{"probs", detail::join_probs(probs)}},
                           shannon_entropy(dist).value, "bits/symbol", false});
  });
  entropy_cmd->add_option("--probs", probs_text, "Comma-separated probabilities")->required();

  auto add_wave_options = [&](CLI::App* sub) {
    sub->add_option("--freq", freq, "Frequency f in Hz");
    sub->add_option("--amp", amp, "Amplitude a");
    sub->add_option("--freq-threshold", freq_threshold, "Frequency threshold f0 in Hz");
    sub->add_option("--amp-threshold", amp_threshold, "Amplitude threshold a0");
    sub->add_option("--amp-unit", amp_unit, "Amplitude unit label")
        ->each([&](const std::string&) { amp_unit_given = true; });
  };

  // sound-entropy
  auto* sound_entropy_cmd = command("sound-entropy", "HaengJin entropy in bits/response", [&] {
    const PerceptionThresholds t = thresholds();
    const SoundWave w(detail::require(freq, "freq"), detail::require(amp, "amp"), amp_unit);
    OutputRecord r{"sound-entropy", wave_inputs(w, t), {}, std::string(kHaengJinUnit), false};
    try {
      r.value = haengjin_entropy(w, t).value;
    } catch (const Error& e) {
      if (!clamp || e.kind() != ErrorKind::BelowThreshold) throw;
      r.value = 0.0;
      r.below_threshold = true;
    }
    return detail::single(std::move(r));
  });
  add_wave_options(sound_entropy_cmd);
  sound_entropy_cmd->add_flag("--clamp", clamp, "Report sub-threshold waves as 0 bits/response");

  // sound-total
  auto* sound_total_cmd = command("sound-total", "Total perception log2(fa/f0a0) in bits", [&] {
    const PerceptionThresholds t = thresholds();
    const SoundWave w(detail::require(freq, "freq"), detail::require(amp, "amp"), amp_unit);
    return detail::single(
        {"sound-total", wave_inputs(w, t), total_perception(w, t).value, "bits", false});
  });
  add_wave_options(sound_total_cmd);

  // energy-proxy
  auto* energy_cmd = command("energy-proxy", "Relative energy (f a)^2", [&] {
    const SoundWave w(detail::require(freq, "freq"), detail::require(amp, "amp"), amp_unit);
    return detail::single({"energy-proxy",
                           {{"freq", w.frequency()}, {"amp", w.amplitude()}},
                           energy_proxy(w),
                           "(Hz*" + amp_unit + ")^2",
                           false});
  });
  energy_cmd->add_option("--freq", freq, "Frequency f in Hz");
  energy_cmd->add_option("--amp", amp, "Amplitude a");
  energy_cmd->add_option("--amp-unit", amp_unit, "Amplitude unit label");

  // rejected-form
  auto* rejected_cmd = command("rejected-form", "(f0/f) log2(f/f0) + (a0/a) log2(a/a0)", [&] {
    const PerceptionThresholds t = thresholds();
    const SoundWave w(detail::require(freq, "freq"), detail::require(amp, "amp"), amp_unit);
    return detail::single(
        {"rejected-form", wave_inputs(w, t), rejected_shannon_form(w, t).value, "bits", false});
  });
  add_wave_options(rejected_cmd);

  // equivalent
  auto* equivalent_cmd = command("equivalent", "Whether two waves share f a within rel-tol", [&] {
    const PerceptionThresholds t = thresholds();
    const SoundWave w1(detail::require(freq1, "freq1"), detail::require(amp1, "amp1"), amp_unit);
    const SoundWave w2(detail::require(freq2, "freq2"), detail::require(amp2, "amp2"), amp_unit);
    return detail::single({"equivalent",
                           {{"freq1", w1.frequency()},
                            {"amp1", w1.amplitude()},
                            {"freq2", w2.frequency()},
                            {"amp2", w2.amplitude()},
                            {"freq_threshold", t.f0()},
                            {"amp_threshold", t.a0()},
                            {"rel_tol", rel_tol}},
                           entropy_equivalent(w1, w2, t, rel_tol),
                           "boolean",
                           false});
  });
  equivalent_cmd->add_option("--freq1", freq1, "First wave frequency");
  equivalent_cmd->add_option("--amp1", amp1, "First wave amplitude");
  equivalent_cmd->add_option("--freq2", freq2, "Second wave frequency");
  equivalent_cmd->add_option("--amp2", amp2, "Second wave amplitude");
  equivalent_cmd->add_option("--freq-threshold", freq_threshold, "Frequency threshold f0 in Hz");
  equivalent_cmd->add_option("--amp-threshold", amp_threshold, "Amplitude threshold a0");
  equivalent_cmd->add_option("--amp-unit", amp_unit, "Amplitude unit label");
  equivalent_cmd->add_option("--rel-tol", rel_tol, "Relative tolerance on f a")
      ->capture_default_str();

  // bel
  auto* bel_cmd = command("bel", "Sound intensity level above 1e-12 W/m^2", [&] {
    const double i = detail::require(intensity, "intensity");
    const IntensityLevel level = intensity_level_bels(i);
    return detail::single({"bel", {{"intensity", i}},
                           decibels ? level.decibels() : level.bels,
                           decibels ? "dB" : "bels", false});
  });
  bel_cmd->add_option("--intensity", intensity, "Intensity in W/m^2");
  bel_cmd->add_flag("--db", decibels, "Report decibels instead of bels");

  // magnitude
  auto* magnitude_cmd = command("magnitude", "Stellar magnitude difference m2 - m1", [&] {
    const double v1 = detail::require(b1, "b1");
    const double v2 = detail::require(b2, "b2");
    return detail::single({"magnitude", {{"b1", v1}, {"b2", v2}},
                           magnitude_difference(v1, v2).value, "mag", false});
  });
  magnitude_cmd->add_option("--b1", b1, "Brightness of star 1");
  magnitude_cmd->add_option("--b2", b2, "Brightness of star 2");

  // pitch
  auto* pitch_cmd = command("pitch", "Pitch perception log2(f/f_ref) in bits", [&] {
    const double f = detail::require(freq, "freq");
    const double ref = detail::require(reference, "reference");
    return detail::single({"pitch", {{"freq", f}, {"reference", ref}},
                           pitch_perception_bits(f, ref).value, "bits", false});
  });
  pitch_cmd->add_option("--freq", freq, "Frequency in Hz");
  pitch_cmd->add_option("--reference", reference, "Reference frequency in Hz");

  // et-freq
  auto* et_cmd = command("et-freq", "Equal-temperament frequency ref 2^(n/12)", [&] {
    const double ref = detail::require(reference, "reference");
    const double n = detail::require(semitones, "semitones");
    return detail::single({"et-freq", {{"reference", ref}, {"semitones", n}},
                           equal_temperament_frequency(ref, n), "Hz", false});
  });
  et_cmd->add_option("--reference", reference, "Reference frequency in Hz");
  et_cmd->add_option("--semitones", semitones, "Offset in semitones");

  // analyze-wav
  auto* wav_cmd = command("analyze-wav", "Per-window HaengJin entropy of a 16-bit PCM WAV", [&] {
    const PerceptionThresholds t(
        detail::resolve(freq_threshold, config.freq_threshold, "freq-threshold"),
        detail::resolve(amp_threshold, config.amp_threshold, "amp-threshold"),
        std::string(kFullScaleUnit));
    const SampleBuffer buffer = read_wav_file(input_path);
    const auto frames =
        analyze_frames(buffer, detail::to_count(window), detail::to_count(hop), threads);
    CommandOutput result;
    result.input_keys = {"start_time", "frequency", "amplitude"};
    for (const auto& point : entropy_series(frames, t)) {
      OutputRecord r{"analyze-wav",
                     {{"start_time", point.start_time},
                      {"frequency", point.frequency},
                      {"amplitude", point.amplitude}},
                     {},
                     std::string(kHaengJinUnit),
                     point.below_threshold()};
      if (point.entropy) r.value = point.entropy->value;
      result.records.push_back(std::move(r));
    }
    return result;
  });
  wav_cmd->add_option("--input,-i", input_path, "WAV file")->required();
  wav_cmd->add_option("--freq-threshold", freq_threshold, "Frequency threshold f0 in Hz");
  wav_cmd->add_option("--amp-threshold", amp_threshold, "Amplitude threshold a0 (full scale)");
  wav_cmd->add_option("--window", window, "Window size, power of two")->capture_default_str();
  wav_cmd->add_option("--hop", hop, "Hop size in samples")->capture_default_str();
  wav_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto format = format_name == "csv"     ? OutputFormat::Csv
                      : format_name == "plain" ? OutputFormat::Plain
                                               : OutputFormat::Json;
  const std::string prefix = std::string(kProgramName) + ": ";
  try {
    if (!config_path.empty()) {
      config = load_config(config_path);
    } else if (env_config_path) {
      config = load_config(*env_config_path);
    }
    for (auto& [sub, handler] : handlers) {
      if (sub->parsed()) {
        const CommandOutput result = handler();
        write_records(out, format, result.input_keys, result.records);
        return kExitOk;
      }
    }
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    err << prefix << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << prefix << "config error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << prefix << "error: " << e.what() << '\n';
    return detail::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << prefix << "internal error: " << e.what() << '\n';
    return kExitIo;
  }
}

inline int main(int argc, char** argv) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return run(std::move(args), std::cout, std::cerr, config_path_from_env());
}

}  // namespace weberbits::cli

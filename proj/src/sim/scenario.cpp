#include "bsmguard/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bsmguard/csv.hpp"
#include "bsmguard/error.hpp"
#include "bsmguard/rng.hpp"

namespace bsmguard::sim {

namespace {

constexpr double kEdge = 1e-9;

bool sorted_disjoint(const std::vector<AttackWindow>& w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i].start < w[i - 1].end) return false;
  }
  return true;
}

}  // namespace

double DrivingProfile::nominal_speed(double t) const {
  double v = base_speed;
  for (const auto& s : segments) {
    if (t < s.start) break;
    if (t >= s.end) {
      v = s.end_speed;
      continue;
    }
    return v + (s.end_speed - v) * (t - s.start) / (s.end - s.start);
  }
  return v;
}

void DrivingProfile::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ParameterError("duration must be positive");
  if (!(base_speed >= 0.0)) throw ParameterError("base speed must be non-negative");
  if (!(noise_stdev >= 0.0)) throw ParameterError("noise stdev must be non-negative");
  double previous_end = 0.0;
  for (const auto& s : segments) {
    if (!(s.end > s.start) || s.start < previous_end) {
      throw ParameterError("speed segments must be non-empty, sorted and non-overlapping");
    }
    if (!(s.end_speed >= 0.0)) throw ParameterError("segment speeds must be non-negative");
    previous_end = s.end;
  }
}

std::vector<BsmRecord> generate_stream(const DrivingProfile& profile, std::uint64_t seed) {
  profile.validate();
  const auto n = static_cast<std::size_t>(std::llround(profile.duration / kBsmPeriod));
  Rng rng(seed);
  std::vector<BsmRecord> out;
  out.reserve(n);
  double previous = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    BsmRecord r;
    r.t = static_cast<double>(k + 1) / 10.0;
    r.vehicle_id = profile.vehicle_id;
    const double noise = profile.noise_stdev > 0.0 ? rng.normal(0.0, profile.noise_stdev) : 0.0;
    r.speed = std::max(0.0, profile.nominal_speed(r.t) + noise);
    r.accel = k == 0 ? 0.0 : (r.speed - previous) / kBsmPeriod;
    previous = r.speed;
    out.push_back(std::move(r));
  }
  return out;
}

std::string_view to_string(AttackMode mode) {
  switch (mode) {
    case AttackMode::constant_replace: return "constant_replace";
    case AttackMode::offset: return "offset";
    case AttackMode::noise_burst: return "noise_burst";
  }
  return "?";
}

AttackMode parse_attack_mode(std::string_view text) {
  if (text == "constant_replace") return AttackMode::constant_replace;
  if (text == "offset") return AttackMode::offset;
  if (text == "noise_burst") return AttackMode::noise_burst;
  throw ConfigError("unknown attack mode '" + std::string(text) +
                    "' (expected constant_replace, offset or noise_burst)");
}

void AttackSpec::validate() const {
  for (const auto& w : windows) {
    if (!(w.start >= 0.0) || !(w.end > w.start) || !std::isfinite(w.end)) {
      throw ParameterError("attack window [" + format_double(w.start) + ", " + format_double(w.end) +
                           ") is empty or negative");
    }
  }
  auto sorted = windows;
  std::sort(sorted.begin(), sorted.end(), [](const AttackWindow& a, const AttackWindow& b) { return a.start < b.start; });
  if (!sorted_disjoint(sorted)) throw ParameterError("attack windows overlap");
  if (mode == AttackMode::noise_burst && !(magnitude >= 0.0)) {
    throw ParameterError("noise_burst magnitude is a standard deviation and must be non-negative");
  }
  if (!std::isfinite(magnitude)) throw ParameterError("attack magnitude must be finite");
}

bool AttackSpec::covers(double t) const {
  for (const auto& w : windows) {
    if (t >= w.start - kEdge && t < w.end - kEdge) return true;
  }
  return false;
}

std::vector<BsmRecord> inject_false_info(std::vector<BsmRecord> stream, const AttackSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  for (auto& r : stream) {
    if (!spec.covers(r.t)) continue;
    switch (spec.mode) {
      case AttackMode::constant_replace: r.speed = spec.magnitude; break;
      case AttackMode::offset: r.speed = std::max(0.0, r.speed + spec.magnitude); break;
      case AttackMode::noise_burst: r.speed = std::max(0.0, r.speed + rng.normal(0.0, spec.magnitude)); break;
    }
    r.label = Label::attack;
  }
  return stream;
}

std::vector<AttackWindow> default_attack_windows(double duration) {
  std::vector<AttackWindow> out;
  for (std::size_t b = 0; 200.0 * static_cast<double>(b + 1) <= duration + kEdge; ++b) {
    const double base = 200.0 * static_cast<double>(b);
    out.push_back({base + 100.0, base + 105.0});
  }
  return out;
}

std::vector<AttackWindow> parse_windows(std::string_view text) {
  std::vector<AttackWindow> out;
  for (const auto& item : split_list(text, ',')) {
    const auto parts = split_list(item, ':');
    if (parts.size() != 2) throw ConfigError("attack window '" + item + "' is not start:end");
    out.push_back({parse_double(parts[0], "window start"), parse_double(parts[1], "window end")});
  }
  return out;
}

Scenario scenario_from_config(const Config& config) {
  Scenario s;
  s.profile.duration = config.require_double("duration_s");
  s.seed = config.require_u64("seed");
  s.profile.base_speed = config.get_double("base_speed_mps", s.profile.base_speed);
  s.profile.noise_stdev = config.get_double("noise_stdev", s.profile.noise_stdev);
  if (auto id = config.get_string("vehicle_id")) {
    if (id->empty() || id->find(',') != std::string::npos) config.fail("vehicle_id", "must be non-empty without commas");
    s.profile.vehicle_id = *id;
  }
  if (auto text = config.get_string("segments")) {
    for (const auto& item : split_list(*text, ',')) {
      const auto parts = split_list(item, ':');
      if (parts.size() != 3) config.fail("segments", "expected start:end:speed entries");
      try {
        s.profile.segments.push_back({parse_double(parts[0], "segment start"), parse_double(parts[1], "segment end"),
                                      parse_double(parts[2], "segment speed")});
      } catch (const Error& e) {
        config.fail("segments", e.what());
      }
    }
  }
  try {
    s.profile.validate();
  } catch (const ParameterError& e) {
    config.fail(s.profile.segments.empty() ? "duration_s" : "segments", e.what());
  }

  if (auto text = config.get_string("attack.windows")) {
    try {
      s.attack.windows = parse_windows(*text);
    } catch (const Error& e) {
      config.fail("attack.windows", e.what());
    }
  } else {
    s.attack.windows = default_attack_windows(s.profile.duration);
  }
  for (const auto& w : s.attack.windows) {
    if (w.end > s.profile.duration + kEdge) config.fail("attack.windows", "window extends past duration_s");
  }
  if (auto mode = config.get_string("attack.mode")) {
    try {
      s.attack.mode = parse_attack_mode(*mode);
    } catch (const ConfigError& e) {
      config.fail("attack.mode", e.what());
    }
  }
  s.attack.magnitude = config.get_double("attack.magnitude", s.attack.magnitude);
  try {
    s.attack.validate();
  } catch (const ParameterError& e) {
    config.fail(config.has("attack.windows") ? "attack.windows" : "attack.magnitude", e.what());
  }
  return s;
}

std::vector<BsmRecord> run_scenario(const Scenario& scenario) {
  auto stream = generate_stream(scenario.profile, derive_seed(scenario.seed, "sim.noise"));
  AttackSpec attack = scenario.attack;
  attack.seed = derive_seed(scenario.seed, "sim.attack");
  return inject_false_info(std::move(stream), attack);
}

}  // namespace bsmguard::sim

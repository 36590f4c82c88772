#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bsmguard/bsm.hpp"
#include "bsmguard/config.hpp"

namespace bsmguard::sim {

/// Linear ramp of the nominal speed from its value at `start` to `end_speed`
/// at `end`; the speed is held afterwards.
struct SpeedSegment {
  double start = 0.0;
  double end = 0.0;
  double end_speed = 0.0;
};

struct DrivingProfile {
  double duration = 200.0;    // s
  double base_speed = 15.6;   // m/s, roughly a 35 mph corridor
  double noise_stdev = 0.5;   // m/s, i.i.d. Gaussian per record
  std::vector<SpeedSegment> segments;
  std::string vehicle_id = "veh-1";

  /// Noise-free speed at time t.
  double nominal_speed(double t) const;
  /// Throws ParameterError on a non-positive duration, negative speeds or
  /// overlapping/unsorted segments.
  void validate() const;
};

/// 10 Hz records at t = 0.1, 0.2, ..., duration. Speed is the nominal speed plus
/// noise, clamped at 0; accel is the backward difference of consecutive speeds
/// (0 for the first record). All labels are no_attack.
std::vector<BsmRecord> generate_stream(const DrivingProfile& profile, std::uint64_t seed);

enum class AttackMode {
  constant_replace,  // speed := magnitude
  offset,            // speed := max(0, speed + magnitude)
  noise_burst,       // speed := max(0, speed + N(0, magnitude^2))
};

std::string_view to_string(AttackMode mode);
AttackMode parse_attack_mode(std::string_view text);

/// Half-open interval [start, end) in seconds.
struct AttackWindow {
  double start = 0.0;
  double end = 0.0;
};

struct AttackSpec {
  std::vector<AttackWindow> windows;
  AttackMode mode = AttackMode::constant_replace;
  double magnitude = 0.0;
  std::uint64_t seed = 0;  // noise_burst draws

  /// Throws ParameterError on empty, negative or overlapping windows.
  void validate() const;
  bool covers(double t) const;
};

/// Rewrites the speed of records inside the attack windows and labels them
/// attack. Acceleration, time and vehicle id are left as they were.
std::vector<BsmRecord> inject_false_info(std::vector<BsmRecord> stream, const AttackSpec& spec);

/// One 5 s window per complete 200 s block, at [200b + 100, 200b + 105).
std::vector<AttackWindow> default_attack_windows(double duration);

/// Parses "start:end, start:end, ...".
std::vector<AttackWindow> parse_windows(std::string_view text);

struct Scenario {
  DrivingProfile profile;
  AttackSpec attack;
  std::uint64_t seed = 0;
};

/// Reads a scenario config. Required keys: duration_s, seed. Optional:
/// base_speed_mps, noise_stdev, vehicle_id, segments ("start:end:speed, ..."),
/// attack.windows (empty value disables the attack), attack.mode,
/// attack.magnitude.
Scenario scenario_from_config(const Config& config);

/// Clean stream from derive_seed(seed, "sim.noise"), then the attack with
/// derive_seed(seed, "sim.attack").
std::vector<BsmRecord> run_scenario(const Scenario& scenario);

}  // namespace bsmguard::sim

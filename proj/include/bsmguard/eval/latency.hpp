#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bsmguard/bsm.hpp"
#include "bsmguard/sim/scenario.hpp"

namespace bsmguard::eval {

/// Maximal runs of attack-labelled samples, as [first t, last t + period).
std::vector<sim::AttackWindow> attack_windows_from_labels(std::span<const double> times,
                                                          std::span<const Label> truth, double period);

struct LatencyStats {
  std::vector<std::optional<double>> delay;  // per window; nullopt when undetected
  std::size_t detected = 0;
  std::size_t undetected = 0;
  double mean = 0.0;  // over detected windows only; 0 when none
  double max = 0.0;
};

/// For every window, the first flagged sample time inside it minus the window
/// start. Windows without a flag count as undetected.
LatencyStats detection_latency(std::span<const double> times, const std::vector<bool>& flags,
                               std::span<const sim::AttackWindow> windows);

}  // namespace bsmguard::eval

#include "bsmguard/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bsmguard/error.hpp"

namespace bsmguard {

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw ParameterError("Rng::index: empty range");
  const auto range = static_cast<std::uint64_t>(n);
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return static_cast<std::size_t>(draw % range);
}

double Rng::normal(double mean, double stdev) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + stdev * spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return mean + stdev * radius * std::cos(angle);
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose) {
  return mix64(master ^ fnv1a64(purpose));
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose, std::uint64_t index) {
  return mix64(derive_seed(master, purpose) + mix64(index));
}

}  // namespace bsmguard

#include "bsmguard/standardize.hpp"

#include <cmath>
#include <iostream>

#include "bsmguard/error.hpp"

namespace bsmguard {

StandardizationParams fit_standardizer(std::span<const double> rows, std::size_t n_features) {
  if (n_features == 0 || rows.empty() || rows.size() % n_features != 0) {
    throw ParameterError("fit_standardizer: need a non-empty matrix");
  }
  const std::size_t n = rows.size() / n_features;
  StandardizationParams params;
  params.mean.assign(n_features, 0.0);
  params.stdev.assign(n_features, 0.0);
  params.floored.assign(n_features, false);
  for (std::size_t f = 0; f < n_features; ++f) {
    // Welford
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = rows[i * n_features + f];
      const double delta = x - mean;
      mean += delta / static_cast<double>(i + 1);
      m2 += delta * (x - mean);
    }
    double stdev = std::sqrt(m2 / static_cast<double>(n));
    if (!(stdev >= kStdevFloor)) {
      stdev = kStdevFloor;
      params.floored[f] = true;
      std::cerr << "warning: feature " << f << " has zero variance; stdev floored to "
                << kStdevFloor << '\n';
    }
    params.mean[f] = mean;
    params.stdev[f] = stdev;
  }
  return params;
}

StandardizationParams fit_standardizer(std::span<const AggregatedSample> samples) {
  std::vector<double> rows;
  rows.reserve(samples.size() * 2);
  for (const auto& s : samples) {
    rows.push_back(s.avg_speed);
    rows.push_back(s.avg_accel);
  }
  return fit_standardizer(rows, 2);
}

std::vector<double> apply_standardizer(const StandardizationParams& params, std::span<const double> x) {
  if (x.size() != params.features()) throw ParameterError("apply_standardizer: feature count mismatch");
  std::vector<double> out(x.size());
  for (std::size_t f = 0; f < x.size(); ++f) out[f] = (x[f] - params.mean[f]) / params.stdev[f];
  return out;
}

void standardize_rows(const StandardizationParams& params, std::span<double> rows) {
  const std::size_t d = params.features();
  if (d == 0 || rows.size() % d != 0) throw ParameterError("standardize_rows: shape mismatch");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t f = i % d;
    rows[i] = (rows[i] - params.mean[f]) / params.stdev[f];
  }
}

}  // namespace bsmguard

#include "bsmguard/detectors/student_t.hpp"

#include <cmath>
#include <numbers>

#include "bsmguard/error.hpp"

namespace bsmguard::detectors {

double student_t_logpdf(double y, double df, double mean, double scale) {
  if (!(df > 0.0) || !std::isfinite(df)) throw ParameterError("student_t_logpdf: df must be positive");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ParameterError("student_t_logpdf: scale must be positive");
  }
  const double z = (y - mean) / scale;
  return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
         0.5 * std::log(df * std::numbers::pi) - std::log(scale) -
         0.5 * (df + 1.0) * std::log1p(z * z / df);
}

}  // namespace bsmguard::detectors

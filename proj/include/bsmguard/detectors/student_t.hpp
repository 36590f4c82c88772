#pragma once

namespace bsmguard::detectors {

/// Log-density of the location-scale Student-t distribution.
/// Throws ParameterError unless df > 0 and scale > 0 (both finite).
double student_t_logpdf(double y, double df, double mean, double scale);

}  // namespace bsmguard::detectors

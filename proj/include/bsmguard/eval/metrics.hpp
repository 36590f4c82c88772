#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bsmguard/bsm.hpp"

namespace bsmguard::eval {

/// 2x2 table with attack as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

/// Throws InputError on a length mismatch or empty input.
ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted);

/// A ratio whose denominator may be zero. In that case value is 0 and
/// `undefined` is set.
struct Rate {
  double value = 0.0;
  bool undefined = false;
};

Rate ratio(std::size_t num, std::size_t den);

struct ClassificationMetrics {
  double accuracy = 0.0;
  Rate precision_attack;     // TP / (TP + FP)
  Rate precision_no_attack;  // TN / (TN + FN)
  Rate detection_attack;     // TP / (TP + FN)
  Rate detection_no_attack;  // TN / (TN + FP)
  double macro_precision = 0.0;
  double macro_detection = 0.0;
};

ClassificationMetrics metrics(const ConfusionMatrix& cm);

/// Rank-based area under the ROC curve: P(s_pos > s_neg) + P(s_pos == s_neg) / 2,
/// computed from mid-ranks. Throws InputError unless both classes are present.
double auroc(std::span<const double> scores, std::span<const Label> truth);

struct RocPoint {
  double threshold = 0.0;  // predict attack when score >= threshold
  double fpr = 0.0;
  double tpr = 0.0;
};

/// One point per distinct score (descending), preceded by (inf, 0, 0).
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const Label> truth);

/// Trapezoidal area under a ROC curve.
double roc_area(std::span<const RocPoint> curve);

}  // namespace bsmguard::eval

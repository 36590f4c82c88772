#include "bsmguard/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bsmguard/error.hpp"

namespace bsmguard::eval {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw InputError("label and prediction lengths differ");
  if (a == 0) throw InputError("no samples to evaluate");
}

std::size_t positives(std::span<const Label> truth) {
  return static_cast<std::size_t>(std::count(truth.begin(), truth.end(), Label::attack));
}

}  // namespace

ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted) {
  check_lengths(truth.size(), predicted.size());
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = is_attack(truth[i]);
    const bool p = is_attack(predicted[i]);
    if (t && p) {
      ++cm.tp;
    } else if (t) {
      ++cm.fn;
    } else if (p) {
      ++cm.fp;
    } else {
      ++cm.tn;
    }
  }
  return cm;
}

Rate ratio(std::size_t num, std::size_t den) {
  if (den == 0) return Rate{0.0, true};
  return Rate{static_cast<double>(num) / static_cast<double>(den), false};
}

ClassificationMetrics metrics(const ConfusionMatrix& cm) {
  ClassificationMetrics m;
  m.accuracy = ratio(cm.tp + cm.tn, cm.total()).value;
  m.precision_attack = ratio(cm.tp, cm.tp + cm.fp);
  m.precision_no_attack = ratio(cm.tn, cm.tn + cm.fn);
  m.detection_attack = ratio(cm.tp, cm.tp + cm.fn);
  m.detection_no_attack = ratio(cm.tn, cm.tn + cm.fp);
  m.macro_precision = (m.precision_attack.value + m.precision_no_attack.value) / 2.0;
  m.macro_detection = (m.detection_attack.value + m.detection_no_attack.value) / 2.0;
  return m;
}

double auroc(std::span<const double> scores, std::span<const Label> truth) {
  check_lengths(scores.size(), truth.size());
  const std::size_t n_pos = positives(truth);
  const std::size_t n_neg = truth.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw InputError("AUROC needs both classes present");
  for (double s : scores) {
    if (std::isnan(s)) throw InputError("AUROC: NaN score");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of the mid-ranks (1-based) of the positives.
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::size_t pos_in_group = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      pos_in_group += is_attack(truth[order[j]]);
      ++j;
    }
    const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    rank_sum += mid_rank * static_cast<double>(pos_in_group);
    i = j;
  }
  const auto p = static_cast<double>(n_pos);
  const auto q = static_cast<double>(n_neg);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const Label> truth) {
  check_lengths(scores.size(), truth.size());
  const std::size_t n_pos = positives(truth);
  const std::size_t n_neg = truth.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw InputError("ROC curve needs both classes present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<RocPoint> curve{{std::numeric_limits<double>::infinity(), 0.0, 0.0}};
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (is_attack(truth[order[i]]) ? tp : fp) += 1;
      ++i;
    }
    curve.push_back({s, static_cast<double>(fp) / static_cast<double>(n_neg),
                     static_cast<double>(tp) / static_cast<double>(n_pos)});
  }
  return curve;
}

double roc_area(std::span<const RocPoint> curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
  }
  return area;
}

}  // namespace bsmguard::eval

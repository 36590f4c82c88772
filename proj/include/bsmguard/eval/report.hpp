#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bsmguard/bsm.hpp"
#include "bsmguard/eval/latency.hpp"
#include "bsmguard/eval/metrics.hpp"
#include "bsmguard/eval/timing.hpp"

namespace bsmguard::eval {

inline constexpr const char* kReportFormat = "bsmguard-report";
inline constexpr int kReportFormatVersion = 1;

/// One evaluated sample. `score` is oriented so that larger means "more
/// likely an attack".
struct ScoredSample {
  double t = 0.0;
  Label truth = Label::no_attack;
  bool attack = false;
  double score = 0.0;
  bool warmed_up = true;
};

/// Consecutive samples of one stream (one vehicle).
struct ScoredSeries {
  std::string vehicle_id;
  std::vector<ScoredSample> samples;
};

struct EvalReport {
  std::string kind;        // "detector" or "model"
  std::string subject;     // detector name or model family
  std::string parameters;  // human-readable settings
  std::size_t samples = 0;
  std::size_t excluded_warmup = 0;
  ConfusionMatrix confusion;
  ClassificationMetrics metrics;
  std::optional<double> auroc;          // absent when only one class was evaluated
  std::optional<LatencyStats> latency;  // absent for shuffled (non-stream) test sets
  std::optional<TimingStats> timing;
  std::vector<RocPoint> roc;            // empty when auroc is absent
};

struct EvaluateOptions {
  bool exclude_warmup = false;
  bool latency = true;     // windows are recovered from the truth labels per series
  double period = kBsmPeriod;
};

/// Confusion, metrics, AUROC/ROC and latency for scored streams.
EvalReport evaluate_series(std::string kind, std::string subject, std::string parameters,
                           std::span<const ScoredSeries> series, const EvaluateOptions& options);

/// Versioned JSON document holding one or more reports.
void write_report(std::ostream& out, std::span<const EvalReport> reports);

/// "subject,threshold,fpr,tpr" rows for every report with a ROC curve.
void write_roc_csv(std::ostream& out, std::span<const EvalReport> reports);

}  // namespace bsmguard::eval

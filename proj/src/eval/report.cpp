#include "bsmguard/eval/report.hpp"

#include <algorithm>
#include <ostream>

#include "bsmguard/csv.hpp"
#include "bsmguard/error.hpp"
#include "json.hpp"

namespace bsmguard::eval {

using nlohmann::ordered_json;

EvalReport evaluate_series(std::string kind, std::string subject, std::string parameters,
                           std::span<const ScoredSeries> series, const EvaluateOptions& options) {
  EvalReport r;
  r.kind = std::move(kind);
  r.subject = std::move(subject);
  r.parameters = std::move(parameters);

  std::vector<Label> truth;
  std::vector<Label> predicted;
  std::vector<double> scores;
  LatencyStats latency;
  double latency_sum = 0.0;
  for (const auto& s : series) {
    std::vector<double> times;
    std::vector<Label> labels;
    std::vector<bool> flags;
    for (const auto& x : s.samples) {
      times.push_back(x.t);
      labels.push_back(x.truth);
      flags.push_back(x.attack);
      if (options.exclude_warmup && !x.warmed_up) {
        ++r.excluded_warmup;
        continue;
      }
      truth.push_back(x.truth);
      predicted.push_back(x.attack ? Label::attack : Label::no_attack);
      scores.push_back(x.score);
    }
    if (options.latency) {
      const auto windows = attack_windows_from_labels(times, labels, options.period);
      const auto part = detection_latency(times, flags, windows);
      for (const auto& d : part.delay) {
        latency.delay.push_back(d);
        if (d) {
          ++latency.detected;
          latency_sum += *d;
          latency.max = std::max(latency.max, *d);
        } else {
          ++latency.undetected;
        }
      }
    }
  }
  if (truth.empty()) throw InputError("no samples left to evaluate");
  r.samples = truth.size();
  r.confusion = confusion(truth, predicted);
  r.metrics = metrics(r.confusion);
  const auto attacks = r.confusion.tp + r.confusion.fn;
  if (attacks > 0 && attacks < r.samples) {
    r.auroc = auroc(scores, truth);
    r.roc = roc_curve(scores, truth);
  }
  if (options.latency) {
    if (latency.detected > 0) latency.mean = latency_sum / static_cast<double>(latency.detected);
    r.latency = std::move(latency);
  }
  return r;
}

namespace {

ordered_json rate_json(const Rate& r) { return {{"value", r.value}, {"undefined", r.undefined}}; }

ordered_json report_json(const EvalReport& r) {
  ordered_json j;
  j["kind"] = r.kind;
  j["subject"] = r.subject;
  j["parameters"] = r.parameters;
  j["samples"] = r.samples;
  j["excluded_warmup"] = r.excluded_warmup;
  j["confusion"] = {{"tp", r.confusion.tp}, {"tn", r.confusion.tn}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}};
  j["accuracy"] = r.metrics.accuracy;
  j["precision"] = {{"attack", rate_json(r.metrics.precision_attack)},
                    {"no_attack", rate_json(r.metrics.precision_no_attack)},
                    {"macro", r.metrics.macro_precision}};
  j["detection"] = {{"attack", rate_json(r.metrics.detection_attack)},
                    {"no_attack", rate_json(r.metrics.detection_no_attack)},
                    {"macro", r.metrics.macro_detection}};
  j["auroc"] = r.auroc ? ordered_json(*r.auroc) : ordered_json(nullptr);
  if (r.latency) {
    ordered_json per_window = ordered_json::array();
    for (const auto& d : r.latency->delay) per_window.push_back(d ? ordered_json(*d) : ordered_json(nullptr));
    j["latency_s"] = {{"windows", r.latency->delay.size()},
                      {"detected", r.latency->detected},
                      {"undetected", r.latency->undetected},
                      {"mean", r.latency->mean},
                      {"max", r.latency->max},
                      {"per_window", per_window}};
  } else {
    j["latency_s"] = nullptr;
  }
  if (r.timing) {
    j["timing_ms"] = {{"samples", r.timing->samples},
                      {"mean", r.timing->mean_ms},
                      {"median", r.timing->median_ms},
                      {"p99", r.timing->p99_ms}};
  } else {
    j["timing_ms"] = nullptr;
  }
  return j;
}

}  // namespace

void write_report(std::ostream& out, std::span<const EvalReport> reports) {
  ordered_json doc;
  doc["format"] = kReportFormat;
  doc["version"] = kReportFormatVersion;
  doc["results"] = ordered_json::array();
  for (const auto& r : reports) doc["results"].push_back(report_json(r));
  out << doc.dump(2) << '\n';
  if (!out) throw Error("failed writing report");
}

void write_roc_csv(std::ostream& out, std::span<const EvalReport> reports) {
  out << "subject,threshold,fpr,tpr\n";
  for (const auto& r : reports) {
    for (const auto& p : r.roc) {
      out << r.subject << ',' << format_double(p.threshold) << ',' << format_double(p.fpr) << ','
          << format_double(p.tpr) << '\n';
    }
  }
  if (!out) throw Error("failed writing ROC CSV");
}

}  // namespace bsmguard::eval

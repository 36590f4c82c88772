// bsmguard: simulate BSM streams, run change-point detectors, train and
// evaluate the supervised baselines.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bsmguard/app/experiment.hpp"
#include "bsmguard/csv.hpp"
#include "bsmguard/detectors/factory.hpp"
#include "bsmguard/error.hpp"
#include "bsmguard/sim/scenario.hpp"

namespace {

using namespace bsmguard;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out = "-";
  std::string data;
  std::string detector;
  std::string model;
  std::string roc;
  std::string report;
  bool exclude_warmup = false;
  bool timing = false;
};

Config load_config(const Options& o) {
  Config config = o.config_path.empty() ? Config::parse_string("", "<empty>") : Config::load(o.config_path);
  if (o.seed) config.set("seed", std::to_string(*o.seed));
  return config;
}

std::uint64_t master_seed(const Config& config) { return config.get_u64("seed", 0); }

// "-" means standard output.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw ConfigError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw Error("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<VehicleSeries> load_series(const std::string& path, double window) {
  if (path.empty()) throw ConfigError("--data is required");
  return aggregate(read_bsm_csv_file(path), window);
}

void check_detector(const std::string& name) {
  const auto& names = detectors::detector_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ConfigError("unknown detector '" + name + "' (expected bocpd, em or cusum)");
  }
}

int cmd_simulate(const Options& o) {
  if (o.config_path.empty()) throw ConfigError("simulate needs --config");
  const auto scenario = sim::scenario_from_config(load_config(o));
  const auto records = sim::run_scenario(scenario);
  Output out(o.out);
  write_bsm_csv(out.stream(), records);
  out.finish();
  return kExitOk;
}

int cmd_detect(const Options& o) {
  check_detector(o.detector);
  const Config config = load_config(o);
  if (o.data.empty()) throw ConfigError("--data is required");
  std::ifstream in(o.data, std::ios::binary);
  if (!in) throw DataError("cannot open '" + o.data + "'");
  Output out(o.out);
  app::detect_stream(in, out.stream(), o.detector, config, master_seed(config));
  out.finish();
  return kExitOk;
}

int cmd_train(const Options& o) {
  const Config config = load_config(o);
  const auto options = app::train_options_from(config, master_seed(config));
  const auto series = load_series(o.data, options.window);
  const auto outcome = app::train_and_evaluate(config, series, options);
  if (o.out == "-") throw ConfigError("train needs --out for the model file");
  ml::save_model(o.out, outcome.file);
  if (!o.report.empty()) {
    Output report(o.report);
    eval::write_report(report.stream(), std::span(&outcome.report, 1));
    report.finish();
  }
  std::cerr << "selected " << ml::describe(outcome.file.model.spec) << " (cv accuracy "
            << format_double(outcome.file.training.cv_accuracy) << ", test accuracy "
            << format_double(outcome.report.metrics.accuracy) << ")\n";
  return kExitOk;
}

void write_outputs(const Options& o, const std::vector<eval::EvalReport>& reports) {
  Output out(o.out);
  eval::write_report(out.stream(), reports);
  out.finish();
  if (!o.roc.empty()) {
    Output roc(o.roc);
    eval::write_roc_csv(roc.stream(), reports);
    roc.finish();
  }
}

int cmd_evaluate(const Options& o) {
  if (o.model.empty() == o.detector.empty()) throw ConfigError("evaluate needs exactly one of --model or --detector");
  const Config config = load_config(o);
  std::vector<eval::EvalReport> reports;
  if (!o.model.empty()) {
    const auto file = ml::load_model(o.model);
    const auto series = load_series(o.data, file.training.window);
    reports.push_back(app::evaluate_model(file, series));
  } else {
    check_detector(o.detector);
    const auto series = load_series(o.data, app::aggregation_window(config));
    eval::EvaluateOptions options;
    options.exclude_warmup = o.exclude_warmup;
    options.period = app::aggregation_window(config);
    reports.push_back(
        app::evaluate_detector(o.detector, config, series, master_seed(config), options, o.timing));
  }
  write_outputs(o, reports);
  return kExitOk;
}

int cmd_report(const Options& o) {
  const Config config = load_config(o);
  const double window = app::aggregation_window(config);
  const auto series = load_series(o.data, window);
  eval::EvaluateOptions options;
  options.exclude_warmup = o.exclude_warmup;
  options.period = window;
  std::vector<eval::EvalReport> reports;
  for (const auto& name : detectors::detector_names()) {
    reports.push_back(app::evaluate_detector(name, config, series, master_seed(config), options, o.timing));
  }
  write_outputs(o, reports);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detection of false speed information in connected-vehicle safety messages"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "master seed (overrides the config key 'seed')");
    cmd->add_option("--out", o.out, "output file, '-' for stdout");
  };

  auto* simulate = app.add_subcommand("simulate", "generate a labelled BSM CSV stream from a scenario config");
  add_common(simulate);

  auto* detect = app.add_subcommand("detect", "run a change-point detector over a BSM CSV stream");
  add_common(detect);
  detect->add_option("--data", o.data, "BSM CSV input")->required();
  detect->add_option("--detector", o.detector, "bocpd, em or cusum")->required();

  auto* train = app.add_subcommand("train", "grid-search, fit and persist a supervised model");
  add_common(train);
  train->add_option("--data", o.data, "labelled BSM CSV input")->required();
  train->add_option("--report", o.report, "also write the held-out evaluation report here");

  auto* evaluate = app.add_subcommand("evaluate", "evaluate a persisted model or a detector");
  add_common(evaluate);
  evaluate->add_option("--data", o.data, "labelled BSM CSV input")->required();
  evaluate->add_option("--model", o.model, "model file written by 'train'");
  evaluate->add_option("--detector", o.detector, "bocpd, em or cusum");
  evaluate->add_flag("--exclude-warmup", o.exclude_warmup, "leave warm-up samples out of the metrics");
  evaluate->add_flag("--timing", o.timing, "add per-sample inference timing (not reproducible)");
  evaluate->add_option("--roc", o.roc, "write ROC points as CSV");

  auto* report = app.add_subcommand("report", "evaluate all detectors on one stream");
  add_common(report);
  report->add_option("--data", o.data, "labelled BSM CSV input")->required();
  report->add_flag("--exclude-warmup", o.exclude_warmup, "leave warm-up samples out of the metrics");
  report->add_flag("--timing", o.timing, "add per-sample inference timing (not reproducible)");
  report->add_option("--roc", o.roc, "write ROC points as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(o);
    if (*detect) return cmd_detect(o);
    if (*train) return cmd_train(o);
    if (*evaluate) return cmd_evaluate(o);
    if (*report) return cmd_report(o);
  } catch (const ConfigError& e) {
    std::cerr << "bsmguard: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParameterError& e) {
    std::cerr << "bsmguard: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "bsmguard: " << e.what() << '\n';
    return kExitData;
  } catch (const InputError& e) {
    std::cerr << "bsmguard: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "bsmguard: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

#include <gtest/gtest.h>

#include <fstream>
#include <vector>

#include "bsmguard/detectors/cusum.hpp"
#include "bsmguard/error.hpp"
#include "bsmguard/eval/timing.hpp"
#include "bsmguard/rng.hpp"
#include "json.hpp"

using namespace bsmguard;
using namespace bsmguard::detectors;

namespace {

nlohmann::json fixture() {
  std::ifstream in(std::string(BSMGUARD_FIXTURE_DIR) + "/mc_oracle.json");
  return nlohmann::json::parse(in);
}

}  // namespace

TEST(Cusum, DefaultsFollowTheChartDefinition) {
  const CusumConfig c;
  EXPECT_EQ(c.delta, 1.0);
  EXPECT_EQ(c.alpha, 0.025);
  EXPECT_EQ(c.h_sigma, 5.0);
}

TEST(Cusum, ConstantStreamStaysAtZero) {
  CusumDetector d;
  for (int i = 0; i < 10000; ++i) {
    const auto dec = d.observe(15.6);
    ASSERT_FALSE(dec.attack);
    ASSERT_EQ(d.state().c_plus, 0.0);
    ASSERT_EQ(d.state().c_minus, 0.0);
  }
  EXPECT_EQ(d.state().ewma, 15.6);
  EXPECT_EQ(d.state().sigma, 1e-8);
}

TEST(Cusum, WarmupEstimatesTargetAndScale) {
  CusumConfig cfg;
  cfg.warmup = 4;
  CusumDetector d(cfg);
  for (double y : {1.0, 2.0, 3.0, 4.0}) EXPECT_FALSE(d.observe(y).warmed_up);
  EXPECT_DOUBLE_EQ(d.state().target, 2.5);
  EXPECT_DOUBLE_EQ(d.state().sigma, std::sqrt(5.0 / 3.0));
  EXPECT_DOUBLE_EQ(d.state().h, 5.0 * std::sqrt(5.0 / 3.0));
}

TEST(Cusum, StepIsDetectedWithinMonteCarloBound) {
  const auto f = fixture().at("cusum_step");
  const int before = f.at("before").get<int>();
  const int after = f.at("after").get<int>();
  int worst = -1;
  int undetected = 0;
  for (int s = 0; s < 100; ++s) {
    Rng rng(derive_seed(f.at("master_seed").get<std::uint64_t>(), f.at("seed_purpose").get<std::string>(),
                        static_cast<std::uint64_t>(s)));
    CusumDetector d;
    for (int i = 0; i < before; ++i) d.observe(rng.normal());
    int delay = -1;
    for (int i = 0; i < after && delay < 0; ++i) {
      if (d.observe(rng.normal() + f.at("shift_sigma").get<double>()).attack) delay = i;
    }
    if (delay < 0) ++undetected;
    worst = std::max(worst, delay);
  }
  EXPECT_EQ(undetected, 0);
  EXPECT_LE(worst, f.at("max_delay").get<int>());
}

TEST(Cusum, StatisticsNonNegativeAndResetAfterAlarm) {
  Rng rng(77);
  CusumDetector d;
  int alarms = 0;
  for (int i = 0; i < 5000; ++i) {
    const double y = (i / 250) % 2 ? rng.normal(4.0, 1.0) : rng.normal(0.0, 1.0);
    const auto dec = d.observe(y);
    ASSERT_GE(d.state().c_plus, 0.0);
    ASSERT_GE(d.state().c_minus, 0.0);
    if (dec.attack) {
      ++alarms;
      ASSERT_EQ(d.state().c_plus, 0.0);
      ASSERT_EQ(d.state().c_minus, 0.0);
      ASSERT_GT(dec.score, d.state().h);
    }
  }
  EXPECT_GT(alarms, 0);
}

TEST(Cusum, DecisionsAreScaleEquivariant) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(derive_seed(s, "cusum.scale"));
    std::vector<double> stream;
    for (int i = 0; i < 600; ++i) stream.push_back(rng.normal(i > 300 ? 3.0 : 0.0, 1.0) + 10.0);
    for (double c : {0.25, 4.0, 1024.0}) {
      CusumDetector a, b;
      for (double y : stream) {
        ASSERT_EQ(a.observe(y).attack, b.observe(c * y).attack) << "seed " << s << " scale " << c;
      }
    }
  }
}

TEST(Cusum, TabularRuleMatchesHandComputation) {
  CusumConfig cfg;
  cfg.rule = CusumRule::tabular;
  cfg.warmup = 2;
  cfg.h_sigma = 2.0;
  CusumDetector d(cfg);
  d.observe(-1.0);
  d.observe(1.0);  // target 0, sigma sqrt(2), K = sqrt(2)/2, H = 2 sqrt(2)
  const double k = std::sqrt(2.0) / 2.0;
  d.observe(2.0);
  EXPECT_DOUBLE_EQ(d.state().c_plus, 2.0 - k);
  EXPECT_EQ(d.state().c_minus, 0.0);
  const auto dec = d.observe(2.0);  // 4 - 2K = 2.586 < 2.828
  EXPECT_FALSE(dec.attack);
  EXPECT_TRUE(d.observe(2.0).attack);
  EXPECT_EQ(d.state().c_plus, 0.0);
}

TEST(Cusum, RejectsInvalidInput) {
  CusumDetector d;
  EXPECT_THROW(d.observe(INFINITY), InputError);
  EXPECT_EQ(d.state().observations, 0u);
  CusumConfig cfg;
  cfg.warmup = 1;
  EXPECT_THROW(CusumDetector{cfg}, ParameterError);
  cfg = CusumConfig{};
  cfg.h_sigma = 0.0;
  EXPECT_THROW(CusumDetector{cfg}, ParameterError);
}

TEST(Cusum, PerSampleCostDoesNotGrowWithStreamLength) {
  auto run = [](std::size_t n) {
    Rng rng(1);
    std::vector<double> ys(n);
    for (auto& y : ys) y = rng.normal();
    CusumDetector d;
    std::size_t alarms = 0;
    const auto t = eval::time_inference([&](std::size_t i) { alarms += d.observe(ys[i]).attack; }, n);
    return t.mean_ms;
  };
  run(20000);  // touch code and caches
  const double short_run = run(20000);
  const double long_run = run(40000);
  EXPECT_LT(long_run, 3.0 * short_run + 1e-4);
}

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <hetcomp/config_io.hpp>
#include <hetcomp/evaluate.hpp>
#include <hetcomp_cli/cli.hpp>
#include <json.hpp>

#include "testkit.hpp"

using namespace hetcomp;
using namespace hetcomp::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hetcomp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const ExperimentConfig& cfg, const std::string& name = "cfg.json") {
    const auto p = dir_ / name;
    std::ofstream(p) << to_json(cfg, 2);
    return p;
  }

  ExperimentConfig small() {
    auto cfg = reference_hetnet();
    cfg.network.truncation_points_per_tier = 60;
    cfg.sweep.delay_means = {0.0, 0.04};
    cfg.sweep.l_values = {0, 1, 2};
    cfg.sweep.beta_db = {-5.0, 0.0, 5.0};
    cfg.sweep.renewal_blocks = 2000;
    return cfg;
  }

  RunManifest manifest(Experiment e, const fs::path& config, const std::string& out) {
    RunManifest m;
    m.experiment = e;
    m.config_path = config;
    m.trials = 300;
    m.seed = 5;
    m.output_dir = dir_ / out;
    return m;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ExperimentNames) {
  for (auto e : {Experiment::DelaySweep, Experiment::LSweep, Experiment::IntraTierLoss,
                 Experiment::BoundsValidation, Experiment::TimeFractionReport}) {
    EXPECT_EQ(parse_experiment(experiment_name(e)), e);
  }
  EXPECT_FALSE(parse_experiment("delaysweep").has_value());
}

TEST_F(CliTest, DelaySweepSchema) {
  const auto cfg = small();
  const auto result = run(manifest(Experiment::DelaySweep, write_config(cfg), "out"));
  ASSERT_EQ(result.exit_code, kOk) << result.message;
  ASSERT_EQ(result.files.size(), 3u);
  for (const char* metric : {"coverage", "throughput"}) {
    const auto text = slurp(dir_ / "out" / (std::string("delay_sweep_") + metric + ".csv"));
    const auto ls = lines(text);
    ASSERT_EQ(ls.size(), 4u);
    EXPECT_EQ(ls[0], "# config_digest: " + config_digest(cfg));
    EXPECT_EQ(ls[1], "mean_delay_ms,metric,value,std_error,baseline_value,baseline_std_error,trials,seed");
    EXPECT_EQ(ls[2].rfind("0,", 0), 0u);
    EXPECT_NE(ls[2].find(std::string(",") + metric + ","), std::string::npos);
    EXPECT_NE(ls[3].find(",300,5"), std::string::npos);
  }
  const auto man = nlohmann::json::parse(slurp(dir_ / "out" / "manifest.json"));
  EXPECT_EQ(man["config_digest"], config_digest(cfg));
  EXPECT_EQ(man["seed"], 5);
  EXPECT_EQ(man["trials"], 300);
  EXPECT_EQ(man["experiment"], "DelaySweep");
  EXPECT_EQ(parse_config(man["config"].dump()), cfg);
  EXPECT_FALSE(man["artifact_version"].get<std::string>().empty());
}

TEST_F(CliTest, NumbersRoundTrip) {
  const auto cfg = small();
  ASSERT_EQ(run(manifest(Experiment::LSweep, write_config(cfg), "out")).exit_code, kOk);
  const auto ls = lines(slurp(dir_ / "out" / "l_sweep_throughput.csv"));
  EXPECT_EQ(ls[1], "num_coordinated,mean_delay_ms,metric,value,std_error,trials,seed");
  ASSERT_EQ(ls.size(), 5u);
  const std::array<RateMapping, 1> map{cfg.throughput};
  const std::array<int, 3> l{0, 1, 2};
  const auto table = l_sweep(cfg, map, l, 300, 5)[0];
  for (std::size_t i = 0; i < 3; ++i) {
    std::istringstream row(ls[2 + i]);
    std::vector<std::string> f;
    for (std::string c; std::getline(row, c, ',');) f.push_back(c);
    ASSERT_EQ(f.size(), 7u);
    EXPECT_EQ(std::stod(f[3]), table.rows[i].comp.mean);
    EXPECT_EQ(std::stod(f[4]), table.rows[i].comp.std_error);
  }
}

TEST_F(CliTest, BoundsSchemaAndFaultColumn) {
  auto cfg = testkit::one_tier(8, 4.0, 1e-5, 1, 21.0);
  cfg.network.truncation_points_per_tier = 60;
  cfg.sweep.beta_db = {0.0, 10.0};
  ASSERT_EQ(run(manifest(Experiment::BoundsValidation, write_config(cfg), "out")).exit_code, kOk);
  const auto ls = lines(slurp(dir_ / "out" / "bounds_validation.csv"));
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[1],
            "beta,empirical_cdf,empirical_se,upper_bound,lower_bound_or_fault,dominance_lhs,dominance_rhs");
  EXPECT_NE(ls[2].find("fault:"), std::string::npos);
  EXPECT_EQ(ls[2].find("NA"), std::string::npos);

  const auto k = small();
  ASSERT_EQ(run(manifest(Experiment::BoundsValidation, write_config(k, "k.json"), "k")).exit_code, kOk);
  const auto kl = lines(slurp(dir_ / "k" / "bounds_validation.csv"));
  EXPECT_NE(kl[2].find(",NA,NA"), std::string::npos);
}

TEST_F(CliTest, OtherExperimentsEmitTheirFiles) {
  const auto cfg = small();
  const auto path = write_config(cfg);
  for (auto e : {Experiment::IntraTierLoss, Experiment::TimeFractionReport}) {
    const auto out = std::string(experiment_name(e));
    const auto result = run(manifest(e, path, out));
    ASSERT_EQ(result.exit_code, kOk) << result.message;
    for (const auto& f : output_files(e)) EXPECT_TRUE(fs::exists(dir_ / out / f)) << f;
  }
  const auto tf = lines(slurp(dir_ / "TimeFractionReport" / "time_fractions.csv"));
  EXPECT_EQ(tf.size(), 2u + cfg.network.tiers.size());
  const auto loss = lines(slurp(dir_ / "IntraTierLoss" / "intratier_loss_coverage.csv"));
  // Two delay points plus L in {1, 2}.
  EXPECT_EQ(loss.size(), 2u + 4u);
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  const auto path = write_config(small());
  auto a = manifest(Experiment::DelaySweep, path, "a");
  auto b = manifest(Experiment::DelaySweep, path, "b");
  ASSERT_EQ(run(a).exit_code, kOk);
  ASSERT_EQ(run(b).exit_code, kOk);
  for (const auto& f : {"delay_sweep_coverage.csv", "delay_sweep_throughput.csv"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f));
  }
  b.seed = 6;
  b.force = true;
  ASSERT_EQ(run(b).exit_code, kOk);
  EXPECT_NE(slurp(dir_ / "a" / "delay_sweep_throughput.csv"),
            slurp(dir_ / "b" / "delay_sweep_throughput.csv"));
}

TEST_F(CliTest, RefusesToOverwrite) {
  const auto path = write_config(small());
  auto m = manifest(Experiment::TimeFractionReport, path, "out");
  ASSERT_EQ(run(m).exit_code, kOk);
  const auto before = slurp(dir_ / "out" / "time_fractions.csv");
  std::ofstream(dir_ / "out" / "time_fractions.csv") << "sentinel";
  const auto refused = run(m);
  EXPECT_EQ(refused.exit_code, kRuntime);
  EXPECT_NE(refused.message.find("--force"), std::string::npos);
  EXPECT_EQ(slurp(dir_ / "out" / "time_fractions.csv"), "sentinel");
  m.force = true;
  ASSERT_EQ(run(m).exit_code, kOk);
  EXPECT_EQ(slurp(dir_ / "out" / "time_fractions.csv"), before);
}

TEST_F(CliTest, ExitCodes) {
  auto bad = small();
  bad.network.num_coordinated = 9;
  EXPECT_EQ(run(manifest(Experiment::DelaySweep, write_config(bad), "x")).exit_code, kValidation);
  EXPECT_FALSE(fs::exists(dir_ / "x"));

  std::ofstream(dir_ / "broken.json") << "{\"network\": ";
  EXPECT_EQ(run(manifest(Experiment::DelaySweep, dir_ / "broken.json", "x")).exit_code, kValidation);
  EXPECT_EQ(run(manifest(Experiment::DelaySweep, dir_ / "missing.json", "x")).exit_code, kValidation);

  auto starved = small();
  starved.network.truncation_points_per_tier = 2;
  starved.network.policy = CoordinationPolicy::IntraTier;
  starved.sweep.l_values = {0, 3};
  EXPECT_EQ(run(manifest(Experiment::LSweep, write_config(starved), "y")).exit_code, kRuntime);

  auto zero = manifest(Experiment::DelaySweep, write_config(small()), "z");
  zero.trials = 0;
  EXPECT_EQ(run(zero).exit_code, kValidation);
}

#ifdef HETCOMP_CONFIG_DIR
TEST_F(CliTest, ShippedConfigsValidate) {
  for (const auto& entry : fs::directory_iterator(HETCOMP_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const auto cfg = load_config(entry.path());
    EXPECT_TRUE(validate(cfg).empty()) << entry.path();
  }
  EXPECT_EQ(load_config(fs::path(HETCOMP_CONFIG_DIR) / "table1.json"), reference_hetnet());
}
#endif

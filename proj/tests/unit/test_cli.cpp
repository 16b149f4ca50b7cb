#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "tgnn/cli/commands.hpp"
#include "tgnn/data/dataset.hpp"
#include "tgnn/nn/model.hpp"
#include "tgnn/train/report.hpp"

namespace tgnn::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "tgnn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tgnn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    data_ = (dir_ / "data.json").string();
    const Result r = run({"generate", "diffusion", "--nodes", "12", "--k", "2", "--snapshots", "10",
                          "--features", "2", "--seed", "4", "--out", data_});
    ASSERT_EQ(r.code, kOk) << r.err;
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::vector<std::string> small_train(std::vector<std::string> extra = {}) const {
    std::vector<std::string> args{"train", "--dataset", data_, "--model", "gconv-gru", "--filters", "4",
                                  "--epochs", "3", "--regime", "cumulative", "--seed", "1"};
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  }

  fs::path dir_;
  std::string data_;
};

TEST_F(Cli, TrainEndsWithFourDecimalMse) {
  const Result r = run(small_train());
  ASSERT_EQ(r.code, kOk) << r.err;
  std::smatch m;
  ASSERT_TRUE(std::regex_search(r.out, m, std::regex("MSE: (\\d+\\.\\d{4})\n$"))) << r.out;
  EXPECT_NE(r.out.find("optimizer steps: 3"), std::string::npos);
}

TEST_F(Cli, ReportWithoutTimingIsByteIdentical) {
  const auto a = dir_ / "a.json", b = dir_ / "b.json";
  ASSERT_EQ(run(small_train({"--no-timing", "--out", a.string()})).code, kOk);
  ASSERT_EQ(run(small_train({"--no-timing", "--out", b.string()})).code, kOk);
  EXPECT_EQ(slurp(a), slurp(b));
  const TrainReport report = report_from_string(slurp(a));
  EXPECT_EQ(report.losses.size(), 3u);
  EXPECT_EQ(report.steps, 3u);
  for (double s : report.epoch_seconds) EXPECT_EQ(s, 0.0);
}

TEST_F(Cli, ReplayReproducesMetrics) {
  const auto report = dir_ / "r.json";
  ASSERT_EQ(run(small_train({"--no-timing", "--out", report.string()})).code, kOk);
  const Result r = run({"train", "--replay", report.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("replay: metrics reproduced exactly"), std::string::npos);

  auto doc = nlohmann::json::parse(slurp(report));
  doc["test_mse"] = doc["test_mse"].get<double>() + 1.0;
  spit(report, doc.dump());
  const Result changed = run({"train", "--replay", report.string()});
  EXPECT_EQ(changed.code, kFailure);
  EXPECT_NE(changed.out.find("replay: metrics differ"), std::string::npos);
}

TEST_F(Cli, CheckpointRoundTripsAndInspects) {
  const auto ckpt = dir_ / "model.json";
  const Result r = run({"train", "--dataset", data_, "--epochs", "1", "--checkpoint", ckpt.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  const RecurrentGCN model = load_checkpoint(ckpt.string());
  EXPECT_EQ(model.config().filters, 32u);
  EXPECT_EQ(model.config().kind, ModelKind::dcrnn);

  const Result inspect = run({"inspect", ckpt.string()});
  ASSERT_EQ(inspect.code, kOk) << inspect.err;
  EXPECT_NE(inspect.out.find("filters = 32"), std::string::npos) << inspect.out;
  EXPECT_NE(inspect.out.find("model = dcrnn"), std::string::npos) << inspect.out;
}

TEST_F(Cli, InspectDescribesDatasetsAndReports) {
  Result r = run({"inspect", data_});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("snapshots (T): 10"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("nodes (|V|): 12"), std::string::npos);
  EXPECT_NE(r.out.find("features (d): 2"), std::string::npos);

  const auto report = dir_ / "r.json";
  ASSERT_EQ(run(small_train({"--out", report.string()})).code, kOk);
  r = run({"inspect", report.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("optimizer steps: 3"), std::string::npos) << r.out;
}

TEST_F(Cli, GeneratedBenchmarkSequenceIsDynamic) {
  const auto path = dir_ / "bench.json";
  ASSERT_EQ(run({"generate", "benchmark", "--nodes", "16", "--k", "4", "--features", "3", "--snapshots", "5",
                 "--out", path.string()})
                .code,
            kOk);
  const Result r = run({"inspect", path.string()});
  EXPECT_NE(r.out.find("dynamic_graph_temporal_signal"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("edges per snapshot: min 64, max 64"), std::string::npos) << r.out;
}

TEST_F(Cli, ConfigErrorsExitWithOne) {
  EXPECT_EQ(run(small_train({"--lr", "-1"})).code, kConfigError);
  EXPECT_EQ(run(small_train({"--model", "transformer"})).code, kConfigError);
  EXPECT_EQ(run(small_train({"--train-ratio", "1.5"})).code, kConfigError);
  EXPECT_EQ(run(small_train({"--lambda-max", "huge"})).code, kConfigError);
  EXPECT_EQ(run({"train", "--epochs", "2"}).code, kConfigError);
  EXPECT_EQ(run({"train", "--unknown-flag"}).code, kConfigError);
  EXPECT_EQ(run({}).code, kConfigError);
  const Result r = run(small_train({"--epochs", "0"}));
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("--epochs"), std::string::npos) << r.err;
}

TEST_F(Cli, DatasetErrorsExitWithTwo) {
  const auto broken = dir_ / "broken.json";
  const std::string text = slurp(data_);
  spit(broken, text.substr(0, text.size() / 2));
  Result r = run({"train", "--dataset", broken.string()});
  EXPECT_EQ(r.code, kDatasetError);
  EXPECT_NE(r.err.find("invalid JSON at line"), std::string::npos) << r.err;
  EXPECT_EQ(r.err.find('\n'), r.err.size() - 1) << "one-line diagnostic expected";

  r = run({"inspect", broken.string()});
  EXPECT_EQ(r.code, kDatasetError);

  EXPECT_EQ(run({"train", "--dataset", (dir_ / "missing.json").string()}).code, kDatasetError);
}

TEST_F(Cli, NumericFailureExitsWithThree) {
  auto doc = nlohmann::json::parse(slurp(data_));
  for (auto& step : doc["targets"]) {
    for (auto& v : step) v = 1e300;
  }
  const auto huge = dir_ / "huge.json";
  spit(huge, doc.dump());
  const Result r = run({"train", "--dataset", huge.string(), "--epochs", "1", "--filters", "4"});
  EXPECT_EQ(r.code, kNumericError) << r.err;
  EXPECT_NE(r.err.find("numeric failure"), std::string::npos);
}

TEST_F(Cli, HelpAndVersionExitCleanly) {
  Result r = run({"--help"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("train"), std::string::npos);
  r = run({"train", "--help"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("--lambda-max"), std::string::npos);
  r = run({"--version"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find(library_version()), std::string::npos);
}

TEST_F(Cli, BenchmarkWritesReport) {
  const auto out = dir_ / "bench.json";
  const Result r = run({"benchmark", "--nodes", "16,24", "--k", "4", "--features", "3", "--snapshots", "4",
                        "--filters", "4", "--repeats", "2", "--out", out.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("n=16 k=4 incremental"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("n=24 k=4 cumulative"), std::string::npos) << r.out;
  const auto doc = nlohmann::json::parse(slurp(out));
  EXPECT_TRUE(doc.is_object());
  EXPECT_EQ(run({"benchmark", "--repeats", "1", "--regimes", "sideways"}).code, kConfigError);
}

TEST(CliRun, DefaultKDependsOnModel) {
  TrainRun run;
  EXPECT_EQ(run.resolved_k(), 1u);
  run.model = ModelKind::gconv_gru;
  EXPECT_EQ(run.resolved_k(), 2u);
  run.k = 5;
  EXPECT_EQ(run.resolved_k(), 5u);
}

TEST(CliRun, EchoRoundTrips) {
  TrainRun run;
  run.dataset = "x.json";
  run.model = ModelKind::gconv_lstm;
  run.lr = 0.003;
  run.seed = 17;
  run.lambda_max = LambdaMax::exact();
  const TrainRun back = TrainRun::from_echo(run.echo());
  EXPECT_EQ(back.echo(), run.echo());
}

}  // namespace
}  // namespace tgnn::cli

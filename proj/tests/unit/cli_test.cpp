#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mvge/cli.hpp"
#include "mvge/embedding.hpp"
#include "mvge/io_util.hpp"
#include "test_util.hpp"

namespace mvge {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Small synthetic dataset under `dir`.
std::string make_synth(const fs::path& dir, const std::string& h = "0.5") {
  const auto r = run({"--seed", "3", "--out", dir.string(), "synth", "--n", "80", "--h", h});
  EXPECT_EQ(r.code, 0) << r.err;
  return dir.string();
}

const std::vector<std::string> kFast = {"--epochs", "3", "--hidden", "8", "--dim-ego", "4",
                                        "--dim-agg", "4"};

std::vector<std::string> with_fast(std::vector<std::string> a) {
  a.insert(a.end(), kFast.begin(), kFast.end());
  return a;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitValidation);
  EXPECT_EQ(run({"frobnicate"}).code, kExitValidation);
  EXPECT_EQ(run({"synth", "--h", "1.5", "--out", "x"}).code, kExitValidation);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
  EXPECT_EQ(run({"--version"}).code, kExitOk);
}

TEST(Cli, SynthEchoesSpecAndIsDeterministic) {
  const auto dir = testing::scratch_dir();
  make_synth(dir / "a");
  make_synth(dir / "b");
  const json meta = json::parse(read_file(dir / "a" / "meta.json"));
  EXPECT_EQ(meta["num_nodes"], 80);
  EXPECT_EQ(meta["synth"]["target_homophily"], 0.5);
  EXPECT_EQ(meta["synth"]["seed"], 3);
  for (const char* f : {"edges.tsv", "features.csv", "labels.txt", "meta.json"})
    EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "b" / f));
}

TEST(Cli, SynthRequiresOut) {
  const auto r = run({"synth"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("--out"), std::string::npos);
}

TEST(Cli, StatsReportAndMissingLabels) {
  const auto dir = testing::scratch_dir();
  const auto ds = make_synth(dir / "ds");
  const auto r = run({"--out", (dir / "st").string(), "stats", "--dataset", ds, "--per-node-csv",
                      (dir / "local.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(read_file(dir / "st" / "stats.json"));
  EXPECT_TRUE(j.contains("global"));
  EXPECT_EQ(j["histogram"].size(), 10u);
  EXPECT_TRUE(j.contains("num_undefined_local"));
  const std::string csv = read_file(dir / "local.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 81);

  fs::remove(dir / "ds" / "labels.txt");
  const auto bad = run({"stats", "--dataset", ds});
  EXPECT_EQ(bad.code, kExitValidation);
  EXPECT_NE(bad.err.find("labels.txt"), std::string::npos);
}

TEST(Cli, EmbedWritesArtifactsAndReproduces) {
  const auto dir = testing::scratch_dir();
  const auto ds = make_synth(dir / "ds");
  const auto a = run(with_fast({"--seed", "5", "--out", (dir / "a").string(), "embed", "--dataset", ds}));
  ASSERT_EQ(a.code, 0) << a.err;
  for (const char* f : {"embeddings.bin", "embeddings.csv", "embeddings_ego.bin",
                        "embeddings_agg.bin", "trace.csv", "manifest.json"})
    EXPECT_TRUE(fs::exists(dir / "a" / f)) << f;
  const std::string trace = read_file(dir / "a" / "trace.csv");
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "epoch,l_ego,l_agg,l_s,l_total");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 4);
  const json m = json::parse(read_file(dir / "a" / "manifest.json"));
  EXPECT_EQ(m["seed"], 5);
  EXPECT_EQ(m["config"]["epochs"], 3);
  EXPECT_EQ(load_embeddings(dir / "a" / "embeddings.bin").cols(), 8);

  // Replaying the manifest reproduces the binary exactly.
  const auto b = run({"--config", (dir / "a" / "manifest.json").string(), "--out",
                      (dir / "b").string(), "embed", "--dataset", ds});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(read_file(dir / "a" / "embeddings.bin"), read_file(dir / "b" / "embeddings.bin"));
}

TEST(Cli, FlagsOverrideConfigFile) {
  const auto dir = testing::scratch_dir();
  const auto ds = make_synth(dir / "ds");
  write_file_atomic(dir / "cfg.json", R"({"epochs": 2, "alpha": 0.25, "hidden_dim": 8, "dim_ego": 4, "dim_agg": 4})");
  const auto r = run({"--config", (dir / "cfg.json").string(), "--out", (dir / "o").string(),
                      "embed", "--dataset", ds, "--alpha", "0.75"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json m = json::parse(read_file(dir / "o" / "manifest.json"));
  EXPECT_EQ(m["config"]["epochs"], 2);
  EXPECT_EQ(m["config"]["alpha"], 0.75);

  write_file_atomic(dir / "bad.json", R"({"epochz": 2})");
  EXPECT_EQ(run({"--config", (dir / "bad.json").string(), "--out", (dir / "p").string(), "embed",
                 "--dataset", ds}).code,
            kExitValidation);
  EXPECT_EQ(run(with_fast({"--out", (dir / "q").string(), "embed", "--dataset", ds, "--task-mask",
                           "ego,nope"})).code,
            kExitValidation);
}

TEST(Cli, EvalNodeFromEmbeddings) {
  const auto dir = testing::scratch_dir();
  const auto ds = make_synth(dir / "ds");
  ASSERT_EQ(run(with_fast({"--out", (dir / "e").string(), "embed", "--dataset", ds})).code, 0);
  const auto r = run({"--out", (dir / "n").string(), "eval-node", "--dataset", ds, "--embeddings",
                      (dir / "e" / "embeddings.bin").string(), "--repeats", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(read_file(dir / "n" / "report.json"));
  EXPECT_EQ(rep["metric"], "micro_f1");
  EXPECT_EQ(rep["scores"].size(), 4u);
  const std::string csv = read_file(dir / "n" / "repeats.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);

  // Row-count mismatch is a validation error.
  save_embeddings_binary(Matrix::Zero(3, 2), dir / "small.bin");
  EXPECT_EQ(run({"--out", (dir / "m").string(), "eval-node", "--dataset", ds, "--embeddings",
                 (dir / "small.bin").string()}).code,
            kExitValidation);
}

TEST(Cli, EvalLinkWritesSplitManifest) {
  const auto dir = testing::scratch_dir();
  const auto ds = make_synth(dir / "ds");
  const auto r = run(with_fast({"--out", (dir / "l").string(), "eval-link", "--dataset", ds,
                                "--repeats", "2"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(read_file(dir / "l" / "report.json"));
  EXPECT_EQ(rep["metric"], "roc_auc");
  EXPECT_EQ(rep["scores"].size(), 2u);
  const std::string splits = read_file(dir / "l" / "splits.csv");
  EXPECT_EQ(splits.substr(0, splits.find('\n')), "repeat,set,u,v,label");
  // 80 nodes * 4 / 2 = 160 edges, 24 test positives + 24 negatives per repeat.
  EXPECT_EQ(std::count(splits.begin(), splits.end(), '\n'), 1 + 2 * 48);
}

TEST(Cli, EvalPairAndGridsearchAndDiag) {
  const auto dir = testing::scratch_dir();
  const auto ds = make_synth(dir / "ds");
  ASSERT_EQ(run(with_fast({"--out", (dir / "p").string(), "eval-pair", "--dataset", ds,
                           "--repeats", "2"})).code,
            0);
  EXPECT_TRUE(fs::exists(dir / "p" / "report.json"));

  const auto g = run({"--out", (dir / "g").string(), "gridsearch", "--dataset", ds, "--epochs", "1",
                      "--hidden", "4", "--dim-ego", "2", "--dim-agg", "2"});
  ASSERT_EQ(g.code, 0) << g.err;
  const std::string grid = read_file(dir / "g" / "grid.csv");
  EXPECT_EQ(std::count(grid.begin(), grid.end(), '\n'), 122);

  ASSERT_EQ(run(with_fast({"--out", (dir / "e").string(), "embed", "--dataset", ds})).code, 0);
  const auto d = run({"--out", (dir / "d").string(), "diag", "--embeddings-dir", (dir / "e").string()});
  ASSERT_EQ(d.code, 0) << d.err;
  const std::string sigma = read_file(dir / "d" / "sigma.csv");
  EXPECT_EQ(sigma.substr(0, sigma.find('\n')), "group,dim,sigma");
  EXPECT_EQ(std::count(sigma.begin(), sigma.end(), '\n'), 9);
}

TEST(Cli, MissingDatasetIsValidationError) {
  const auto dir = testing::scratch_dir();
  const auto r = run({"--out", dir.string(), "embed", "--dataset", (dir / "nope").string()});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("missing file"), std::string::npos);
}

TEST(Cli, DivergenceExitsWithNumericalCode) {
  const auto dir = testing::scratch_dir();
  const auto ds = make_synth(dir / "ds");
  const auto r = run({"--out", (dir / "x").string(), "embed", "--dataset", ds, "--lr", "1e300",
                      "--epochs", "20", "--hidden", "8", "--dim-ego", "4", "--dim-agg", "4"});
  EXPECT_EQ(r.code, kExitNumerical) << r.err;
}

}  // namespace
}  // namespace mvge

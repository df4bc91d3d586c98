//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "molrl/descriptors.hpp"
#include "molrl/smiles.hpp"
#include "test_common.hpp"

namespace molrl {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const fs::path &p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = new fs::path(fs::temp_directory_path() / "molrl_cli_test");
    fs::remove_all(*root_);
    fs::create_directories(*root_);
    std::ifstream in(test::data_path("corpus.smi"));
    std::ofstream out(*root_ / "small.smi");
    std::string l;
    for (int i = 0; i < 300 && std::getline(in, l); ++i) out << l << '\n';
    out.close();
    ASSERT_EQ(run("--seed 5 train-prior --corpus " + p("small.smi") + " --out " +
                  p("prior") + " --epochs 4 --embed 16 --hidden 32 --batch 32"
                  " --validity-samples 8"),
              0);
  }
  static void TearDownTestSuite() {
    fs::remove_all(*root_);
    delete root_;
  }

  static std::string p(const std::string &name) { return (*root_ / name).string(); }

  static int run(const std::string &args) {
    const std::string cmd = std::string(MOLRL_CLI) + " " + args + " > " + p("last.out") +
                            " 2> " + p("last.err");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string finetune_args(const std::string &out) {
    return "finetune --prior " + p("prior/prior.ckpt") + " --spec " +
           test::data_path("example_spec.txt") + " --out " + p(out) +
           " --method crf --bins 2 --budget 2 --batch 12 --difficulty-samples 32";
  }

  static fs::path *root_;
};

fs::path *CliTest::root_ = nullptr;

TEST_F(CliTest, IngestWritesVocabWithPadFirst) {
  ASSERT_EQ(run("ingest --input " + p("small.smi") + " --out " + p("ing")), 0);
  const auto vocab = lines_of(p("ing/vocab.txt"));
  ASSERT_FALSE(vocab.empty());
  EXPECT_EQ(vocab[0], "<pad>");
  EXPECT_EQ(lines_of(p("ing/corpus.smi")).size(), 300u);
  EXPECT_TRUE(fs::exists(p("ing/manifest.ini")));
}

TEST_F(CliTest, ProspectiveFilterRetainsOnlySmallCho) {
  {
    std::ofstream mixed(p("mixed.smi"));
    mixed << "CCO\nc1ccncc1\nClCCO\nCCCCCCCCCCCCCCCCO\nOC(=O)c1ccccc1\nCC(C)=O\n"
             "C1CC\nCCS\n";
  }
  ASSERT_EQ(run("ingest --prospective --input " + p("mixed.smi") + " --out " + p("pro")), 0);
  const auto kept = lines_of(p("pro/corpus.smi"));
  EXPECT_EQ(kept, (std::vector<std::string>{"CCO", "OC(=O)c1ccccc1", "CC(C)=O"}));
  for (const auto &s : kept) {
    const MolGraph g = parse_smiles(s);
    double mass = 0;
    for (int a = 0; a < g.num_atoms(); ++a) {
      const int z = g.atom(a).atomic_number;
      ASSERT_TRUE(z == 6 || z == 8) << s;
      mass += (z == 6 ? 12.011 : 15.999) + 1.008 * g.atom(a).total_h();
    }
    EXPECT_LT(mass, 200.0) << s;
  }
}

TEST_F(CliTest, MissingOrEmptyInputFailsWithoutOutput) {
  EXPECT_EQ(run("ingest --input " + p("nope.smi") + " --out " + p("nope")), 2);
  EXPECT_FALSE(fs::exists(p("nope")));
  { std::ofstream(p("empty.smi")) << "# only a comment\n\n"; }
  EXPECT_EQ(run("ingest --input " + p("empty.smi") + " --out " + p("empty")), 2);
  EXPECT_FALSE(fs::exists(p("empty")));
  EXPECT_NE(slurp(p("last.err")).find("empty"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("train-prior --out " + p("x")), 1);
  EXPECT_EQ(run("finetune --bogus"), 1);
  EXPECT_EQ(run("--help"), 0);
  EXPECT_FALSE(fs::exists(p("x")));
}

TEST_F(CliTest, PreconditionFailuresCreateNothing) {
  const std::string spec = test::data_path("example_spec.txt");
  { std::ofstream(p("bad_plan.txt")) << "method cf\nn_bins 4\nphases 2\n"; }
  { std::ofstream(p("bad_spec.txt")) << "mw: 100\nfg 99 nothing true\n"; }
  EXPECT_EQ(run("finetune --prior " + p("prior/prior.ckpt") + " --spec " + spec +
                " --plan " + p("bad_plan.txt") + " --out " + p("f1")),
            2);
  EXPECT_EQ(run("finetune --prior " + p("prior/prior.ckpt") + " --spec " +
                p("bad_spec.txt") + " --out " + p("f2")),
            2);
  EXPECT_EQ(run("finetune --prior " + p("small.smi") + " --spec " + spec + " --out " +
                p("f3")),
            2);
  EXPECT_EQ(run("evaluate --agent " + p("prior/prior.ckpt") + " --spec " + spec +
                " --target C1CC --out " + p("f4")),
            2);
  EXPECT_EQ(run("difficulty --prior " + p("prior/prior.ckpt") + " --spec " + spec +
                " --n 0 --out " + p("f5")),
            2);
  for (const char *d : {"f1", "f2", "f3", "f4", "f5"}) EXPECT_FALSE(fs::exists(p(d))) << d;
}

TEST_F(CliTest, TrainingFailureExitCode) {
  EXPECT_EQ(run("train-prior --corpus " + p("small.smi") + " --out " + p("diverge") +
                " --epochs 3 --embed 8 --hidden 8 --lr 1e30 --lr-decay 1"
                " --validity-samples 0"),
            3);
  EXPECT_NE(slurp(p("last.err")).find("training failure"), std::string::npos);
}

TEST_F(CliTest, TrainPriorSmokeAndSeedDeterminism) {
  const auto t0 = std::chrono::steady_clock::now();
  ASSERT_EQ(run("--seed 5 train-prior --corpus " + p("small.smi") + " --out " +
                p("prior2") + " --epochs 4 --embed 16 --hidden 32 --batch 32"
                " --validity-samples 8"),
            0);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(),
            60.0);
  EXPECT_EQ(slurp(p("prior/prior.ckpt")), slurp(p("prior2/prior.ckpt")));
  EXPECT_EQ(slurp(p("prior/train_log.txt")), slurp(p("prior2/train_log.txt")));
  EXPECT_EQ(lines_of(p("prior/train_log.txt")).size(), 4u);
}

TEST_F(CliTest, DefaultsMirrorTrainingSetup) {
  { std::ofstream(p("empty.smi")) << "\n"; }
  ASSERT_EQ(run("difficulty --prior " + p("prior/prior.ckpt") + " --spec " +
                test::data_path("example_spec.txt") + " --out " + p("diff")),
            0);
  const auto rows = lines_of(p("diff/difficulty.txt"));
  EXPECT_EQ(rows[0], "# samples 1000");
  EXPECT_EQ(rows.size(), 22u);
  ASSERT_EQ(run("train-prior --corpus " + p("empty.smi") + " --out " + p("never")), 2);
  const std::string manifest = slurp(p("prior/manifest.ini"));
  for (const char *line : {"# lr=0.001", "# clip=3", "# epochs=4", "# batch=32"})
    EXPECT_NE(manifest.find(line), std::string::npos) << line;
  ASSERT_EQ(run("train-prior --help"), 0);
  const std::string help = slurp(p("last.out"));
  for (const char *d : {"--batch INT [128]", "--epochs INT [20]", "--lr FLOAT [0.001]",
                        "--clip FLOAT [3]"})
    EXPECT_NE(help.find(d), std::string::npos) << d;
}

TEST_F(CliTest, ManifestRerunIsByteIdentical) {
  ASSERT_EQ(run("--seed 9 " + finetune_args("ft") + " --refine --xi 0.9"), 0);
  const fs::path dir = p("ft");
  std::vector<std::pair<fs::path, std::string>> first;
  for (const auto &e : fs::directory_iterator(dir)) first.emplace_back(e.path(), slurp(e.path()));
  ASSERT_TRUE(fs::exists(dir / "agent.ckpt"));
  ASSERT_TRUE(fs::exists(dir / "phase_2.ckpt"));
  ASSERT_EQ(run("--config " + (dir / "manifest.ini").string()), 0);
  for (const auto &[path, bytes] : first) EXPECT_EQ(slurp(path), bytes) << path;

  // prior training reproduces from its manifest as well
  const std::string ckpt = slurp(p("prior/prior.ckpt"));
  ASSERT_EQ(run("--config " + p("prior/manifest.ini")), 0);
  EXPECT_EQ(slurp(p("prior/prior.ckpt")), ckpt);
}

TEST_F(CliTest, WorkersDoNotChangeResults) {
  ASSERT_EQ(run("--seed 4 --workers 1 " + finetune_args("w1")), 0);
  ASSERT_EQ(run("--seed 4 --workers 3 " + finetune_args("w3")), 0);
  EXPECT_EQ(slurp(p("w1/agent.ckpt")), slurp(p("w3/agent.ckpt")));
  EXPECT_EQ(slurp(p("w1/phase_log.txt")), slurp(p("w3/phase_log.txt")));
  ASSERT_EQ(run("--workers 1 evaluate --agent " + p("w1/agent.ckpt") + " --spec " +
                test::data_path("example_spec.txt") + " --out " + p("e1")),
            0);
  ASSERT_EQ(run("--workers 3 evaluate --agent " + p("w1/agent.ckpt") + " --spec " +
                test::data_path("example_spec.txt") + " --out " + p("e3")),
            0);
  EXPECT_EQ(slurp(p("e1/report.txt")), slurp(p("e3/report.txt")));
}

TEST_F(CliTest, TargetNeverInfluencesTraining) {
  ASSERT_EQ(run("--seed 6 " + finetune_args("nt")), 0);
  ASSERT_EQ(run("--seed 6 " + finetune_args("wt") + " --target 'CC1OC(=O)CC1O'"), 0);
  for (const char *f : {"agent.ckpt", "phase_1.ckpt", "phase_2.ckpt", "phase_log.txt"})
    EXPECT_EQ(slurp(p(std::string("nt/") + f)), slurp(p(std::string("wt/") + f))) << f;
  EXPECT_FALSE(fs::exists(p("nt/report.txt")));
  EXPECT_NE(slurp(p("wt/report.txt")).find("identified"), std::string::npos);
}

TEST_F(CliTest, PhaseLogFollowsPlan) {
  ASSERT_EQ(run("--seed 2 " + finetune_args("crf")), 0);
  const auto rows = lines_of(p("crf/phase_log.txt"));
  ASSERT_EQ(rows.size(), 1u + 2 * 2 * 2);  // header, 2 phases x 2 passes x budget 2
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream f(rows[i]);
    int phase = 0, pass = 0, iteration = 0;
    f >> phase >> pass >> iteration;
    EXPECT_EQ(phase, i <= 4 ? 1 : 2);
    EXPECT_EQ(pass, static_cast<int>((i - 1) / 2) % 2);
    EXPECT_EQ(iteration, static_cast<int>((i - 1) % 2) + 1);
    int cols = 0;
    for (std::string c; f >> c;) ++cols;
    EXPECT_EQ(cols, 2 + 21);
  }
  EXPECT_EQ(lines_of(p("crf/bins.txt")).size(), 2u);
  EXPECT_NE(slurp(p("crf/plan.txt")).find("retrains_per_phase 1"), std::string::npos);
}

TEST_F(CliTest, RefineWithoutWeakConstraintsIsNoOp) {
  ASSERT_EQ(run("--seed 3 " + finetune_args("nw") + " --refine --xi 0"), 0);
  EXPECT_NE(slurp(p("last.out")).find("no weak constraints"), std::string::npos);
  EXPECT_FALSE(fs::exists(p("nw/refined.ckpt")));
  ASSERT_EQ(run("--seed 3 " + finetune_args("nw2")), 0);
  EXPECT_EQ(slurp(p("nw/agent.ckpt")), slurp(p("nw2/agent.ckpt")));
}

TEST_F(CliTest, EvaluateDefaultsAndNoTargetColumn) {
  ASSERT_EQ(run("evaluate --agent " + p("prior/prior.ckpt") + " --spec " +
                test::data_path("example_spec.txt") + " --out " + p("ev")),
            0);
  const std::string report = slurp(p("ev/report.txt"));
  EXPECT_EQ(report.rfind("samples 256\n", 0), 0u);
  EXPECT_NE(report.find("top5_mean"), std::string::npos);
  EXPECT_EQ(report.find("target"), std::string::npos);
  const auto rows = lines_of(p("ev/report.txt"));
  for (std::size_t i = rows.size() - 5; i < rows.size(); ++i) EXPECT_EQ(rows[i].back(), '\t');
}

TEST(ModuleLayoutTest, TrainingPathsDoNotReachSimilarity) {
  for (const char *f : {"src/rl.cpp", "src/curriculum.cpp", "src/training.cpp",
                        "include/molrl/rl.hpp", "include/molrl/curriculum.hpp"}) {
    const std::string text = slurp(fs::path(MOLRL_SOURCE_DIR) / f);
    ASSERT_FALSE(text.empty()) << f;
    EXPECT_EQ(text.find("evaluation.hpp"), std::string::npos) << f;
    EXPECT_EQ(text.find("tanimoto"), std::string::npos) << f;
  }
}

}  // namespace
}  // namespace molrl

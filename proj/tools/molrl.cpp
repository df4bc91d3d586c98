//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

// molrl command-line driver: ingest, train-prior, difficulty, finetune,
// evaluate. Every run writes manifest.ini to its output directory; passing
// it back through --config reproduces the run.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "molrl/curriculum.hpp"
#include "molrl/error.hpp"
#include "molrl/evaluation.hpp"
#include "molrl/neural/checkpoint.hpp"
#include "molrl/random.hpp"
#include "molrl/sampling.hpp"
#include "molrl/smiles.hpp"
#include "molrl/training.hpp"

namespace fs = std::filesystem;
using namespace molrl;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kTraining = 3 };

std::string absolute_path(const std::string &p) {
  return fs::absolute(p).lexically_normal().string();
}

CLI::Option *path_option(CLI::App *app, const std::string &name,
                         std::string &target, const std::string &help) {
  return app->add_option(name, target, help)->transform(absolute_path);
}

std::ofstream open_out(const fs::path &path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

// Options given on the command line (re-readable through --config), then
// every resolved value of the active subcommand as comments.
std::string manifest_text(const CLI::App &app) {
  const CLI::App *sub = app.get_subcommands().front();
  std::string out = app.config_to_str(false, false) + "\n# resolved\n";
  std::istringstream all(app.config_to_str(true, false));
  const std::string section = "[" + sub->get_name() + "]";
  const std::string prefix = sub->get_name() + ".";
  std::string current;
  for (std::string line; std::getline(all, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '[') {
      current = line;
      continue;
    }
    const bool dotted = line.find('.') < line.find('=');
    if ((!dotted && (current.empty() || current == section)) ||
        line.rfind(prefix, 0) == 0)
      out += "# " + line + "\n";
  }
  return out;
}

void make_out_dir(const fs::path &dir, const CLI::App &app) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  open_out(dir / "manifest.ini") << manifest_text(app);
}

struct Global {
  std::uint64_t seed = 0;
  int workers = 1;
};

// ------------------------------------------------------------ ingest

struct IngestArgs {
  std::string input, out;
  bool prospective = false;
};

int run_ingest(const IngestArgs &a, const CLI::App &app) {
  const Corpus c =
      ingest(a.input, a.prospective ? std::optional(ProspectiveFilter{}) : std::nullopt);
  make_out_dir(a.out, app);
  save_corpus(fs::path(a.out) / "corpus.smi", c);
  c.vocab.save(fs::path(a.out) / "vocab.txt");
  auto diag = open_out(fs::path(a.out) / "diagnostics.txt");
  for (const auto &d : c.diagnostics)
    diag << d.line << '\t' << d.reason << '\t' << d.text << '\n';
  std::printf("lines %zu kept %zu invalid %zu too_long %zu filtered %zu vocab %d\n",
              c.stats.lines, c.stats.kept, c.stats.invalid, c.stats.too_long,
              c.stats.filtered, c.vocab.size());
  return kOk;
}

// ------------------------------------------------------------ train-prior

struct TrainArgs {
  std::string corpus, out;
  TrainConfig cfg;
};

int run_train(TrainArgs a, const Global &g, const CLI::App &app) {
  const Corpus c = ingest(a.corpus);
  a.cfg.seed = g.seed;
  make_out_dir(a.out, app);
  auto log = open_out(fs::path(a.out) / "train_log.txt");
  const TrainResult r = train_prior(c, a.cfg, [&](const EpochRecord &e) {
    log << format_epoch(e) << '\n' << std::flush;
    std::printf("%s\n", format_epoch(e).c_str());
    std::fflush(stdout);
  });
  save_checkpoint(fs::path(a.out) / "prior.ckpt", r.params, c.vocab);
  std::printf("best epoch %d%s, train %zu held-out %zu\n", r.best_epoch,
              r.early_stopped ? " (early stop)" : "", r.train_size, r.heldout_size);
  return kOk;
}

// ------------------------------------------------------------ difficulty

void write_difficulty(const fs::path &path, const DifficultyReport &d,
                      const ConstraintSpec &spec) {
  auto out = open_out(path);
  out << "# samples " << d.samples << "\n# name difficulty probability\n";
  char buf[96];
  for (std::size_t j = 0; j < d.fg_ids.size(); ++j) {
    std::snprintf(buf, sizeof buf, " %.6f %.6f\n", d.difficulty[j], d.probability(j));
    out << spec.fg[j].name << buf;
  }
}

struct DifficultyArgs {
  std::string prior, spec, out;
  int n = 1000;
};

int run_difficulty(const DifficultyArgs &a, const Global &g, const CLI::App &app) {
  const Checkpoint ck = load_checkpoint(a.prior);
  const ConstraintSpec spec = ConstraintSpec::load(a.spec);
  if (a.n < 1) throw DataError("--n must be >= 1");
  make_out_dir(a.out, app);
  const auto d = difficulty_scores(ck.params, ck.vocab, spec, a.n,
                                   derive_seed(g.seed, "difficulty"), g.workers);
  write_difficulty(fs::path(a.out) / "difficulty.txt", d, spec);
  for (std::size_t j = 0; j < d.fg_ids.size(); ++j)
    std::printf("%-24s %.4f\n", spec.fg[j].name.c_str(), d.difficulty[j]);
  return kOk;
}

// ------------------------------------------------------------ finetune

struct FinetuneArgs {
  std::string prior, spec, plan_file, out, target;
  std::string method = "baseline", baseline_reward = "equal", estimator = "reinforce";
  int bins = 1, phases = 0, budget = 2000, patience = 50;
  double w = 0.5, beta = 0.5;
  int difficulty_samples = 1000;
  bool refine = false;
  double xi = 0.5;
  int weak_samples = 256;
  RlConfig rl;
  double lr = 1e-3;
};

PhasePlan resolve_plan(const FinetuneArgs &a, const CLI::App &sub) {
  auto given = [&](const char *name) { return sub.get_option(name)->count() > 0; };
  PhasePlan p;
  if (!a.plan_file.empty()) {
    p = PhasePlan::load(a.plan_file);
  } else {
    const Method m = parse_method(a.method);
    p = PhasePlan::preset(m, m == Method::kRF ? std::max(1, a.phases) : a.bins);
  }
  if (given("--method")) {
    const Method m = parse_method(a.method);
    if (m != p.method) p = PhasePlan::preset(m, m == Method::kRF ? p.phases : p.n_bins);
  }
  if (given("--bins")) {
    p.n_bins = a.bins;
    if (p.method == Method::kCF || p.method == Method::kCRF) p.phases = a.bins;
  }
  if (given("--phases")) p.phases = a.phases;
  if (given("--budget") || a.plan_file.empty()) p.budget = a.budget;
  if (given("--patience") || a.plan_file.empty()) p.patience = a.patience;
  if (given("--w") || a.plan_file.empty()) p.w = a.w;
  if (given("--beta") || a.plan_file.empty()) p.beta = a.beta;
  if (given("--baseline-reward") || a.plan_file.empty()) {
    if (a.baseline_reward == "equal") p.baseline_reward = BaselineReward::kEqual;
    else if (a.baseline_reward == "beta") p.baseline_reward = BaselineReward::kBetaWeighted;
    else throw DataError("--baseline-reward is equal or beta");
  }
  p.validate();
  return p;
}

int run_finetune(FinetuneArgs a, const Global &g, const CLI::App &app,
                 const CLI::App &sub) {
  const Checkpoint ck = load_checkpoint(a.prior);
  const ConstraintSpec spec = ConstraintSpec::load(a.spec);
  PhasePlan plan = resolve_plan(a, sub);
  const bool seed_given = app.get_option("--seed")->count() > 0;
  if (seed_given || a.plan_file.empty()) plan.seed = g.seed;
  if (a.estimator == "reinforce") a.rl.estimator = Estimator::kReinforce;
  else if (a.estimator == "reinvent") a.rl.estimator = Estimator::kReinvent;
  else throw DataError("--estimator is reinforce or reinvent");
  if (!a.target.empty() && !is_valid(a.target))
    throw DataError("invalid target SMILES: " + a.target);
  if (a.rl.batch_size < 1 || a.difficulty_samples < 1 || a.weak_samples < 1)
    throw DataError("sample counts must be >= 1");
  if (plan.n_bins > static_cast<int>(spec.fg.size()))
    throw DataError("more bins than functional-group constraints");

  const fs::path out(a.out);
  make_out_dir(out, app);
  open_out(out / "plan.txt") << plan.to_text();

  if (plan.n_bins > 1) {
    const auto d = difficulty_scores(ck.params, ck.vocab, spec, a.difficulty_samples,
                                     derive_seed(plan.seed, "difficulty"), g.workers);
    write_difficulty(out / "difficulty.txt", d, spec);
    plan.bins = make_bins(d, plan.n_bins);
    auto bins = open_out(out / "bins.txt");
    for (std::size_t b = 0; b < plan.bins.size(); ++b) {
      bins << b + 1;
      for (int id : plan.bins[b]) bins << ' ' << id;
      bins << '\n';
    }
  }

  a.rl.workers = g.workers;
  a.rl.sampler = sampler_config(ck.vocab);
  RmspropConfig opt;
  opt.learning_rate = a.lr;
  auto log = open_out(out / "phase_log.txt");
  log << "# phase pass iteration mean_reward validity mw";
  for (const auto &c : spec.fg) log << ' ' << c.name;
  log << '\n' << std::flush;
  CurriculumContext ctx{ck.vocab, spec, a.rl, opt, [&](const IterationRecord &r) {
                          log << format_iteration(r) << '\n' << std::flush;
                        }};

  CurriculumResult res = run_curriculum(plan, ck.params, ctx);
  for (const auto &b : res.boundaries)
    save_checkpoint(out / ("phase_" + std::to_string(b.phase) + ".ckpt"), b.checkpoint,
                    ck.vocab);
  std::printf("%s: %zu iterations over %zu phases\n", method_name(plan.method).c_str(),
              res.log.size(), res.boundaries.size());

  if (a.refine) {
    const WeakReport weak =
        detect_weak_constraints(res.agent, ck.vocab, spec, a.xi, a.weak_samples,
                                derive_seed(plan.seed, "weak"), g.workers);
    auto wout = open_out(out / "weak.txt");
    for (std::size_t j = 0; j < weak.fg_ids.size(); ++j)
      wout << spec.fg[j].name << ' ' << weak.satisfaction[j]
           << (weak.weak.count(weak.fg_ids[j]) ? " weak\n" : "\n");
    if (weak.weak.empty()) {
      std::printf("refine: no weak constraints at xi %.3f, nothing to do\n", a.xi);
    } else {
      res = refine(res.agent, weak.weak, plan, ctx);
      save_checkpoint(out / "refined.ckpt", res.agent, ck.vocab);
      std::printf("refine: %zu weak constraints, %zu iterations\n", weak.weak.size(),
                  res.log.size());
    }
  }
  save_checkpoint(out / "agent.ckpt", res.agent, ck.vocab);

  if (!a.target.empty()) {
    EvaluationReport r = sample_and_rank(res.agent, ck.vocab, spec, 256, 5,
                                         derive_seed(g.seed, "evaluate"), g.workers);
    similarity_report(r, a.target);
    open_out(out / "report.txt") << format_report(r, spec);
  }
  return kOk;
}

// ------------------------------------------------------------ evaluate

struct EvaluateArgs {
  std::string agent, spec, target, out;
  int n = 256, k = 5;
};

int run_evaluate(const EvaluateArgs &a, const Global &g, const CLI::App &app) {
  const Checkpoint ck = load_checkpoint(a.agent);
  const ConstraintSpec spec = ConstraintSpec::load(a.spec);
  if (a.n < 1 || a.k < 0 || a.k > a.n) throw DataError("need n >= 1 and 0 <= k <= n");
  if (!a.target.empty() && !is_valid(a.target))
    throw DataError("invalid target SMILES: " + a.target);
  make_out_dir(a.out, app);
  EvaluationReport r = sample_and_rank(ck.params, ck.vocab, spec, a.n, a.k,
                                       derive_seed(g.seed, "evaluate"), g.workers);
  if (!a.target.empty()) similarity_report(r, a.target);
  const std::string text = format_report(r, spec);
  open_out(fs::path(a.out) / "report.txt") << text;
  std::fputs(text.c_str(), stdout);
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app("Constraint-driven molecule generation with curriculum RL", "molrl");
  app.set_config("--config", "", "read options from a manifest or config file");
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--workers", g.workers, "trajectory worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  IngestArgs ia;
  auto *ingest_cmd = app.add_subcommand("ingest", "validate and filter a SMILES corpus");
  ingest_cmd->configurable();
  path_option(ingest_cmd, "--input", ia.input, "input SMILES file")->required();
  path_option(ingest_cmd, "--out", ia.out, "output directory")->required();
  ingest_cmd->add_flag("--prospective", ia.prospective, "keep C/H/O with MW < 200 only");

  TrainArgs ta;
  auto *train_cmd = app.add_subcommand("train-prior", "train the prior model");
  train_cmd->configurable();
  path_option(train_cmd, "--corpus", ta.corpus, "corpus file")->required();
  path_option(train_cmd, "--out", ta.out, "output directory")->required();
  train_cmd->add_option("--epochs", ta.cfg.epochs)->capture_default_str();
  train_cmd->add_option("--batch", ta.cfg.batch_size)->capture_default_str();
  train_cmd->add_option("--embed", ta.cfg.embed)->capture_default_str();
  train_cmd->add_option("--hidden", ta.cfg.hidden)->capture_default_str();
  train_cmd->add_option("--layers", ta.cfg.layers)->capture_default_str();
  train_cmd->add_option("--lr", ta.cfg.optimizer.learning_rate)->capture_default_str();
  train_cmd->add_option("--lr-decay", ta.cfg.lr_decay)->capture_default_str();
  train_cmd->add_option("--clip", ta.cfg.optimizer.clip)->capture_default_str();
  train_cmd->add_option("--heldout", ta.cfg.heldout_fraction)->capture_default_str();
  train_cmd->add_option("--patience", ta.cfg.patience)->capture_default_str();
  train_cmd->add_option("--validity-samples", ta.cfg.validity_samples)->capture_default_str();

  DifficultyArgs da;
  auto *diff_cmd = app.add_subcommand("difficulty", "profile constraint difficulty");
  diff_cmd->configurable();
  path_option(diff_cmd, "--prior", da.prior, "prior checkpoint")->required();
  path_option(diff_cmd, "--spec", da.spec, "constraint spec")->required();
  path_option(diff_cmd, "--out", da.out, "output directory")->required();
  diff_cmd->add_option("--n", da.n, "prior samples")->capture_default_str();

  FinetuneArgs fa;
  auto *ft_cmd = app.add_subcommand("finetune", "fine-tune an agent by phase plan");
  ft_cmd->configurable();
  path_option(ft_cmd, "--prior", fa.prior, "prior checkpoint")->required();
  path_option(ft_cmd, "--spec", fa.spec, "constraint spec")->required();
  path_option(ft_cmd, "--out", fa.out, "output directory")->required();
  path_option(ft_cmd, "--plan", fa.plan_file, "phase plan file; flags override it");
  ft_cmd->add_option("--method", fa.method, "baseline, rf, cf or crf")->capture_default_str();
  ft_cmd->add_option("--bins", fa.bins)->capture_default_str();
  ft_cmd->add_option("--phases", fa.phases, "rf phase count");
  ft_cmd->add_option("--budget", fa.budget, "iterations per loop")->capture_default_str();
  ft_cmd->add_option("--patience", fa.patience)->capture_default_str();
  ft_cmd->add_option("--w", fa.w)->capture_default_str();
  ft_cmd->add_option("--beta", fa.beta)->capture_default_str();
  ft_cmd->add_option("--baseline-reward", fa.baseline_reward, "equal or beta")
      ->capture_default_str();
  ft_cmd->add_option("--difficulty-samples", fa.difficulty_samples)->capture_default_str();
  ft_cmd->add_flag("--refine", fa.refine, "refinement pass on weak constraints");
  ft_cmd->add_option("--xi", fa.xi, "weak-constraint threshold")->capture_default_str();
  ft_cmd->add_option("--weak-samples", fa.weak_samples)->capture_default_str();
  ft_cmd->add_option("--batch", fa.rl.batch_size)->capture_default_str();
  ft_cmd->add_option("--kl-weight", fa.rl.kl_weight)->capture_default_str();
  ft_cmd->add_option("--baseline-decay", fa.rl.baseline_decay)->capture_default_str();
  ft_cmd->add_option("--estimator", fa.estimator, "reinforce or reinvent")
      ->capture_default_str();
  ft_cmd->add_option("--sigma", fa.rl.sigma)->capture_default_str();
  ft_cmd->add_option("--lr", fa.lr)->capture_default_str();
  ft_cmd->add_option("--target", fa.target, "evaluate the final agent against this SMILES");

  EvaluateArgs ea;
  auto *eval_cmd = app.add_subcommand("evaluate", "sample, rank and score an agent");
  eval_cmd->configurable();
  path_option(eval_cmd, "--agent", ea.agent, "agent checkpoint")->required();
  path_option(eval_cmd, "--spec", ea.spec, "constraint spec")->required();
  path_option(eval_cmd, "--out", ea.out, "output directory")->required();
  eval_cmd->add_option("--target", ea.target, "hidden target SMILES");
  eval_cmd->add_option("--n", ea.n)->capture_default_str();
  eval_cmd->add_option("--k", ea.k)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*ingest_cmd) return run_ingest(ia, app);
    if (*train_cmd) return run_train(ta, g, app);
    if (*diff_cmd) return run_difficulty(da, g, app);
    if (*ft_cmd) return run_finetune(fa, g, app, *ft_cmd);
    if (*eval_cmd) return run_evaluate(ea, g, app);
  } catch (const TrainingError &e) {
    std::fprintf(stderr, "training failure: %s\n", e.what());
    return kTraining;
  } catch (const DataError &e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kData;
  } catch (const std::invalid_argument &e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kData;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kTraining;
  }
  return kUsage;
}

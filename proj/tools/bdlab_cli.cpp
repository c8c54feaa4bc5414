// bdlab command line: run experiments, list the registry, check configs,
// run the golden suite.
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "bdlab/experiments.hpp"
#include "bdlab/reference.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> preset;
  std::optional<std::string> out;
};

void add_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "INI config file");
  app->add_option("--seed", f.seed, "master seed (u64)");
  app->add_option("--threads", f.threads, "worker threads");
  app->add_option("--preset", f.preset, "desk | full");
  app->add_option("--out", f.out, "output directory");
}

bdlab::ExperimentConfig resolve(const Flags& f, const std::string& experiment) {
  bdlab::ExperimentConfig cfg;
  if (!f.config.empty()) cfg = bdlab::load_config(f.config);
  if (!experiment.empty()) {
    if (!cfg.experiment.empty() && cfg.experiment != experiment)
      throw bdlab::UsageError("experiment " + experiment + " does not match config (" + cfg.experiment + ")");
    cfg.experiment = experiment;
  }
  if (f.seed) cfg.master_seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
  if (f.preset) cfg.preset = bdlab::parse_preset(*f.preset);
  if (f.out) cfg.out_dir = *f.out;
  bdlab::validate_config(cfg);
  return cfg;
}

int cmd_run(const Flags& f, const std::string& experiment) {
  const auto cfg = resolve(f, experiment);
  const auto man = bdlab::run_experiment(cfg);
  std::printf("%s preset=%s seed=%llu threads=%d  %.2fs\n", cfg.experiment.c_str(), bdlab::to_string(cfg.preset),
              static_cast<unsigned long long>(cfg.master_seed), cfg.threads, man.wall_seconds);
  for (const auto& c : man.checks)
    std::printf("  %-4s %s  %s\n    %s\n", c.id.c_str(), c.pass ? "PASS" : "FAIL", c.description.c_str(),
                c.detail.c_str());
  for (const auto& file : man.files)
    std::printf("  wrote %s (%ju bytes, sha256 %s)\n", file.name.c_str(), file.bytes, file.sha256.c_str());
  if (cfg.out_dir.empty()) std::cout << bdlab::dump_json(man.metrics) << "\n";
  return man.all_pass() ? 0 : 1;
}

int cmd_list() {
  for (const auto& e : bdlab::experiment_registry())
    std::printf("%s  %s\n    criteria: %s\n    params: %s\n    desk budget: %s\n", e.id.c_str(), e.title.c_str(),
                e.criteria.c_str(), e.params.c_str(), e.desk_budget.c_str());
  return 0;
}

int cmd_golden(const Flags& f) {
  const std::uint64_t seed = f.seed.value_or(bdlab::kDefaultSeed);
  const auto r = bdlab::reference::run_golden(1000, seed);
  std::printf("worked example profile   %s\n", r.example_profile ? "PASS" : "FAIL");
  std::printf("worked example cut       %s\n", r.example_cut ? "PASS" : "FAIL");
  std::printf("worked example reversed  %s\n", r.example_reversed ? "PASS" : "FAIL");
  std::printf("enumeration oracle       %s (%zu mismatches over %zu instances)\n", r.mismatches == 0 ? "PASS" : "FAIL",
              r.mismatches, r.instances);
  return r.example_ok() && r.mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ballistic deposition / last passage percolation lab"};
  app.require_subcommand(1);
  Flags flags;

  std::string experiment;
  auto* run = app.add_subcommand("run", "run one experiment (E1..E8)");
  run->add_option("experiment", experiment, "experiment id");
  add_flags(run, flags);

  auto* list = app.add_subcommand("list", "list registered experiments");

  auto* validate = app.add_subcommand("validate-config", "parse and range-check a config");
  add_flags(validate, flags);

  auto* golden = app.add_subcommand("golden", "worked example and small-instance enumeration checks");
  add_flags(golden, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      if (experiment.empty() && flags.config.empty()) throw bdlab::UsageError("run: experiment id or --config required");
      return cmd_run(flags, experiment);
    }
    if (*list) return cmd_list();
    if (*validate) {
      if (flags.config.empty()) throw bdlab::UsageError("validate-config: --config required");
      const auto cfg = resolve(flags, "");
      std::printf("ok: %s preset=%s seed=%llu threads=%d\n", cfg.experiment.c_str(), bdlab::to_string(cfg.preset),
                  static_cast<unsigned long long>(cfg.master_seed), cfg.threads);
      return 0;
    }
    if (*golden) return cmd_golden(flags);
  } catch (const bdlab::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}

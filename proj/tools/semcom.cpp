#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "semcom/experiments/config.hpp"
#include "semcom/experiments/runner.hpp"

namespace ex = semcom::experiments;

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::string checkpoint;
  std::optional<std::uint64_t> seed;
  std::optional<double> weight_c;
  std::optional<double> power_gain_db;
  std::optional<std::string> agent;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON config file (defaults when omitted)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "base seed, replaces run.seeds");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--weight-c", o.weight_c, "compute weight in [0, 1]; the comm weight is 1 - w");
  cmd->add_option("--power-gain-db", o.power_gain_db, "transmit power gain in dB");
  cmd->add_option("--agent", o.agent, "sac, dqn, random, greedy or fixed:<d>");
}

ex::ExperimentConfig load(const Overrides& o) {
  ex::ExperimentConfig cfg = o.config.empty() ? ex::parse_config_text("") : ex::parse_config(o.config);
  if (o.seed) cfg.seeds = {*o.seed};
  if (o.weight_c) {
    if (!(*o.weight_c >= 0.0 && *o.weight_c <= 1.0)) {
      throw semcom::ConfigError("--weight-c: must lie in [0, 1]");
    }
    cfg.env.weights = semcom::SccmWeights::from_compute_weight(*o.weight_c);
  }
  if (o.power_gain_db) cfg.env.network.power_gain_db = *o.power_gain_db;
  if (o.agent) cfg.agent = *o.agent;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic-communication resource allocation experiments"};
  app.require_subcommand(1);
  Overrides o;

  auto* train = app.add_subcommand("train", "train a learning agent and evaluate it");
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint or a baseline");
  auto* sweep = app.add_subcommand("sweep", "weight x power grid over the configured agents");
  auto* table = app.add_subcommand("profile-table", "print the per-depth cost table");
  for (auto* cmd : {train, eval, sweep, table}) add_common(cmd, o);
  eval->add_option("--checkpoint", o.checkpoint, "checkpoint directory written by train");

  CLI11_PARSE(app, argc, argv);

  try {
    const ex::ExperimentConfig cfg = load(o);
    const std::string out = ex::resolve_output_dir(cfg, o.out);

    if (train->parsed()) {
      const auto r = ex::run_train(cfg, out);
      std::printf("mean_sum_sccm %.6f over %zu episodes -> %s\n", r.mean_sum_sccm,
                  r.final_eval.size(), out.c_str());
    } else if (eval->parsed()) {
      const auto rows = ex::run_eval(cfg, out, o.checkpoint);
      std::vector<double> sccm;
      for (const auto& r : rows) sccm.push_back(r.sum_sccm);
      const auto s = ex::summarize(sccm);
      std::printf("%s mean_sum_sccm %.6f +- %.6f over %zu episodes -> %s\n", cfg.agent.c_str(),
                  s.mean, s.ci95, s.n, out.c_str());
    } else if (sweep->parsed()) {
      ex::run_sweep(cfg, out, [](const ex::SweepCell& c) {
        std::printf("w=%.3g gain=%.3gdB %-8s mean_sum_sccm %.4f mean_depth %.3f\n", c.weight_c,
                    c.power_gain_db, c.agent.c_str(), c.sum_sccm.mean, c.mean_depth);
        std::fflush(stdout);
      });
    } else {
      ex::write_profile_table(cfg, out);
      std::ifstream in(out + "/profile_table.csv");
      std::cout << in.rdbuf();
    }
  } catch (const semcom::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

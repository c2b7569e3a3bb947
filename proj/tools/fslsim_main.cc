/*
 * Copyright 2026 The fslsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fslsim/runner.h"

int main(int argc, char** argv) {
  CLI::App app{"Federated supermask learning simulator"};
  app.require_subcommand(1);

  fslsim::RunOptions run;
  std::string out_dir;
  uint32_t seed_override = 0;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment from a config file");
  run_cmd->add_option("--config", run.config_path, "Experiment config (key = value)")->required();
  auto* out_opt = run_cmd->add_option("--out", out_dir, "Output directory (default $FSLSIM_OUT_DIR or runs/latest)");
  run_cmd->add_option("--workers", run.workers, "Parallel client workers")->check(CLI::PositiveNumber);
  auto* seed_opt = run_cmd->add_option("--seed-override", seed_override, "Replace the config seed");

  fslsim::BoundOptions bound;
  CLI::App* bound_cmd = app.add_subcommand("bound", "Failure-probability bound sweep as CSV");
  bound_cmd->add_option("--n", bound.n, "Clients per round");
  bound_cmd->add_option("--p-min", bound.p_min, "Smallest benign inclusion probability");
  bound_cmd->add_option("--p-max", bound.p_max, "Largest benign inclusion probability");
  bound_cmd->add_option("--p-steps", bound.p_steps, "Number of p grid points");
  bound_cmd->add_option("--alpha", bound.alphas, "Malicious fractions")->delimiter(',');

  fslsim::CommcostOptions cost;
  std::string preset;
  CLI::App* cost_cmd = app.add_subcommand("commcost", "Per-round communication cost table as CSV");
  auto* preset_opt = cost_cmd->add_option("--preset", preset, "lenet-mnist, lenet-femnist or conv8-cifar10");
  auto* counts_opt = cost_cmd->add_option("--counts", cost.counts, "Explicit per-layer parameter counts")
                         ->delimiter(',');
  preset_opt->excludes(counts_opt);
  cost_cmd->add_flag("--ideal", cost.ideal, "Also print the entropy bound for rankings");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) {
    if (*out_opt) run.out_dir = out_dir;
    if (*seed_opt) run.seed_override = seed_override;
    return fslsim::cmd_run(run, std::cout, std::cerr);
  }
  if (*bound_cmd) return fslsim::cmd_bound(bound, std::cout, std::cerr);
  if (*preset_opt) cost.preset = preset;
  return fslsim::cmd_commcost(cost, std::cout, std::cerr);
}

// Copyright 2026 The PAM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pam/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pam/errors.hpp"
#include "pam/eval.hpp"
#include "pam/io.hpp"

namespace pam {

namespace {

using nlohmann::json;

int default_jobs() {
  if (const char* env = std::getenv(kJobsEnv)) {
    try {
      const int jobs = std::stoi(env);
      if (jobs >= 1) return jobs;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

// Flags shared by the commands that run the solver.
struct SolverFlags {
  std::optional<double> alpha;
  double beta0 = 0.1;
  std::optional<double> beta_increment;
  int iterations = 500;
  double early_stop = 0.0;
  int k = 8;
  int restarts = 10;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool scale_markers = false;
  int human_k = 2;

  void attach(CLI::App& cmd) {
    cmd.add_option("--alpha", alpha,
                   "node vs edge weight in [0,1] (default 0.9 for 2D, 0.5 for 3D)")
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--beta0", beta0, "initial inverse temperature")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--beta-increment", beta_increment,
                   "beta step per iteration (default beta0/10)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--iters", iterations, "solver iterations")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--early-stop", early_stop,
                   "stop when max |dM| falls below this (0 disables)")
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--k", k, "clusters per 3D point set")->check(CLI::PositiveNumber);
    cmd.add_option("--restarts", restarts, "k-means restarts")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--seed", seed, "clustering seed");
    cmd.add_option("--jobs", jobs, std::string("parallel problems (default $") +
                                       kJobsEnv + " or 1)")
        ->check(CLI::PositiveNumber);
    cmd.add_flag("--scale-markers", scale_markers,
                 "scale marker offsets by target/source cluster spread");
    cmd.add_option("--human-k", human_k, "clusters for human placements")
        ->check(CLI::PositiveNumber);
  }

  LoadOptions load_options() const { return {k, restarts, seed}; }

  RunConfig run_config(RelationRecipe recipe) const {
    RunConfig c;
    c.solver = recipe == RelationRecipe::k2dFull ? SolverConfig::defaults_2d()
                                                 : SolverConfig::defaults_3d();
    if (alpha) {
      c.solver.alpha = *alpha;
      c.alpha_set = true;
    }
    c.solver.beta0 = beta0;
    c.solver.beta_increment = beta_increment ? *beta_increment : beta0 / 10.0;
    c.solver.iterations = iterations;
    c.solver.early_stop_delta = early_stop;
    c.load = load_options();
    c.human.k = human_k;
    c.human.restarts = restarts;
    c.human.seed = seed;
    c.human.transfer.scale_by_spread = scale_markers;
    c.jobs = jobs;
    return c;
  }
};

struct EvalFlags {
  std::string scheme = "pooled";
  bool human = false;
  std::string csv;
  bool exclude_outliers = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("--scheme", scheme, "accuracy averaging")
        ->check(CLI::IsMember({"pooled", "balanced"}));
    cmd.add_flag("--human", human, "compare transferred markers with human placements");
    cmd.add_option("--csv", csv, "write per-item human comparison table");
    cmd.add_flag("--exclude-outliers", exclude_outliers,
                  "drop items beyond 2.5 SD of their condition from the CSV table");
  }

  EvalOptions options(const RunConfig& config) const {
    EvalOptions o;
    o.scheme = scheme == "balanced" ? AccuracyScheme::kBalanced
                                    : AccuracyScheme::kPooled;
    o.human = human;
    o.human_options = config.human;
    o.jobs = config.jobs;
    return o;
  }
};

std::string dump(const json& j) { return j.dump(1) + "\n"; }

// Rows whose model or human distance lies beyond 2.5 SD of its condition mean.
std::vector<bool> outlier_mask(const std::vector<HumanItem>& items) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < items.size(); ++k) groups[items[k].condition].push_back(k);
  std::vector<bool> mask(items.size(), false);
  auto flag = [&](const std::vector<std::size_t>& idx, double HumanItem::*field) {
    double mean = 0.0;
    for (auto k : idx) mean += items[k].*field;
    mean /= static_cast<double>(idx.size());
    double var = 0.0;
    for (auto k : idx) var += (items[k].*field - mean) * (items[k].*field - mean);
    const double sd = std::sqrt(var / static_cast<double>(idx.size()));
    for (auto k : idx) {
      if (sd > 0.0 && std::abs(items[k].*field - mean) > 2.5 * sd) mask[k] = true;
    }
  };
  for (const auto& [cond, idx] : groups) {
    flag(idx, &HumanItem::human_mean_distance);
    flag(idx, &HumanItem::model_mean_distance);
  }
  return mask;
}

std::string items_csv(const std::vector<HumanItem>& items, bool exclude_outliers) {
  const std::vector<bool> mask =
      exclude_outliers ? outlier_mask(items) : std::vector<bool>(items.size(), false);
  std::ostringstream os;
  os << std::setprecision(17);
  os << "problem,condition,color,placements,human_mean_distance,"
        "human_cluster_distance,model_mean_distance,model_cluster_distance,"
        "model_x,model_y\n";
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (mask[k]) continue;
    const HumanItem& it = items[k];
    os << it.problem_id << ',' << it.condition << ',' << it.color << ','
       << it.placements << ',' << it.human_mean_distance << ','
       << it.human_cluster_distance << ',' << it.model_mean_distance << ','
       << it.model_cluster_distance << ',' << it.model_px[0] << ','
       << it.model_px[1] << '\n';
  }
  return os.str();
}

void print_summary(const EvalReport& report, std::ostream& out) {
  out << std::setprecision(6);
  for (const auto& [key, value] : report.aggregate) {
    out << "  " << key << " = " << value << "\n";
  }
}

int cmd_solve(const std::string& in, const std::string& out_path,
              const SolverFlags& flags, bool emit_soft, std::ostream& out) {
  const ProblemFile file = load_problem_file(in, flags.load_options());
  const RunConfig config = flags.run_config(file.recipe);
  const auto solutions = solve_all(file.problems, config.solver, config.jobs);
  const json doc = solutions_to_json(file, solutions, config, {emit_soft});
  write_file_atomic(out_path, dump(doc));
  out << "solved " << file.problems.size() << " problem(s) -> " << out_path << "\n";
  return kExitOk;
}

int cmd_eval(const std::string& in, const std::string& out_path,
             const SolverFlags& flags, const EvalFlags& eval_flags,
             const std::string& predictions_path, std::ostream& out) {
  const ProblemFile file = load_problem_file(in, flags.load_options());
  const RunConfig config = flags.run_config(file.recipe);
  std::vector<ProblemSolution> solutions;
  if (!predictions_path.empty()) {
    if (eval_flags.human) {
      throw InvalidInput("--human needs soft mappings; run eval without --predictions");
    }
    for (auto& pred : load_predictions(predictions_path, file)) {
      ProblemSolution s;
      s.assignment = std::move(pred);
      solutions.push_back(std::move(s));
    }
  } else {
    solutions = solve_all(file.problems, config.solver, config.jobs);
  }
  const EvalReport report =
      evaluate(file.problems, solutions, config.solver, eval_flags.options(config));

  json doc = {{"schema_version", kReportSchema},
              {"config", config_to_json(config)},
              {"predictions", predictions_path.empty() ? "solved" : predictions_path},
              {"report", report_to_json(report)}};
  if (!eval_flags.csv.empty()) {
    write_file_atomic(eval_flags.csv, items_csv(report.items, eval_flags.exclude_outliers));
  }
  write_file_atomic(out_path, dump(doc));
  out << "evaluated " << file.problems.size() << " problem(s) -> " << out_path << "\n";
  print_summary(report, out);
  return kExitOk;
}

int cmd_ablate(const std::string& in, const std::string& out_path,
               const SolverFlags& flags, const EvalFlags& eval_flags,
               const std::vector<double>& alphas, std::ostream& out) {
  const ProblemFile file = load_problem_file(in, flags.load_options());
  const RunConfig config = flags.run_config(file.recipe);
  const auto reports = ablation_sweep(file.problems, alphas, config.solver,
                                      eval_flags.options(config));
  json rows = json::array();
  for (const auto& r : reports) rows.push_back(report_to_json(r));
  const json doc = {{"schema_version", kReportSchema},
                    {"config", config_to_json(config)},
                    {"alphas", alphas},
                    {"reports", std::move(rows)}};
  write_file_atomic(out_path, dump(doc));
  for (const auto& r : reports) {
    out << "alpha " << r.config.alpha << ":\n";
    print_summary(r, out);
  }
  return kExitOk;
}

int cmd_synth(int nodes, int dim, double sigma, int count, std::uint64_t seed,
              const std::string& out_path, std::ostream& out) {
  ProblemFile file;
  file.recipe = RelationRecipe::k2dFull;
  file.embedding_dim = dim;
  file.coord_dim = 2;
  for (int c = 0; c < count; ++c) {
    file.problems.push_back(
        synth_generate({nodes, dim, sigma, seed + static_cast<std::uint64_t>(c)}));
  }
  save_problem_file(out_path, file);
  out << "wrote " << count << " synthetic problem(s) -> " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Analogical mapping between attributed part graphs", "pam"};
  app.require_subcommand(1);

  SolverFlags solver_flags;
  solver_flags.jobs = default_jobs();
  EvalFlags eval_flags;
  std::string in_path;
  std::string out_path;

  auto* solve_cmd = app.add_subcommand("solve", "solve every problem in a file");
  solver_flags.attach(*solve_cmd);
  bool emit_soft = false;
  solve_cmd->add_flag("--emit-soft", emit_soft, "include the soft mapping matrix");
  solve_cmd->add_option("input", in_path, "problem file")->required();
  solve_cmd->add_option("output", out_path, "solution file")->required();

  auto* eval_cmd = app.add_subcommand("eval", "score mappings against ground truth");
  solver_flags.attach(*eval_cmd);
  eval_flags.attach(*eval_cmd);
  std::string predictions;
  eval_cmd->add_option("--predictions", predictions,
                       "score this solution file instead of solving");
  eval_cmd->add_option("input", in_path, "problem file")->required();
  eval_cmd->add_option("output", out_path, "report file")->required();

  auto* ablate_cmd = app.add_subcommand("ablate", "evaluate at several alpha values");
  solver_flags.attach(*ablate_cmd);
  eval_flags.attach(*ablate_cmd);
  std::vector<double> alphas{0.0, 0.9, 1.0};
  ablate_cmd->add_option("--alphas", alphas, "comma-separated alpha values")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  ablate_cmd->add_option("input", in_path, "problem file")->required();
  ablate_cmd->add_option("output", out_path, "report file")->required();

  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic problem set");
  int synth_n = 5;
  int synth_dim = 8;
  double synth_sigma = 0.05;
  int synth_count = 100;
  std::uint64_t synth_seed = 0;
  synth_cmd->add_option("--n", synth_n, "nodes per graph")->check(CLI::Range(2, 64));
  synth_cmd->add_option("--dim", synth_dim, "embedding dimension")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--sigma", synth_sigma, "target noise")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--count", synth_count, "number of problems")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth_seed, "base seed");
  synth_cmd->add_option("output", out_path, "problem file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve_cmd) {
      return cmd_solve(in_path, out_path, solver_flags, emit_soft, out);
    }
    if (*eval_cmd) {
      return cmd_eval(in_path, out_path, solver_flags, eval_flags, predictions, out);
    }
    if (*ablate_cmd) {
      return cmd_ablate(in_path, out_path, solver_flags, eval_flags, alphas, out);
    }
    if (*synth_cmd) {
      return cmd_synth(synth_n, synth_dim, synth_sigma, synth_count, synth_seed,
                       out_path, out);
    }
  } catch (const NumericalError& e) {
    err << "pam: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DataError& e) {
    err << "pam: " << e.what() << "\n";
    return kExitData;
  } catch (const InvalidInput& e) {
    err << "pam: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace pam

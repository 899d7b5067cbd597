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

#ifndef PAM_EVAL_HPP_
#define PAM_EVAL_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pam/problem.hpp"
#include "pam/solver.hpp"

namespace pam {

// Target -> source assignment for one problem.
using Prediction = std::vector<int>;

// ---------------------------------------------------------------------------
// Accuracy

// Number of target nodes whose predicted source equals the ground truth.
// Throws InvalidInput when the problem has no ground truth or sizes differ.
int correct_parts(const ProblemInstance& problem, const Prediction& prediction);

// Correct parts over total parts, pooled across every problem.
double mapping_accuracy(const std::vector<ProblemInstance>& problems,
                        const std::vector<Prediction>& predictions);

using GroupKey = std::function<std::string(const ProblemInstance&)>;

// Pooled accuracy within each group, then the unweighted mean over groups.
// Groups default to the problem category.
double balanced_accuracy(const std::vector<ProblemInstance>& problems,
                         const std::vector<Prediction>& predictions,
                         const GroupKey& group_key = {});

// ---------------------------------------------------------------------------
// Human-response comparisons

struct DistanceToMean {
  Vector mean;
  double average = 0.0;
};

DistanceToMean distance_to_mean(const std::vector<Vector>& placements);

// Clusters the placements into k groups (k-means++) and averages each
// placement's distance to its own cluster mean.
double closest_cluster_distance(const std::vector<Vector>& placements, int k,
                                std::uint64_t rng_seed, int restarts = 10);

// Sample Pearson correlation. Throws InvalidInput for mismatched or short
// (< 3) samples and UndefinedCorrelation when either sample is constant.
double pearson_r(const std::vector<double>& x, const std::vector<double>& y);

// One (problem, marker) comparison between model and people.
struct HumanItem {
  std::string problem_id;
  std::string condition;
  std::string color;
  std::size_t placements = 0;
  double human_mean_distance = 0.0;     // people vs their mean placement
  double human_cluster_distance = 0.0;  // people vs their own cluster mean
  double model_mean_distance = 0.0;     // model vs people's mean placement
  double model_cluster_distance = 0.0;  // model vs nearest people cluster mean
  Vector model_px;
};

struct HumanOptions {
  int k = 2;
  int restarts = 10;
  std::uint64_t seed = 0;
  MarkerTransferOptions transfer;
};

// Items for every source marker that has both a camera and placements.
std::vector<HumanItem> human_items(const ProblemInstance& problem,
                                   const MappingMatrix& mapping,
                                   const HumanOptions& options);

// ---------------------------------------------------------------------------
// Reports

enum class AccuracyScheme { kPooled, kBalanced };

struct EvalReport {
  std::vector<std::pair<std::string, double>> per_problem;  // input order
  std::map<std::string, double> aggregate;
  std::map<std::string, std::string> metadata;
  std::vector<HumanItem> items;
  SolverConfig config;
};

struct EvalOptions {
  AccuracyScheme scheme = AccuracyScheme::kPooled;
  bool human = false;
  HumanOptions human_options;
  int jobs = 1;
};

struct ProblemSolution {
  MappingMatrix mapping;
  SolveTrace trace;
  Prediction assignment;
};

// Solves every problem, up to `jobs` at a time; output order follows input.
std::vector<ProblemSolution> solve_all(const std::vector<ProblemInstance>& problems,
                                       const SolverConfig& config, int jobs = 1);

// Accuracy metrics (when ground truth is present) and, with options.human,
// the model-vs-people distance metrics and their item-level correlation.
EvalReport evaluate(const std::vector<ProblemInstance>& problems,
                    const std::vector<ProblemSolution>& solutions,
                    const SolverConfig& config, const EvalOptions& options);

// evaluate() for each alpha, with every other config field unchanged.
std::vector<EvalReport> ablation_sweep(const std::vector<ProblemInstance>& problems,
                                       const std::vector<double>& alphas,
                                       const SolverConfig& config,
                                       const EvalOptions& options);

// ---------------------------------------------------------------------------
// Synthetic problems

struct SynthSpec {
  int nodes = 5;
  int dim = 8;
  double sigma = 0.05;
  std::uint64_t seed = 0;
};

// Source: Gaussian embeddings and uniform 2D coordinates in the unit square.
// Target: a random permutation of the source with Gaussian noise of standard
// deviation sigma added to embeddings and coordinates. Ground truth is the
// permutation.
ProblemInstance synth_generate(const SynthSpec& spec);

}  // namespace pam

#endif  // PAM_EVAL_HPP_

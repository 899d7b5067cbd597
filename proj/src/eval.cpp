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

#include "pam/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pam/clustering.hpp"
#include "pam/edge_features.hpp"
#include "pam/errors.hpp"
#include "pam/parallel.hpp"

namespace pam {

std::vector<std::string> source_labels(const ProblemInstance& problem) {
  std::vector<std::string> out;
  for (const auto& n : problem.source.nodes) {
    out.push_back(n.label ? *n.label : "n" + std::to_string(n.id));
  }
  return out;
}

int correct_parts(const ProblemInstance& problem, const Prediction& prediction) {
  if (!problem.ground_truth) {
    throw InvalidInput("problem '" + problem.id + "' has no ground truth");
  }
  const auto& gt = *problem.ground_truth;
  if (gt.size() != prediction.size()) {
    throw InvalidInput("problem '" + problem.id + "': prediction has " +
                       std::to_string(prediction.size()) + " entries, expected " +
                       std::to_string(gt.size()));
  }
  int correct = 0;
  for (std::size_t t = 0; t < gt.size(); ++t) {
    if (gt[t] == prediction[t]) ++correct;
  }
  return correct;
}

namespace {

void require_aligned(const std::vector<ProblemInstance>& problems,
                     const std::vector<Prediction>& predictions) {
  if (problems.size() != predictions.size()) {
    throw InvalidInput("got " + std::to_string(predictions.size()) +
                       " predictions for " + std::to_string(problems.size()) +
                       " problems");
  }
}

double pooled(const std::vector<const ProblemInstance*>& problems,
              const std::vector<const Prediction*>& predictions) {
  long correct = 0;
  long total = 0;
  for (std::size_t p = 0; p < problems.size(); ++p) {
    correct += correct_parts(*problems[p], *predictions[p]);
    total += static_cast<long>(predictions[p]->size());
  }
  if (total == 0) throw InvalidInput("no parts to score");
  return static_cast<double>(correct) / static_cast<double>(total);
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double mapping_accuracy(const std::vector<ProblemInstance>& problems,
                        const std::vector<Prediction>& predictions) {
  require_aligned(problems, predictions);
  std::vector<const ProblemInstance*> ps;
  std::vector<const Prediction*> qs;
  for (std::size_t p = 0; p < problems.size(); ++p) {
    ps.push_back(&problems[p]);
    qs.push_back(&predictions[p]);
  }
  return pooled(ps, qs);
}

double balanced_accuracy(const std::vector<ProblemInstance>& problems,
                         const std::vector<Prediction>& predictions,
                         const GroupKey& group_key) {
  require_aligned(problems, predictions);
  std::map<std::string, std::pair<std::vector<const ProblemInstance*>,
                                  std::vector<const Prediction*>>>
      groups;
  for (std::size_t p = 0; p < problems.size(); ++p) {
    const std::string key =
        group_key ? group_key(problems[p]) : problems[p].category;
    groups[key].first.push_back(&problems[p]);
    groups[key].second.push_back(&predictions[p]);
  }
  if (groups.empty()) throw InvalidInput("balanced_accuracy: no problems");
  std::vector<double> per_group;
  for (const auto& [key, members] : groups) {
    per_group.push_back(pooled(members.first, members.second));
  }
  return mean(per_group);
}

DistanceToMean distance_to_mean(const std::vector<Vector>& placements) {
  if (placements.empty()) throw InvalidInput("distance_to_mean: no placements");
  DistanceToMean out;
  out.mean = mean_of(placements);
  double acc = 0.0;
  for (const auto& p : placements) acc += (p - out.mean).norm();
  out.average = acc / static_cast<double>(placements.size());
  return out;
}

namespace {

struct PlacementClusters {
  Clustering clustering;
  double average = 0.0;
};

PlacementClusters cluster_placements(const std::vector<Vector>& placements,
                                     int k, std::uint64_t seed, int restarts) {
  if (k < 1 || static_cast<std::size_t>(k) > placements.size()) {
    throw InvalidInput("closest_cluster_distance: k must lie in [1, " +
                       std::to_string(placements.size()) + "]");
  }
  PlacementClusters out;
  out.clustering = kmeans_fit(placements, k, seed, restarts);
  double acc = 0.0;
  for (std::size_t p = 0; p < placements.size(); ++p) {
    const auto c = static_cast<std::size_t>(out.clustering.labels[p]);
    acc += (placements[p] - out.clustering.centers[c]).norm();
  }
  out.average = acc / static_cast<double>(placements.size());
  return out;
}

}  // namespace

double closest_cluster_distance(const std::vector<Vector>& placements, int k,
                                std::uint64_t rng_seed, int restarts) {
  return cluster_placements(placements, k, rng_seed, restarts).average;
}

double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidInput("pearson_r: length mismatch");
  if (x.size() < 3) throw InvalidInput("pearson_r: need at least 3 pairs");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelation("pearson_r: zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<HumanItem> human_items(const ProblemInstance& problem,
                                   const MappingMatrix& mapping,
                                   const HumanOptions& options) {
  std::vector<HumanItem> items;
  if (!problem.human || !problem.camera) return items;
  for (const Marker& marker : problem.markers) {
    const auto it = problem.human->by_color.find(marker.color);
    if (it == problem.human->by_color.end() || it->second.empty()) continue;
    const std::vector<Vector>& placements = it->second;

    const Marker mapped = map_marker_end_to_end(
        marker, problem.source, problem.target, mapping, *problem.camera,
        options.transfer);
    const DistanceToMean to_mean = distance_to_mean(placements);
    const int k = std::min<int>(options.k,
                                static_cast<int>(count_distinct(placements)));
    const PlacementClusters clusters =
        cluster_placements(placements, k, options.seed, options.restarts);

    HumanItem item;
    item.problem_id = problem.id;
    item.condition = problem.human->condition;
    item.color = marker.color;
    item.placements = placements.size();
    item.model_px = *mapped.coords2d;
    item.human_mean_distance = to_mean.average;
    item.human_cluster_distance = clusters.average;
    item.model_mean_distance = (item.model_px - to_mean.mean).norm();
    const auto& centers = clusters.clustering.centers;
    item.model_cluster_distance =
        (item.model_px -
         centers[static_cast<std::size_t>(closest_cluster(item.model_px, centers))])
            .norm();
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<ProblemSolution> solve_all(const std::vector<ProblemInstance>& problems,
                                       const SolverConfig& config, int jobs) {
  std::vector<ProblemSolution> out(problems.size());
  parallel_for(problems.size(), jobs, [&](std::size_t p) {
    try {
      SolveResult r = solve(problems[p].source, problems[p].target, config);
      out[p].assignment = hard_assignment(r.mapping);
      out[p].mapping = std::move(r.mapping);
      out[p].trace = std::move(r.trace);
    } catch (const NumericalError& e) {
      throw NumericalError("problem '" + problems[p].id + "': " + e.what());
    } catch (const InvalidInput& e) {
      throw InvalidInput("problem '" + problems[p].id + "': " + e.what());
    }
  });
  return out;
}

namespace {

void add_human_metrics(const std::vector<HumanItem>& items, EvalReport& report) {
  if (items.empty()) return;
  auto summarize = [&](const std::string& prefix,
                       const std::vector<const HumanItem*>& group) {
    double h = 0.0, hc = 0.0, m = 0.0, mc = 0.0;
    for (const HumanItem* it : group) {
      h += it->human_mean_distance;
      hc += it->human_cluster_distance;
      m += it->model_mean_distance;
      mc += it->model_cluster_distance;
    }
    const auto n = static_cast<double>(group.size());
    report.aggregate[prefix + "items"] = n;
    report.aggregate[prefix + "human_mean_distance"] = h / n;
    report.aggregate[prefix + "human_cluster_distance"] = hc / n;
    report.aggregate[prefix + "model_mean_distance"] = m / n;
    report.aggregate[prefix + "model_cluster_distance"] = mc / n;
  };

  std::vector<const HumanItem*> all;
  std::map<std::string, std::vector<const HumanItem*>> by_condition;
  for (const auto& it : items) {
    all.push_back(&it);
    by_condition[it.condition].push_back(&it);
  }
  summarize("", all);
  for (const auto& [condition, group] : by_condition) {
    summarize("condition/" + condition + "/", group);
  }

  std::vector<double> human;
  std::vector<double> model;
  for (const auto& it : items) {
    human.push_back(it.human_mean_distance);
    model.push_back(it.model_mean_distance);
  }
  try {
    report.aggregate["item_correlation"] = pearson_r(human, model);
  } catch (const std::exception& e) {
    report.metadata["item_correlation"] = std::string("undefined: ") + e.what();
  }
  report.metadata["marker_pooling"] =
      "each marker of a problem is an independent item";
}

}  // namespace

EvalReport evaluate(const std::vector<ProblemInstance>& problems,
                    const std::vector<ProblemSolution>& solutions,
                    const SolverConfig& config, const EvalOptions& options) {
  if (problems.size() != solutions.size()) {
    throw InvalidInput("evaluate: problems and solutions differ in length");
  }
  EvalReport report;
  report.config = config;

  const bool any_gt = std::any_of(problems.begin(), problems.end(), [](const auto& p) {
    return p.ground_truth.has_value();
  });
  if (!any_gt && !options.human) {
    throw InvalidInput("evaluation needs ground truth (or human placements)");
  }

  std::vector<std::vector<HumanItem>> per_problem_items(problems.size());
  if (options.human) {
    parallel_for(problems.size(), options.jobs, [&](std::size_t p) {
      per_problem_items[p] =
          human_items(problems[p], solutions[p].mapping, options.human_options);
    });
    for (auto& items : per_problem_items) {
      for (auto& it : items) report.items.push_back(std::move(it));
    }
    if (report.items.empty()) {
      throw InvalidInput("no problem carries markers, a camera and placements");
    }
  }

  if (any_gt) {
    std::vector<ProblemInstance> scored;
    std::vector<Prediction> predictions;
    for (std::size_t p = 0; p < problems.size(); ++p) {
      if (!problems[p].ground_truth) continue;
      const int correct = correct_parts(problems[p], solutions[p].assignment);
      report.per_problem.emplace_back(
          problems[p].id,
          static_cast<double>(correct) /
              static_cast<double>(solutions[p].assignment.size()));
      scored.push_back(problems[p]);
      predictions.push_back(solutions[p].assignment);
    }
    const double pooled_acc = mapping_accuracy(scored, predictions);
    report.aggregate["accuracy_pooled"] = pooled_acc;
    report.aggregate["problems_scored"] = static_cast<double>(scored.size());
    if (options.scheme == AccuracyScheme::kBalanced) {
      const double balanced = balanced_accuracy(scored, predictions);
      report.aggregate["accuracy_balanced"] = balanced;
      report.aggregate["accuracy"] = balanced;
      report.metadata["scheme"] = "balanced";
    } else {
      report.aggregate["accuracy"] = pooled_acc;
      report.metadata["scheme"] = "pooled";
    }
  } else {
    for (std::size_t p = 0; p < problems.size(); ++p) {
      const auto& items = per_problem_items[p];
      if (items.empty()) continue;
      double acc = 0.0;
      for (const auto& it : items) acc += it.model_mean_distance;
      report.per_problem.emplace_back(problems[p].id,
                                      acc / static_cast<double>(items.size()));
    }
  }

  add_human_metrics(report.items, report);
  return report;
}

std::vector<EvalReport> ablation_sweep(const std::vector<ProblemInstance>& problems,
                                       const std::vector<double>& alphas,
                                       const SolverConfig& config,
                                       const EvalOptions& options) {
  std::vector<EvalReport> out;
  for (double alpha : alphas) {
    SolverConfig c = config;
    c.alpha = alpha;
    const auto solutions = solve_all(problems, c, options.jobs);
    out.push_back(evaluate(problems, solutions, c, options));
  }
  return out;
}

ProblemInstance synth_generate(const SynthSpec& spec) {
  if (spec.nodes < 2) throw InvalidInput("synth_generate: need at least 2 nodes");
  if (spec.dim < 1) throw InvalidInput("synth_generate: dim must be positive");
  if (!(spec.sigma >= 0.0)) throw InvalidInput("synth_generate: sigma must be >= 0");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<std::size_t>(spec.nodes);

  ProblemInstance p;
  p.id = "synth-" + std::to_string(spec.seed);
  p.category = "synthetic";
  for (std::size_t i = 0; i < n; ++i) {
    NodeAttr node;
    node.id = static_cast<int>(i);
    node.embedding.resize(spec.dim);
    for (int d = 0; d < spec.dim; ++d) node.embedding[d] = gauss(rng);
    node.coords.resize(2);
    node.coords << unit(rng), unit(rng);
    node.label = "part" + std::to_string(i);
    p.source.nodes.push_back(std::move(node));
  }

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t t = 0; t < n; ++t) {
    const NodeAttr& src = p.source.nodes[static_cast<std::size_t>(perm[t])];
    NodeAttr node;
    node.id = static_cast<int>(t);
    node.embedding = src.embedding;
    node.coords = src.coords;
    if (spec.sigma > 0.0) {
      for (int d = 0; d < spec.dim; ++d) node.embedding[d] += spec.sigma * gauss(rng);
      for (int d = 0; d < 2; ++d) node.coords[d] += spec.sigma * gauss(rng);
    }
    p.target.nodes.push_back(std::move(node));
  }
  p.ground_truth = perm;

  // Target coordinates are summed in source order so that a noise-free target
  // shares the source centroid bit for bit.
  std::vector<int> inverse(n);
  for (std::size_t t = 0; t < n; ++t) inverse[static_cast<std::size_t>(perm[t])] = static_cast<int>(t);
  std::vector<Vector> src_coords;
  std::vector<Vector> tgt_coords;
  for (std::size_t i = 0; i < n; ++i) {
    src_coords.push_back(p.source.nodes[i].coords);
    tgt_coords.push_back(p.target.nodes[static_cast<std::size_t>(inverse[i])].coords);
  }
  const Centroid src_c0 = compute_centroid(src_coords);
  const Centroid tgt_c0 = compute_centroid(tgt_coords);
  p.source.centroid = src_c0.coords;
  p.source.edges = build_edges_2d(p.source.nodes, src_c0);
  p.target.centroid = tgt_c0.coords;
  p.target.edges = build_edges_2d(p.target.nodes, tgt_c0);
  return p;
}

}  // namespace pam

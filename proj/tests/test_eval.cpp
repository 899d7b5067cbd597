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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "pam/errors.hpp"
#include "pam/eval.hpp"
#include "support.hpp"

using namespace pam;
using pam::testing::vec;

namespace {

ProblemInstance scored_problem(const std::string& id, const std::string& category,
                               std::vector<int> gt) {
  ProblemInstance p;
  p.id = id;
  p.category = category;
  p.ground_truth = std::move(gt);
  return p;
}

// `correct` of the `parts` targets predicted right, the rest off by one.
Prediction with_correct(const std::vector<int>& gt, int correct) {
  Prediction out = gt;
  const int n = static_cast<int>(gt.size());
  for (int t = correct; t < n; ++t) out[t] = (gt[t] + 1) % n;
  return out;
}

std::vector<int> identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

Camera front_camera() {
  Camera cam;
  cam.position = vec({0, 0, 10});
  cam.look_at = vec({0, 0, 0});
  cam.up = vec({0, 1, 0});
  cam.focal_px = 100.0;
  cam.principal_point = vec({320, 240});
  cam.width = 640;
  cam.height = 480;
  return cam;
}

ProblemInstance human_problem(const std::string& id, const std::string& condition,
                              const std::vector<Vector>& placements) {
  ProblemInstance p;
  p.id = id;
  p.category = "object";
  std::vector<NodeAttr> nodes;
  nodes.push_back({0, vec({1, 0}), vec({0, 0, 0}), std::nullopt, std::nullopt});
  nodes.push_back({1, vec({0, 1}), vec({4, 0, 0}), std::nullopt, std::nullopt});
  p.source = pam::testing::graph_from_nodes(nodes);
  p.target = p.source;
  p.markers.push_back({"red", vec({1, 0, 0}), std::nullopt});
  p.camera = front_camera();
  p.human = HumanPlacements{condition, {{"red", placements}}};
  return p;
}

}  // namespace

TEST_CASE("mapping_accuracy examples") {
  const auto gt = identity(10);
  const std::vector<ProblemInstance> ps{scored_problem("a", "x", gt),
                                        scored_problem("b", "x", gt)};
  CHECK(mapping_accuracy(ps, {with_correct(gt, 7), with_correct(gt, 9)}) ==
        doctest::Approx(0.8));
  CHECK(mapping_accuracy(ps, {gt, gt}) == 1.0);
  CHECK_THROWS_AS(mapping_accuracy(ps, {gt}), InvalidInput);
  CHECK_THROWS_AS(mapping_accuracy({ProblemInstance{}}, {gt}), InvalidInput);

  // Order of problems does not matter.
  CHECK(mapping_accuracy({ps[1], ps[0]}, {with_correct(gt, 9), with_correct(gt, 7)}) ==
        mapping_accuracy(ps, {with_correct(gt, 7), with_correct(gt, 9)}));
}

TEST_CASE("uniform random predictions score near chance") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pick(0, 9);
  std::vector<ProblemInstance> ps;
  std::vector<Prediction> preds;
  for (int p = 0; p < 2000; ++p) {
    ps.push_back(scored_problem("r" + std::to_string(p), "x",
                                pam::testing::random_permutation(rng, 10)));
    Prediction pred(10);
    for (auto& v : pred) v = pick(rng);
    preds.push_back(pred);
  }
  // 20000 Bernoulli(0.1) draws: standard error 0.0021.
  CHECK(std::abs(mapping_accuracy(ps, preds) - 0.10) < 0.01);
}

TEST_CASE("balanced_accuracy examples") {
  const auto gt = identity(10);
  const std::vector<ProblemInstance> ps{scored_problem("c", "car", gt),
                                        scored_problem("p", "plane", gt)};
  const std::vector<Prediction> preds{with_correct(gt, 5), with_correct(gt, 7)};
  CHECK(balanced_accuracy(ps, preds) == doctest::Approx(0.6));

  const std::vector<ProblemInstance> one{scored_problem("a", "x", gt),
                                         scored_problem("b", "x", gt)};
  const std::vector<Prediction> one_preds{with_correct(gt, 3), with_correct(gt, 8)};
  CHECK(balanced_accuracy(one, one_preds) == mapping_accuracy(one, one_preds));

  // 406 perfect car problems against 6860 failed plane problems.
  const auto gt2 = identity(2);
  std::vector<ProblemInstance> big;
  std::vector<Prediction> big_preds;
  for (int i = 0; i < 406; ++i) {
    big.push_back(scored_problem("c" + std::to_string(i), "car", gt2));
    big_preds.push_back(gt2);
  }
  for (int i = 0; i < 6860; ++i) {
    big.push_back(scored_problem("p" + std::to_string(i), "plane", gt2));
    big_preds.push_back({1, 0});
  }
  CHECK(balanced_accuracy(big, big_preds) == doctest::Approx(0.5));
  CHECK(mapping_accuracy(big, big_preds) == doctest::Approx(406.0 / 7266.0));

  // Within-group order does not matter.
  std::vector<std::size_t> order(big.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(4);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<ProblemInstance> shuffled;
  std::vector<Prediction> shuffled_preds;
  for (auto i : order) {
    shuffled.push_back(big[i]);
    shuffled_preds.push_back(big_preds[i]);
  }
  CHECK(balanced_accuracy(shuffled, shuffled_preds) == balanced_accuracy(big, big_preds));

  const GroupKey by_id_prefix = [](const ProblemInstance& p) { return p.id.substr(0, 1); };
  CHECK(balanced_accuracy(ps, preds, by_id_prefix) == doctest::Approx(0.6));
  CHECK_THROWS_AS(balanced_accuracy({}, {}), InvalidInput);
}

TEST_CASE("distance_to_mean examples") {
  const auto a = distance_to_mean({vec({0, 0}), vec({2, 0})});
  CHECK(a.mean == vec({1, 0}));
  CHECK(a.average == 1.0);
  CHECK(distance_to_mean({vec({3, 3}), vec({3, 3}), vec({3, 3})}).average == 0.0);
  const auto sq = distance_to_mean({vec({0, 0}), vec({0, 2}), vec({2, 0}), vec({2, 2})});
  CHECK(sq.mean == vec({1, 1}));
  CHECK(sq.average == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(distance_to_mean({}), InvalidInput);
}

TEST_CASE("closest_cluster_distance examples") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vector> pts;
    for (int p = 0; p < 3 + trial % 20; ++p) {
      pts.push_back(pam::testing::uniform_vector(rng, 2, 0, 640));
    }
    CHECK(closest_cluster_distance(pts, 1, trial) == distance_to_mean(pts).average);
  }

  std::vector<Vector> modes;
  for (int p = 0; p < 10; ++p) {
    modes.push_back(vec({0.0 + 0.01 * p, 0.0}));
    modes.push_back(vec({100.0 + 0.01 * p, 0.0}));
  }
  CHECK(closest_cluster_distance(modes, 2, 0) < 0.1);
  CHECK(distance_to_mean(modes).average > 49.0);

  const std::vector<Vector> three{vec({0, 0}), vec({5, 1}), vec({9, 9})};
  CHECK(closest_cluster_distance(three, 3, 0) == 0.0);
  CHECK_THROWS_AS(closest_cluster_distance(three, 4, 0), InvalidInput);
}

TEST_CASE("pearson_r examples") {
  CHECK(pearson_r({1, 2, 3}, {1, 3, 2}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pearson_r({1, 2, 3, 4}, {3, 5, 7, 9}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson_r({1, 2, 3, 4}, {-1, -2, -3, -4}) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(pearson_r({1, 1, 1}, {1, 2, 3}), UndefinedCorrelation);
  CHECK_THROWS_AS(pearson_r({1, 2}, {1, 2}), InvalidInput);
  CHECK_THROWS_AS(pearson_r({1, 2, 3}, {1, 2}), InvalidInput);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> coef(0.1, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Vector xv = pam::testing::gaussian_vector(rng, 3 + trial % 30);
    const std::vector<double> x(xv.data(), xv.data() + xv.size());
    const double a = coef(rng), b = coef(rng) - 5;
    std::vector<double> up, down;
    for (double v : x) {
      up.push_back(a * v + b);
      down.push_back(-a * v + b);
    }
    CHECK(std::abs(pearson_r(x, up) - 1.0) <= 1e-12);
    CHECK(std::abs(pearson_r(x, down) + 1.0) <= 1e-12);
  }
}

TEST_CASE("human_items and human aggregates") {
  // The marker (1,0,0) projects to (330,240) under the front camera.
  const ProblemInstance a = human_problem(
      "a", "near", {vec({330, 240}), vec({334, 240}), vec({330, 246}), vec({334, 246})});
  const auto items = human_items(a, MappingMatrix::Identity(2, 2), {});
  REQUIRE(items.size() == 1);
  const HumanItem& it = items[0];
  CHECK(it.placements == 4);
  CHECK((it.model_px - vec({330, 240})).norm() <= 1e-9);
  CHECK(it.human_mean_distance == doctest::Approx(std::sqrt(13.0)));
  CHECK(it.model_mean_distance == doctest::Approx(std::sqrt(13.0)));
  // The lowest-inertia split pairs the placements along x, 2 px from each mean.
  CHECK(it.human_cluster_distance == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(it.model_cluster_distance <= it.model_mean_distance);

  const ProblemInstance b = human_problem("b", "far", {vec({300, 200}), vec({320, 200})});
  const ProblemInstance c =
      human_problem("c", "far", {vec({330, 240}), vec({330, 241}), vec({329, 240})});
  const std::vector<ProblemInstance> ps{a, b, c};
  std::vector<ProblemSolution> sols(3);
  for (auto& s : sols) s.mapping = MappingMatrix::Identity(2, 2);
  EvalOptions opts;
  opts.human = true;
  const EvalReport r = evaluate(ps, sols, SolverConfig::defaults_3d(), opts);
  REQUIRE(r.items.size() == 3);
  CHECK(r.aggregate.at("items") == 3);
  CHECK(r.aggregate.at("condition/far/items") == 2);
  CHECK(r.aggregate.at("condition/near/items") == 1);
  double mean_h = 0.0;
  std::vector<double> hs, ms;
  for (const auto& item : r.items) {
    mean_h += item.human_mean_distance / 3.0;
    hs.push_back(item.human_mean_distance);
    ms.push_back(item.model_mean_distance);
  }
  CHECK(r.aggregate.at("human_mean_distance") == doctest::Approx(mean_h));
  CHECK(r.aggregate.at("item_correlation") == doctest::Approx(pearson_r(hs, ms)));

  EvalOptions none = opts;
  const std::vector<ProblemInstance> bare{scored_problem("z", "x", identity(2))};
  CHECK_THROWS_AS(evaluate(bare, {ProblemSolution{MappingMatrix::Identity(2, 2), {}, {0, 1}}},
                           SolverConfig::defaults_3d(), none),
                  InvalidInput);
}

TEST_CASE("synth_generate") {
  const ProblemInstance a = synth_generate({6, 8, 0.05, 42});
  const ProblemInstance b = synth_generate({6, 8, 0.05, 42});
  CHECK(a.source.nodes.size() == 6);
  CHECK(a.target.nodes.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(a.source.nodes[i].embedding == b.source.nodes[i].embedding);
    CHECK(a.target.nodes[i].embedding == b.target.nodes[i].embedding);
    CHECK(a.target.nodes[i].coords == b.target.nodes[i].coords);
  }
  CHECK(a.ground_truth == b.ground_truth);
  CHECK(a.source.edges == b.source.edges);
  CHECK(validate_pair(a.source, a.target).empty());
  CHECK_THROWS_AS(synth_generate({1, 8, 0.0, 0}), InvalidInput);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ProblemInstance z = synth_generate({5, 8, 0.0, seed});
    const auto& gt = *z.ground_truth;
    for (std::size_t t = 0; t < gt.size(); ++t) {
      const auto& src = z.source.nodes[static_cast<std::size_t>(gt[t])];
      CHECK(z.target.nodes[t].embedding == src.embedding);
      CHECK(z.target.nodes[t].coords == src.coords);
    }
    CHECK(z.target.centroid == z.source.centroid);
    CHECK(brute_force_map(z.source, z.target, 0.9).assignment == gt);
  }
}

TEST_CASE("zero-noise problems are recovered") {
  std::vector<ProblemInstance> ps;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    ps.push_back(synth_generate({3 + static_cast<int>(seed % 4), 8, 0.0, seed}));
  }
  const SolverConfig cfg = SolverConfig::defaults_2d();
  const auto sols = solve_all(ps, cfg, 4);
  const EvalReport r = evaluate(ps, sols, cfg, {});
  CHECK(r.aggregate.at("accuracy") == 1.0);
  CHECK(r.aggregate.at("problems_scored") == 40);
  CHECK(r.metadata.at("scheme") == "pooled");
}

TEST_CASE("solve_all does not depend on the job count") {
  std::vector<ProblemInstance> ps;
  for (std::uint64_t seed = 0; seed < 12; ++seed) ps.push_back(synth_generate({5, 8, 0.1, seed}));
  const SolverConfig cfg = SolverConfig::defaults_2d();
  const auto one = solve_all(ps, cfg, 1);
  const auto many = solve_all(ps, cfg, 5);
  for (std::size_t p = 0; p < ps.size(); ++p) {
    CHECK(one[p].mapping == many[p].mapping);
    CHECK(one[p].assignment == many[p].assignment);
  }
}

TEST_CASE("ablation sweep invariants") {
  std::vector<ProblemInstance> ps;
  for (std::uint64_t seed = 0; seed < 10; ++seed) ps.push_back(synth_generate({5, 8, 0.2, seed}));
  const SolverConfig cfg = SolverConfig::defaults_2d();
  const auto reports = ablation_sweep(ps, {0.0, 0.9, 1.0}, cfg, {});
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].config.alpha == 0.0);
  CHECK(reports[2].config.alpha == 1.0);

  std::mt19937_64 rng(12);
  auto edges_scrambled = ps;
  auto nodes_scrambled = ps;
  for (std::size_t p = 0; p < ps.size(); ++p) {
    auto& g = edges_scrambled[p].target;
    for (int a = 0; a < 5; ++a) {
      for (int b = 0; b < 5; ++b) {
        if (a != b) g.edges.set(a, b, pam::testing::gaussian_vector(rng, 9));
      }
    }
    for (auto& n : nodes_scrambled[p].target.nodes) {
      n.embedding = pam::testing::gaussian_vector(rng, 8);
    }
  }
  const auto e = ablation_sweep(edges_scrambled, {1.0}, cfg, {});
  const auto n = ablation_sweep(nodes_scrambled, {0.0}, cfg, {});
  CHECK(e[0].per_problem == reports[2].per_problem);
  CHECK(e[0].aggregate == reports[2].aggregate);
  CHECK(n[0].per_problem == reports[0].per_problem);
  CHECK(n[0].aggregate == reports[0].aggregate);

  for (std::size_t p = 0; p < ps.size(); ++p) {
    SolverConfig one = cfg;
    one.alpha = 1.0;
    CHECK(solve(ps[p].source, ps[p].target, one).mapping ==
          solve(edges_scrambled[p].source, edges_scrambled[p].target, one).mapping);
    one.alpha = 0.0;
    CHECK(solve(ps[p].source, ps[p].target, one).mapping ==
          solve(nodes_scrambled[p].source, nodes_scrambled[p].target, one).mapping);
  }
}

TEST_CASE("solver recovery on N=6 synthetic problems") {
  int recovered = 0, oracle_recovered = 0, agree = 0;
  const SolverConfig cfg = SolverConfig::defaults_2d();
  std::vector<ProblemInstance> ps;
  for (std::uint64_t seed = 0; seed < 500; ++seed) ps.push_back(synth_generate({6, 8, 0.05, seed}));
  const auto sols = solve_all(ps, cfg, 4);
  for (std::size_t p = 0; p < ps.size(); ++p) {
    const auto oracle = brute_force_map(ps[p].source, ps[p].target, cfg.alpha).assignment;
    if (sols[p].assignment == *ps[p].ground_truth) ++recovered;
    if (oracle == *ps[p].ground_truth) ++oracle_recovered;
    if (sols[p].assignment == oracle) ++agree;
  }
  MESSAGE("N=6 sigma=0.05: solver recovers " << recovered << "/500, oracle "
                                             << oracle_recovered << "/500, agree " << agree
                                             << "/500");
  CHECK(agree >= 475);
}

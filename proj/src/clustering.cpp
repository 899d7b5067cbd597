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

#include "pam/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pam/errors.hpp"

namespace pam {

namespace {

void require_points(const std::vector<Vector>& points, const char* what) {
  if (points.empty()) throw InvalidInput(std::string(what) + ": no points");
  const Eigen::Index d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d) {
      throw InvalidInput(std::string(what) + ": points differ in dimension");
    }
  }
}

}  // namespace

std::size_t count_distinct(const std::vector<Vector>& points) {
  std::vector<const Vector*> order;
  order.reserve(points.size());
  for (const auto& p : points) order.push_back(&p);
  auto less = [](const Vector* a, const Vector* b) {
    return std::lexicographical_compare(a->data(), a->data() + a->size(),
                                        b->data(), b->data() + b->size());
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t distinct = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || *order[k] != *order[k - 1]) ++distinct;
  }
  return distinct;
}

namespace {

struct LloydRun {
  std::vector<int> labels;
  std::vector<Vector> centers;
  double inertia = 0.0;
  std::vector<double> history;
};

double total_inertia(const std::vector<Vector>& points,
                     const std::vector<int>& labels,
                     const std::vector<Vector>& centers) {
  double acc = 0.0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    acc += (points[p] - centers[static_cast<std::size_t>(labels[p])]).squaredNorm();
  }
  return acc;
}

std::vector<Vector> member_means(const std::vector<Vector>& points,
                                 const std::vector<int>& labels, int k) {
  std::vector<Vector> sums(static_cast<std::size_t>(k),
                           Vector::Zero(points.front().size()));
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto c = static_cast<std::size_t>(labels[p]);
    sums[c] += points[p];
    ++counts[c];
  }
  for (std::size_t c = 0; c < sums.size(); ++c) {
    sums[c] /= static_cast<double>(counts[c]);
  }
  return sums;
}

// Moves the farthest member of the largest cluster into each empty cluster.
void repair_empty(const std::vector<Vector>& points, std::vector<int>& labels,
                  std::vector<Vector>& centers) {
  const int k = static_cast<int>(centers.size());
  for (;;) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    const auto empty = std::find(counts.begin(), counts.end(), 0u);
    if (empty == counts.end()) return;
    const auto largest = static_cast<int>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());

    std::size_t victim = 0;
    double far = -1.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (labels[p] != largest) continue;
      const double d = (points[p] - centers[static_cast<std::size_t>(largest)])
                           .squaredNorm();
      if (d > far) {
        far = d;
        victim = p;
      }
    }
    const auto target = static_cast<int>(empty - counts.begin());
    labels[victim] = target;
    centers[static_cast<std::size_t>(target)] = points[victim];
  }
}

LloydRun lloyd(const std::vector<Vector>& points, int k, std::uint64_t seed) {
  LloydRun run;
  run.centers = kmeanspp_seed(points, k, seed);
  std::vector<int> previous;
  for (int it = 0; it < kMaxLloydIterations; ++it) {
    run.labels.resize(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
      run.labels[p] = closest_cluster(points[p], run.centers);
    }
    repair_empty(points, run.labels, run.centers);
    run.history.push_back(total_inertia(points, run.labels, run.centers));
    const bool converged = run.labels == previous;
    run.centers = member_means(points, run.labels, k);
    if (converged) break;
    previous = run.labels;
  }
  run.inertia = total_inertia(points, run.labels, run.centers);
  return run;
}

}  // namespace

Vector mean_of(const std::vector<Vector>& points) {
  require_points(points, "mean_of");
  Vector sum = Vector::Zero(points.front().size());
  for (const auto& p : points) sum += p;
  return sum / static_cast<double>(points.size());
}

std::vector<Vector> kmeanspp_seed(const std::vector<Vector>& points, int k,
                                  std::uint64_t rng_seed) {
  require_points(points, "kmeanspp_seed");
  if (k < 1) throw InvalidInput("kmeanspp_seed: k must be at least 1");
  const std::size_t distinct = count_distinct(points);
  if (static_cast<std::size_t>(k) > distinct) {
    throw InvalidInput("kmeanspp_seed: k=" + std::to_string(k) + " exceeds " +
                       std::to_string(distinct) + " distinct points");
  }

  std::mt19937_64 rng(rng_seed);
  std::vector<Vector> centers;
  centers.reserve(static_cast<std::size_t>(k));
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  centers.push_back(points[pick(rng)]);

  std::vector<double> nearest(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    nearest[p] = (points[p] - centers.front()).squaredNorm();
  }
  while (centers.size() < static_cast<std::size_t>(k)) {
    std::discrete_distribution<std::size_t> draw(nearest.begin(), nearest.end());
    const Vector& chosen = points[draw(rng)];
    centers.push_back(chosen);
    for (std::size_t p = 0; p < points.size(); ++p) {
      nearest[p] = std::min(nearest[p], (points[p] - chosen).squaredNorm());
    }
  }
  return centers;
}

Clustering kmeans_fit(const std::vector<Vector>& points, int k,
                      std::uint64_t rng_seed, int restarts) {
  if (restarts < 1) throw InvalidInput("kmeans_fit: restarts must be >= 1");
  Clustering best;
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    const std::uint64_t seed = rng_seed + static_cast<std::uint64_t>(r);
    LloydRun run = lloyd(points, k, seed);
    if (!have || run.inertia < best.inertia) {
      best.labels = std::move(run.labels);
      best.centers = std::move(run.centers);
      best.inertia = run.inertia;
      best.inertia_history = std::move(run.history);
      best.seed = seed;
      have = true;
    }
  }
  return best;
}

int closest_cluster(const Vector& point, const std::vector<Vector>& centers) {
  if (centers.empty()) throw InvalidInput("closest_cluster: no centers");
  int best = 0;
  double best_d = (point - centers.front()).squaredNorm();
  for (std::size_t c = 1; c < centers.size(); ++c) {
    const double d = (point - centers[c]).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

Clustering cluster_point_set(const PointSet& points, int k,
                             std::uint64_t rng_seed, int restarts) {
  if (points.coords.size() != points.embeddings.size()) {
    throw InvalidInput("point set: coords and embeddings differ in length");
  }
  Clustering cl = kmeans_fit(points.embeddings, k, rng_seed, restarts);
  require_points(points.coords, "cluster_point_set");
  cl.coord_centers = member_means(points.coords, cl.labels, k);
  return cl;
}

PartNodes clusters_to_nodes(const PointSet& points, const Clustering& clustering) {
  if (points.coords.size() != points.embeddings.size() ||
      points.coords.size() != clustering.labels.size()) {
    throw InvalidInput("clusters_to_nodes: inconsistent sizes");
  }
  const int k = static_cast<int>(clustering.centers.size());
  const std::vector<Vector> emb = member_means(points.embeddings, clustering.labels, k);
  const std::vector<Vector> pos = member_means(points.coords, clustering.labels, k);

  std::vector<double> spread(static_cast<std::size_t>(k), 0.0);
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (std::size_t p = 0; p < points.coords.size(); ++p) {
    const auto c = static_cast<std::size_t>(clustering.labels[p]);
    spread[c] += (points.coords[p] - pos[c]).squaredNorm();
    ++counts[c];
  }

  PartNodes out;
  for (int c = 0; c < k; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    NodeAttr node;
    node.id = c;
    node.embedding = emb[ci];
    node.coords = pos[ci];
    node.spread = std::sqrt(spread[ci] / static_cast<double>(counts[ci]));
    out.nodes.push_back(std::move(node));
  }
  out.centroid = compute_centroid(points.coords);
  return out;
}

}  // namespace pam

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

#ifndef PAM_CLUSTERING_HPP_
#define PAM_CLUSTERING_HPP_

#include <cstdint>
#include <vector>

#include "pam/edge_features.hpp"
#include "pam/graph.hpp"

namespace pam {

// Points of one 3D object: model-space coordinates plus a per-point
// embedding (e.g. 64-dimensional network activations).
struct PointSet {
  std::vector<Vector> coords;
  std::vector<Vector> embeddings;
};

struct Clustering {
  std::vector<int> labels;          // per point, in [0, k)
  std::vector<Vector> centers;      // mean member vector per cluster
  std::vector<Vector> coord_centers;  // only set by cluster_point_set
  double inertia = 0.0;
  // Inertia after each assignment step of the winning restart.
  std::vector<double> inertia_history;
  std::uint64_t seed = 0;           // seed of the winning restart
};

inline constexpr int kMaxLloydIterations = 300;

// k-means++ seeding. Throws InvalidInput if k exceeds the number of distinct
// points or k < 1.
std::vector<Vector> kmeanspp_seed(const std::vector<Vector>& points, int k,
                                  std::uint64_t rng_seed);

// Lloyd's algorithm from a k-means++ start, run with seeds rng_seed,
// rng_seed+1, ..., rng_seed+restarts-1; lowest inertia wins, lowest seed on
// ties. Empty clusters take the farthest point of the largest cluster.
Clustering kmeans_fit(const std::vector<Vector>& points, int k,
                      std::uint64_t rng_seed, int restarts = 10);

// Index of the nearest center (Euclidean), lowest index on ties.
int closest_cluster(const Vector& point, const std::vector<Vector>& centers);

std::size_t count_distinct(const std::vector<Vector>& points);

// Arithmetic mean of a nonempty set of equal-length vectors, summed in order.
Vector mean_of(const std::vector<Vector>& points);

// Clusters the embeddings of a point set and fills coord_centers with the
// mean member coordinates.
Clustering cluster_point_set(const PointSet& points, int k,
                             std::uint64_t rng_seed, int restarts = 10);

struct PartNodes {
  std::vector<NodeAttr> nodes;
  Centroid centroid;  // mean of all raw points, not of the cluster centers
};

// One node per cluster: mean member embedding, mean member coordinates, and
// the RMS distance of members to those coordinates as the node spread.
PartNodes clusters_to_nodes(const PointSet& points, const Clustering& clustering);

}  // namespace pam

#endif  // PAM_CLUSTERING_HPP_

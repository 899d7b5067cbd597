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

#ifndef PAM_GRAPH_HPP_
#define PAM_GRAPH_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pam {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Soft assignment between source rows and target columns. Entries are
// nonnegative and finite; the solver keeps every row summing to one.
using MappingMatrix = Eigen::MatrixXd;

// Norms below this are treated as zero by cosine_similarity.
inline constexpr double kDegenerateNorm = 1e-12;

struct NodeAttr {
  int id = 0;
  Vector embedding;
  Vector coords;  // 2D pixels or 3D model units
  std::optional<std::string> label;
  // RMS distance of member points to the node's coordinates, for nodes built
  // from point clusters.
  std::optional<double> spread;
};

struct EdgeAttr {
  int from = 0;
  int to = 0;
  Vector relation;
};

// Dense storage for directed edges over N nodes, one slot per ordered pair.
// Slots may be empty until filled; a complete map has N(N-1) edges.
class EdgeMap {
 public:
  EdgeMap() = default;
  explicit EdgeMap(std::size_t node_count);

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const;

  void set(int from, int to, Vector relation);
  void erase(int from, int to);
  bool contains(int from, int to) const;

  // Throws InvalidInput on self-edges, out-of-range ids, or a missing edge.
  const Vector& relation(int from, int to) const;

  std::vector<EdgeAttr> list() const;

  bool operator==(const EdgeMap& other) const;

 private:
  std::size_t slot(int from, int to) const;

  std::size_t n_ = 0;
  std::vector<std::optional<Vector>> slots_;
};

struct AttributedGraph {
  std::vector<NodeAttr> nodes;
  EdgeMap edges;
  Vector centroid;

  std::size_t size() const { return nodes.size(); }
};

struct SolverConfig {
  double alpha = 0.9;
  double beta0 = 0.1;
  int iterations = 500;
  double beta_increment = 0.01;
  double early_stop_delta = 0.0;  // 0 disables early stopping

  // Defaults for 2D keypoint problems and 3D point-cloud problems.
  static SolverConfig defaults_2d();
  static SolverConfig defaults_3d();
};

// Throws InvalidInput when a field is out of range.
void check_config(const SolverConfig& config);

// Cosine of the angle between a and b; 0 when either norm is below
// kDegenerateNorm.
double cosine_similarity(const Vector& a, const Vector& b);

// Entry (i, i') is the cosine similarity of source node i and target node i'.
Matrix node_similarity_matrix(const AttributedGraph& source,
                              const AttributedGraph& target);

// Cosine similarity between source edge (i, j) and target edge (i2, j2).
double edge_similarity(const AttributedGraph& source,
                       const AttributedGraph& target, int i, int j, int i2,
                       int j2);

// Every violated graph invariant, in check order. Empty means valid.
std::vector<std::string> validate_graph(const AttributedGraph& graph);

// Violations of the cross-graph invariants of one problem (matching embedding,
// coordinate and relation dimensions), in addition to validate_graph on each.
std::vector<std::string> validate_pair(const AttributedGraph& source,
                                       const AttributedGraph& target);

}  // namespace pam

#endif  // PAM_GRAPH_HPP_

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

#ifndef PAM_SOLVER_HPP_
#define PAM_SOLVER_HPP_

#include <functional>
#include <vector>

#include "pam/graph.hpp"

namespace pam {

// Graduated assignment for attributed graph matching.
//
// The mapping M (source rows, target columns) maximizes
//
//   L(M) = (1 - a) * sum_{i,j!=i,i',j'!=i'} M_ii' M_jj' sim(r_ij, r_i'j') / (N(N-1))
//        +      a  * sum_{i,i'} M_ii' sim(o_i, o_i') / N
//
// under an entropy prior (1/b) * sum M log M that grows stronger as the
// inverse temperature b increases. Each iteration computes the compatibility
//
//   Q_ii' = (1 - a) * M_ii' * sum_{j!=i,j'!=i'} M_jj' sim(r_ij, r_i'j') / (2(N-1))
//         +      a  * M_ii' * sim(o_i, o_i')
//
// sets M = exp(b Q), divides every column by its sum, then every row by its
// sum, and raises b by a fixed increment. N is the source node count.

using CompatibilityMatrix = Matrix;

// Node and edge cosine similarities for one (source, target) pair, computed
// once per solve. Tables for a term whose weight is zero are skipped, so the
// corresponding attributes are never read.
class SimilarityTables {
 public:
  SimilarityTables(const AttributedGraph& source, const AttributedGraph& target,
                   bool with_nodes = true, bool with_edges = true);

  // Tables for the terms that `alpha` actually weights.
  static SimilarityTables for_alpha(const AttributedGraph& source,
                                    const AttributedGraph& target, double alpha);

  Eigen::Index source_size() const { return ns_; }
  Eigen::Index target_size() const { return nt_; }
  bool has_nodes() const { return has_nodes_; }
  bool has_edges() const { return has_edges_; }

  const Matrix& nodes() const { return node_sim_; }

  // sim(r_ij, r_tu); zero when i == j or t == u.
  double edge(Eigen::Index i, Eigen::Index j, Eigen::Index t,
              Eigen::Index u) const {
    return edge_sim_[static_cast<std::size_t>(((i * ns_ + j) * nt_ + t) * nt_ + u)];
  }

  // W_ii' = sum_{j,j'} M_jj' sim(r_ij, r_i'j').
  Matrix edge_support(const MappingMatrix& mapping) const;

 private:
  Eigen::Index ns_ = 0;
  Eigen::Index nt_ = 0;
  bool has_nodes_ = false;
  bool has_edges_ = false;
  Matrix node_sim_;
  std::vector<double> edge_sim_;
};

struct SolveTrace {
  std::vector<double> energies;  // only when SolveOptions::record_energies
  double final_beta = 0.0;
  int iterations_run = 0;
  double max_delta_last = 0.0;
};

struct SolveResult {
  MappingMatrix mapping;
  SolveTrace trace;
};

// Called after every iteration with the 0-based iteration index, the beta
// used by that iteration and the updated mapping.
using IterationObserver =
    std::function<void(int iteration, double beta, const MappingMatrix& mapping)>;

struct SolveOptions {
  bool record_energies = false;
  IterationObserver observer;
};

// Uniform mapping, every entry 1/ns.
MappingMatrix init_mapping(Eigen::Index ns, Eigen::Index nt);

CompatibilityMatrix compatibility_matrix(const MappingMatrix& mapping,
                                         const SimilarityTables& tables,
                                         double alpha);
CompatibilityMatrix compatibility_matrix(const MappingMatrix& mapping,
                                         const AttributedGraph& source,
                                         const AttributedGraph& target,
                                         double alpha);

// One graduated-assignment iteration at fixed beta. Throws NumericalError on
// non-finite compatibilities or a row that underflows to zero.
MappingMatrix ga_step(const MappingMatrix& mapping,
                      const SimilarityTables& tables, double alpha, double beta);
MappingMatrix ga_step(const MappingMatrix& mapping,
                      const AttributedGraph& source,
                      const AttributedGraph& target, double alpha, double beta);

SolveResult solve(const AttributedGraph& source, const AttributedGraph& target,
                  const SolverConfig& config, const SolveOptions& options = {});

double likelihood(const MappingMatrix& mapping, const SimilarityTables& tables,
                  double alpha);
double likelihood(const MappingMatrix& mapping, const AttributedGraph& source,
                  const AttributedGraph& target, double alpha);

// (1/beta) * sum M log M, with 0 log 0 = 0. Throws InvalidInput on negative
// or non-finite entries.
double log_prior(const MappingMatrix& mapping, double beta);

// -likelihood - log_prior.
double energy(const MappingMatrix& mapping, const SimilarityTables& tables,
              double alpha, double beta);
double energy(const MappingMatrix& mapping, const AttributedGraph& source,
              const AttributedGraph& target, double alpha, double beta);

// For every target column, the source row with the largest entry (lowest
// index on ties). Several targets may share a source.
std::vector<int> hard_assignment(const MappingMatrix& mapping);

// 0/1 matrix of a target -> source assignment.
MappingMatrix assignment_matrix(const std::vector<int>& target_to_source,
                                Eigen::Index ns);

struct BruteForceResult {
  std::vector<int> assignment;  // target -> source
  double best = 0.0;
  double runner_up = 0.0;       // second best over all permutations
};

inline constexpr Eigen::Index kBruteForceLimit = 8;

// Exhaustive maximization of the likelihood over one-to-one mappings of
// equal-size graphs. Ties resolve to the lexicographically smallest
// assignment. Refuses more than kBruteForceLimit nodes.
BruteForceResult brute_force_map(const AttributedGraph& source,
                                 const AttributedGraph& target, double alpha);

}  // namespace pam

#endif  // PAM_SOLVER_HPP_

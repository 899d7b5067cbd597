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

// Test-only generators and independent oracles. Nothing here calls into the
// solver's similarity tables: the oracles recompute every quantity from raw
// attribute vectors with plain loops.

#ifndef PAM_TESTS_SUPPORT_HPP_
#define PAM_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pam/edge_features.hpp"
#include "pam/graph.hpp"

namespace pam::testing {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

inline Vector gaussian_vector(std::mt19937_64& rng, Eigen::Index dim,
                              double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v[k] = g(rng);
  return v;
}

inline Vector uniform_vector(std::mt19937_64& rng, Eigen::Index dim, double lo,
                             double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v[k] = u(rng);
  return v;
}

inline AttributedGraph graph_from_nodes(std::vector<NodeAttr> nodes) {
  AttributedGraph g;
  g.nodes = std::move(nodes);
  std::vector<Vector> coords;
  for (const auto& n : g.nodes) coords.push_back(n.coords);
  const Centroid c0 = compute_centroid(coords);
  g.centroid = c0.coords;
  g.edges = g.nodes.front().coords.size() == 2 ? build_edges_2d(g.nodes, c0)
                                               : build_edges_3d(g.nodes, c0);
  return g;
}

inline AttributedGraph random_graph(std::mt19937_64& rng, int n, int dim,
                                    int coord_dim = 2) {
  std::vector<NodeAttr> nodes;
  for (int i = 0; i < n; ++i) {
    NodeAttr node;
    node.id = i;
    node.embedding = gaussian_vector(rng, dim);
    node.coords = uniform_vector(rng, coord_dim, 0.0, 1.0);
    nodes.push_back(std::move(node));
  }
  return graph_from_nodes(std::move(nodes));
}

// Node t of the result is node perm[t] of g; edges follow the nodes.
inline AttributedGraph permute_graph(const AttributedGraph& g,
                                     const std::vector<int>& perm) {
  AttributedGraph out;
  for (std::size_t t = 0; t < perm.size(); ++t) {
    NodeAttr node = g.nodes[static_cast<std::size_t>(perm[t])];
    node.id = static_cast<int>(t);
    out.nodes.push_back(std::move(node));
  }
  out.centroid = g.centroid;
  out.edges = EdgeMap(perm.size());
  for (std::size_t t = 0; t < perm.size(); ++t) {
    for (std::size_t u = 0; u < perm.size(); ++u) {
      if (t == u) continue;
      out.edges.set(static_cast<int>(t), static_cast<int>(u),
                    g.edges.relation(perm[t], perm[u]));
    }
  }
  return out;
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

struct Instance {
  AttributedGraph source;
  AttributedGraph target;
  std::vector<int> perm;  // target node t is a noisy copy of source perm[t]
};

// Source graph with Gaussian embeddings and unit-square coords; the target
// is a shuffled copy with sigma noise on embeddings and coords, and edges
// rebuilt from the noisy coords.
inline Instance noisy_instance(std::mt19937_64& rng, int n, int dim, double sigma) {
  Instance out;
  out.source = random_graph(rng, n, dim);
  out.perm = random_permutation(rng, n);
  std::vector<NodeAttr> nodes;
  for (int t = 0; t < n; ++t) {
    NodeAttr node = out.source.nodes[static_cast<std::size_t>(out.perm[t])];
    node.id = t;
    node.embedding += gaussian_vector(rng, dim, 1.0) * sigma;
    node.coords += gaussian_vector(rng, 2, 1.0) * sigma;
    nodes.push_back(std::move(node));
  }
  out.target = graph_from_nodes(std::move(nodes));
  return out;
}

inline MappingMatrix random_mapping(std::mt19937_64& rng, Eigen::Index ns,
                                    Eigen::Index nt) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  MappingMatrix m(ns, nt);
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index t = 0; t < nt; ++t) m(i, t) = u(rng);
  }
  return m;
}

// Cosine similarity with explicit loops; 0 for near-zero vectors.
inline double oracle_cosine(const Vector& a, const Vector& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na < 1e-12 || nb < 1e-12) return 0.0;
  return dot / (na * nb);
}

// Likelihood by direct quadruple summation over (i, j != i, i', j' != i').
inline double oracle_likelihood(const MappingMatrix& m, const AttributedGraph& s,
                                const AttributedGraph& t, double alpha) {
  const auto n = static_cast<int>(s.nodes.size());
  const auto nt = static_cast<int>(t.nodes.size());
  double edge = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int a = 0; a < nt; ++a) {
        for (int b = 0; b < nt; ++b) {
          if (b == a) continue;
          edge += m(i, a) * m(j, b) *
                  oracle_cosine(s.edges.relation(i, j), t.edges.relation(a, b));
        }
      }
    }
  }
  double node = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < nt; ++a) {
      node += m(i, a) * oracle_cosine(s.nodes[i].embedding, t.nodes[a].embedding);
    }
  }
  const double edge_term = n > 1 ? edge / (n * (n - 1.0)) : 0.0;
  return (1.0 - alpha) * edge_term + alpha * node / n;
}

inline double oracle_energy(const MappingMatrix& m, const AttributedGraph& s,
                            const AttributedGraph& t, double alpha, double beta) {
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index a = 0; a < m.cols(); ++a) {
      if (m(i, a) > 0.0) entropy += m(i, a) * std::log(m(i, a));
    }
  }
  return -oracle_likelihood(m, s, t, alpha) - entropy / beta;
}

// Compatibility entry by direct summation, for ga_step checks.
inline double oracle_compat(const MappingMatrix& m, const AttributedGraph& s,
                            const AttributedGraph& t, double alpha, int i, int a) {
  const auto n = static_cast<int>(s.nodes.size());
  const auto nt = static_cast<int>(t.nodes.size());
  double edge = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    for (int b = 0; b < nt; ++b) {
      if (b == a) continue;
      edge += m(i, a) * m(j, b) *
              oracle_cosine(s.edges.relation(i, j), t.edges.relation(a, b));
    }
  }
  const double edge_term = n > 1 ? edge / (2.0 * (n - 1)) : 0.0;
  return (1.0 - alpha) * edge_term +
         alpha * m(i, a) *
             oracle_cosine(s.nodes[i].embedding, t.nodes[a].embedding);
}

inline bool relative_close(double a, double b, double rel) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= rel * scale;
}

}  // namespace pam::testing

#endif  // PAM_TESTS_SUPPORT_HPP_

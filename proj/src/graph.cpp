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

#include "pam/graph.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

#include "pam/errors.hpp"

namespace pam {

EdgeMap::EdgeMap(std::size_t node_count)
    : n_(node_count), slots_(node_count * node_count) {}

std::size_t EdgeMap::slot(int from, int to) const {
  if (from < 0 || to < 0 || static_cast<std::size_t>(from) >= n_ ||
      static_cast<std::size_t>(to) >= n_) {
    std::ostringstream msg;
    msg << "edge (" << from << "," << to << ") out of range for " << n_
        << " nodes";
    throw InvalidInput(msg.str());
  }
  if (from == to) {
    throw InvalidInput("self-edge requested for node " + std::to_string(from));
  }
  return static_cast<std::size_t>(from) * n_ + static_cast<std::size_t>(to);
}

std::size_t EdgeMap::edge_count() const {
  std::size_t count = 0;
  for (const auto& s : slots_) {
    if (s) ++count;
  }
  return count;
}

void EdgeMap::set(int from, int to, Vector relation) {
  slots_[slot(from, to)] = std::move(relation);
}

void EdgeMap::erase(int from, int to) { slots_[slot(from, to)].reset(); }

bool EdgeMap::contains(int from, int to) const {
  return slots_[slot(from, to)].has_value();
}

const Vector& EdgeMap::relation(int from, int to) const {
  const auto& s = slots_[slot(from, to)];
  if (!s) {
    throw InvalidInput("missing edge (" + std::to_string(from) + "," +
                       std::to_string(to) + ")");
  }
  return *s;
}

std::vector<EdgeAttr> EdgeMap::list() const {
  std::vector<EdgeAttr> out;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const auto& s = slots_[i * n_ + j];
      if (s) out.push_back({static_cast<int>(i), static_cast<int>(j), *s});
    }
  }
  return out;
}

bool EdgeMap::operator==(const EdgeMap& other) const {
  if (n_ != other.n_) return false;
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    const auto& a = slots_[k];
    const auto& b = other.slots_[k];
    if (a.has_value() != b.has_value()) return false;
    if (a && (a->size() != b->size() || *a != *b)) return false;
  }
  return true;
}

SolverConfig SolverConfig::defaults_2d() { return SolverConfig{}; }

SolverConfig SolverConfig::defaults_3d() {
  SolverConfig c;
  c.alpha = 0.5;
  return c;
}

void check_config(const SolverConfig& config) {
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) {
    throw InvalidInput("alpha must lie in [0,1]");
  }
  if (!(config.beta0 > 0.0) || !std::isfinite(config.beta0)) {
    throw InvalidInput("beta0 must be positive");
  }
  if (config.iterations < 1) {
    throw InvalidInput("iterations must be positive");
  }
  if (!(config.beta_increment > 0.0) || !std::isfinite(config.beta_increment)) {
    throw InvalidInput("beta_increment must be positive");
  }
  if (!(config.early_stop_delta >= 0.0)) {
    throw InvalidInput("early_stop_delta must be nonnegative");
  }
}

double cosine_similarity(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw InvalidInput("cosine_similarity: dimension mismatch (" +
                       std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()) + ")");
  }
  // Dividing by the largest magnitude first keeps huge or tiny vectors from
  // overflowing the norms.
  const double sa = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
  const double sb = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
  if (!(sa > 0.0) || !(sb > 0.0)) return 0.0;
  const Vector ua = a / sa;
  const Vector ub = b / sb;
  const double na = ua.norm();
  const double nb = ub.norm();
  if (sa * na < kDegenerateNorm || sb * nb < kDegenerateNorm) return 0.0;
  return ua.dot(ub) / (na * nb);
}

Matrix node_similarity_matrix(const AttributedGraph& source,
                              const AttributedGraph& target) {
  const auto ns = static_cast<Eigen::Index>(source.size());
  const auto nt = static_cast<Eigen::Index>(target.size());
  Matrix sim(ns, nt);
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index t = 0; t < nt; ++t) {
      sim(i, t) = cosine_similarity(source.nodes[i].embedding,
                                    target.nodes[t].embedding);
    }
  }
  return sim;
}

double edge_similarity(const AttributedGraph& source,
                       const AttributedGraph& target, int i, int j, int i2,
                       int j2) {
  return cosine_similarity(source.edges.relation(i, j),
                           target.edges.relation(i2, j2));
}

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace

std::vector<std::string> validate_graph(const AttributedGraph& graph) {
  std::vector<std::string> out;
  const std::size_t n = graph.nodes.size();
  if (n == 0) {
    out.emplace_back("empty graph");
    return out;
  }

  std::unordered_set<int> seen;
  for (std::size_t k = 0; k < n; ++k) {
    const NodeAttr& node = graph.nodes[k];
    if (!seen.insert(node.id).second) {
      out.push_back("id collision: node id " + std::to_string(node.id) +
                    " appears more than once");
    }
    if (node.id < 0 || static_cast<std::size_t>(node.id) >= n) {
      out.push_back("node id " + std::to_string(node.id) + " out of range");
    }
    const NodeAttr& first = graph.nodes.front();
    if (node.embedding.size() != first.embedding.size()) {
      out.push_back("embedding dimension mismatch at node " +
                    std::to_string(k));
    }
    if (node.coords.size() != first.coords.size()) {
      out.push_back("coords dimension mismatch at node " + std::to_string(k));
    }
    if (node.coords.size() != 2 && node.coords.size() != 3) {
      out.push_back("coords of node " + std::to_string(k) +
                    " must have length 2 or 3");
    }
    if (!all_finite(node.embedding) || !all_finite(node.coords)) {
      out.push_back("non-finite attribute at node " + std::to_string(k));
    }
  }

  if (graph.edges.node_count() != n) {
    out.push_back("edge map sized for " +
                  std::to_string(graph.edges.node_count()) + " nodes, graph has " +
                  std::to_string(n));
  } else {
    Eigen::Index rel_dim = -1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const int a = static_cast<int>(i);
        const int b = static_cast<int>(j);
        if (!graph.edges.contains(a, b)) {
          out.push_back("missing edge (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
          continue;
        }
        const Vector& r = graph.edges.relation(a, b);
        if (rel_dim < 0) rel_dim = r.size();
        if (r.size() != rel_dim) {
          out.push_back("relation dimension mismatch at edge (" +
                        std::to_string(i) + "," + std::to_string(j) + ")");
        }
        if (!all_finite(r)) {
          out.push_back("non-finite relation at edge (" + std::to_string(i) +
                        "," + std::to_string(j) + ")");
        }
      }
    }
  }

  if (graph.centroid.size() != graph.nodes.front().coords.size()) {
    out.emplace_back("centroid dimension does not match node coords");
  } else if (!all_finite(graph.centroid)) {
    out.emplace_back("non-finite centroid");
  }
  return out;
}

std::vector<std::string> validate_pair(const AttributedGraph& source,
                                       const AttributedGraph& target) {
  std::vector<std::string> out;
  for (const auto& v : validate_graph(source)) out.push_back("source: " + v);
  for (const auto& v : validate_graph(target)) out.push_back("target: " + v);
  if (!out.empty()) return out;

  if (source.nodes.front().embedding.size() !=
      target.nodes.front().embedding.size()) {
    out.emplace_back("embedding dimension differs between source and target");
  }
  if (source.nodes.front().coords.size() != target.nodes.front().coords.size()) {
    out.emplace_back("coords dimension differs between source and target");
  }
  if (source.size() > 1 && target.size() > 1 &&
      source.edges.relation(0, 1).size() != target.edges.relation(0, 1).size()) {
    out.emplace_back("relation dimension differs between source and target");
  }
  return out;
}

}  // namespace pam

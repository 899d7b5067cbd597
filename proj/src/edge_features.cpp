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

#include "pam/edge_features.hpp"

#include <string>

#include "pam/errors.hpp"

namespace pam {

namespace {

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) {
    throw InvalidInput(std::string(what) + ": dimension mismatch (" +
                       std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()) + ")");
  }
}

void require_edge_input(const std::vector<NodeAttr>& nodes, const Centroid& c0,
                        Eigen::Index dim, const char* what) {
  if (nodes.size() < 2) {
    throw InvalidInput(std::string(what) + ": need at least 2 nodes");
  }
  for (const auto& n : nodes) {
    if (n.coords.size() != dim) {
      throw InvalidInput(std::string(what) + ": expected " +
                         std::to_string(dim) + "D coords at node " +
                         std::to_string(n.id));
    }
  }
  if (c0.coords.size() != dim) {
    throw InvalidInput(std::string(what) + ": centroid has wrong dimension");
  }
}

}  // namespace

Centroid compute_centroid(const std::vector<Vector>& points) {
  if (points.empty()) throw InvalidInput("compute_centroid: empty point list");
  Vector sum = Vector::Zero(points.front().size());
  for (const auto& p : points) {
    require_same_dim(p, sum, "compute_centroid");
    sum += p;
  }
  return {sum / static_cast<double>(points.size())};
}

Vector angular_relation(const Vector& ci, const Vector& cj, const Vector& c0) {
  require_same_dim(ci, cj, "angular_relation");
  require_same_dim(ci, c0, "angular_relation");
  const Vector ij = ci - cj;
  const Vector i0 = ci - c0;
  const Vector j0 = cj - c0;
  Vector r(3);
  r << cosine_similarity(ij, i0), cosine_similarity(i0, j0),
      cosine_similarity(ij, j0);
  return r;
}

Vector vector_diff_relation(const Vector& ci, const Vector& cj, const Vector& c0,
                            const Vector& range) {
  require_same_dim(ci, cj, "vector_diff_relation");
  require_same_dim(ci, c0, "vector_diff_relation");
  require_same_dim(ci, range, "vector_diff_relation");
  Vector divisor = range;
  for (Eigen::Index k = 0; k < divisor.size(); ++k) {
    if (divisor[k] == 0.0) divisor[k] = 1.0;
  }
  const Eigen::Index d = ci.size();
  Vector r(3 * d);
  r.segment(0, d) = (cj - ci).cwiseQuotient(divisor);
  r.segment(d, d) = (ci - c0).cwiseQuotient(divisor);
  r.segment(2 * d, d) = (cj - c0).cwiseQuotient(divisor);
  return r;
}

Vector coordinate_range(const std::vector<NodeAttr>& nodes) {
  if (nodes.empty()) throw InvalidInput("coordinate_range: no nodes");
  Vector lo = nodes.front().coords;
  Vector hi = nodes.front().coords;
  for (const auto& n : nodes) {
    require_same_dim(n.coords, lo, "coordinate_range");
    lo = lo.cwiseMin(n.coords);
    hi = hi.cwiseMax(n.coords);
  }
  Vector range = hi - lo;
  for (Eigen::Index k = 0; k < range.size(); ++k) {
    if (range[k] == 0.0) range[k] = 1.0;
  }
  return range;
}

EdgeMap build_edges_2d(const std::vector<NodeAttr>& nodes, const Centroid& c0) {
  require_edge_input(nodes, c0, 2, "build_edges_2d");
  const Vector range = coordinate_range(nodes);
  EdgeMap edges(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i == j) continue;
      const Vector& ci = nodes[i].coords;
      const Vector& cj = nodes[j].coords;
      Vector r(9);
      r << angular_relation(ci, cj, c0.coords),
          vector_diff_relation(ci, cj, c0.coords, range);
      edges.set(static_cast<int>(i), static_cast<int>(j), std::move(r));
    }
  }
  return edges;
}

EdgeMap build_edges_3d(const std::vector<NodeAttr>& nodes, const Centroid& c0) {
  require_edge_input(nodes, c0, 3, "build_edges_3d");
  EdgeMap edges(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i == j) continue;
      edges.set(static_cast<int>(i), static_cast<int>(j),
                angular_relation(nodes[i].coords, nodes[j].coords, c0.coords));
    }
  }
  return edges;
}

}  // namespace pam

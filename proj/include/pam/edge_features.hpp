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

#ifndef PAM_EDGE_FEATURES_HPP_
#define PAM_EDGE_FEATURES_HPP_

#include <vector>

#include "pam/graph.hpp"

namespace pam {

// Spatial relation vectors between pairs of parts.
//
// Every edge (i, j) is described relative to the centroid c0 of the whole
// object. The angular relation holds the cosines of the three angles in the
// triangle-like configuration (ci - cj, ci - c0, cj - c0):
//
//   [cos(ci - cj, ci - c0), cos(ci - c0, cj - c0), cos(ci - cj, cj - c0)]
//
// and is invariant to translation, positive scaling and rotation. The
// vector-difference relation keeps the raw offsets
//
//   [cj - ci, ci - c0, cj - c0] / range
//
// where range is the per-axis extent of the node coordinates of one graph.
// 2D graphs concatenate both (3 + 6 = 9 components); 3D graphs use the
// angular relation only.

struct Centroid {
  Vector coords;
};

// Componentwise mean. Throws InvalidInput on an empty list or mixed lengths.
Centroid compute_centroid(const std::vector<Vector>& points);

Vector angular_relation(const Vector& ci, const Vector& cj, const Vector& c0);

// `range` components that are zero are replaced by 1.
Vector vector_diff_relation(const Vector& ci, const Vector& cj, const Vector& c0,
                            const Vector& range);

// Per-axis max - min over the node coordinates, zero components replaced by 1.
Vector coordinate_range(const std::vector<NodeAttr>& nodes);

EdgeMap build_edges_2d(const std::vector<NodeAttr>& nodes, const Centroid& c0);
EdgeMap build_edges_3d(const std::vector<NodeAttr>& nodes, const Centroid& c0);

}  // namespace pam

#endif  // PAM_EDGE_FEATURES_HPP_

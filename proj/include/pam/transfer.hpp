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

#ifndef PAM_TRANSFER_HPP_
#define PAM_TRANSFER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "pam/graph.hpp"

namespace pam {

struct Marker {
  std::string color;
  std::optional<Vector> coords3d;
  std::optional<Vector> coords2d;
};

// Look-at pinhole camera. Image x grows to the right, y grows downward.
struct Camera {
  Vector position = Vector::Zero(3);
  Vector look_at = Vector::Zero(3);
  Vector up = Vector::Unit(3, 1);
  double focal_px = 1.0;
  Vector principal_point = Vector::Zero(2);
  int width = 0;
  int height = 0;
};

// Throws InvalidInput if the camera has degenerate axes or a nonpositive focal
// length.
void check_camera(const Camera& cam);

// Label of the hard-assigned source for every target node.
std::vector<std::string> transfer_labels(const MappingMatrix& mapping,
                                         const std::vector<std::string>& source_labels);

// tgt_center + scale * (src_marker - src_center).
Vector transfer_marker(const Vector& src_marker, const Vector& src_center,
                       const Vector& tgt_center, double scale = 1.0);

// Pixel coordinates of p. Throws ProjectionError unless p is strictly in
// front of the camera.
Vector project_point(const Vector& p, const Camera& cam);

struct MarkerTransferOptions {
  // Scale the source offset by target/source cluster spread.
  bool scale_by_spread = false;
};

// Target cluster for a source cluster: among targets whose hard assignment is
// `source`, the one with the largest mapping strength; if none, the largest
// entry of the source row. Lowest index on ties.
int mapped_target(const MappingMatrix& mapping, int source);

// Source marker -> closest source part -> mapped target part -> offset copied
// onto the target part center -> projected with `cam`. Node coordinates of
// both graphs act as the cluster centers.
Marker map_marker_end_to_end(const Marker& source_marker,
                             const AttributedGraph& source,
                             const AttributedGraph& target,
                             const MappingMatrix& mapping, const Camera& cam,
                             const MarkerTransferOptions& options = {});

}  // namespace pam

#endif  // PAM_TRANSFER_HPP_

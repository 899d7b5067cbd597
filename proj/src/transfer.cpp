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

#include "pam/transfer.hpp"

#include <cmath>
#include <sstream>

#include "pam/clustering.hpp"
#include "pam/errors.hpp"
#include "pam/solver.hpp"

namespace pam {

namespace {

Eigen::Vector3d as3(const Vector& v, const char* what) {
  if (v.size() != 3) {
    throw InvalidInput(std::string(what) + " must be a 3D vector");
  }
  return {v[0], v[1], v[2]};
}

}  // namespace

void check_camera(const Camera& cam) {
  const Eigen::Vector3d pos = as3(cam.position, "camera position");
  const Eigen::Vector3d at = as3(cam.look_at, "camera look_at");
  const Eigen::Vector3d up = as3(cam.up, "camera up");
  if (cam.principal_point.size() != 2) {
    throw InvalidInput("camera principal_point must be 2D");
  }
  if (!(cam.focal_px > 0.0)) throw InvalidInput("camera focal_px must be > 0");
  const Eigen::Vector3d view = at - pos;
  if (view.norm() < kDegenerateNorm) {
    throw InvalidInput("camera look_at coincides with its position");
  }
  if (view.normalized().cross(up).norm() < 1e-9) {
    throw InvalidInput("camera up is parallel to the view direction");
  }
}

std::vector<std::string> transfer_labels(
    const MappingMatrix& mapping, const std::vector<std::string>& source_labels) {
  if (static_cast<Eigen::Index>(source_labels.size()) != mapping.rows()) {
    throw InvalidInput("transfer_labels: expected " +
                       std::to_string(mapping.rows()) + " source labels, got " +
                       std::to_string(source_labels.size()));
  }
  std::vector<std::string> out;
  for (int s : hard_assignment(mapping)) {
    out.push_back(source_labels[static_cast<std::size_t>(s)]);
  }
  return out;
}

Vector transfer_marker(const Vector& src_marker, const Vector& src_center,
                       const Vector& tgt_center, double scale) {
  if (src_marker.size() != src_center.size() ||
      src_marker.size() != tgt_center.size()) {
    throw InvalidInput("transfer_marker: dimension mismatch");
  }
  return tgt_center + scale * (src_marker - src_center);
}

Vector project_point(const Vector& p, const Camera& cam) {
  check_camera(cam);
  const Eigen::Vector3d pos = as3(cam.position, "camera position");
  const Eigen::Vector3d forward = (as3(cam.look_at, "look_at") - pos).normalized();
  const Eigen::Vector3d right = forward.cross(as3(cam.up, "up")).normalized();
  const Eigen::Vector3d down = forward.cross(right);

  const Eigen::Vector3d rel = as3(p, "projected point") - pos;
  const double depth = rel.dot(forward);
  if (!(depth > 0.0)) {
    std::ostringstream msg;
    msg << "point (" << p.transpose() << ") is not in front of the camera";
    throw ProjectionError(msg.str());
  }
  Vector px(2);
  px[0] = cam.principal_point[0] + cam.focal_px * rel.dot(right) / depth;
  px[1] = cam.principal_point[1] + cam.focal_px * rel.dot(down) / depth;
  return px;
}

int mapped_target(const MappingMatrix& mapping, int source) {
  if (source < 0 || source >= mapping.rows()) {
    throw InvalidInput("mapped_target: source index out of range");
  }
  const std::vector<int> assign = hard_assignment(mapping);
  int best = -1;
  for (std::size_t t = 0; t < assign.size(); ++t) {
    if (assign[t] != source) continue;
    const auto ti = static_cast<Eigen::Index>(t);
    if (best < 0 || mapping(source, ti) > mapping(source, best)) {
      best = static_cast<int>(t);
    }
  }
  if (best >= 0) return best;
  Eigen::Index col = 0;
  for (Eigen::Index t = 1; t < mapping.cols(); ++t) {
    if (mapping(source, t) > mapping(source, col)) col = t;
  }
  return static_cast<int>(col);
}

Marker map_marker_end_to_end(const Marker& source_marker,
                             const AttributedGraph& source,
                             const AttributedGraph& target,
                             const MappingMatrix& mapping, const Camera& cam,
                             const MarkerTransferOptions& options) {
  if (!source_marker.coords3d) {
    throw InvalidInput("marker '" + source_marker.color +
                       "' has no 3D coordinates");
  }
  if (mapping.rows() != static_cast<Eigen::Index>(source.size()) ||
      mapping.cols() != static_cast<Eigen::Index>(target.size())) {
    throw InvalidInput("map_marker_end_to_end: mapping shape mismatch");
  }
  std::vector<Vector> centers;
  for (const auto& n : source.nodes) centers.push_back(n.coords);
  const int s = closest_cluster(*source_marker.coords3d, centers);
  const int t = mapped_target(mapping, s);

  const NodeAttr& src = source.nodes[static_cast<std::size_t>(s)];
  const NodeAttr& tgt = target.nodes[static_cast<std::size_t>(t)];
  double scale = 1.0;
  if (options.scale_by_spread) {
    if (!src.spread || !tgt.spread) {
      throw InvalidInput("scaled marker transfer needs node spreads");
    }
    scale = *src.spread > 0.0 ? *tgt.spread / *src.spread : 1.0;
  }

  Marker out;
  out.color = source_marker.color;
  out.coords3d = transfer_marker(*source_marker.coords3d, src.coords,
                                 tgt.coords, scale);
  out.coords2d = project_point(*out.coords3d, cam);
  return out;
}

}  // namespace pam

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

#ifndef PAM_PROBLEM_HPP_
#define PAM_PROBLEM_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pam/graph.hpp"
#include "pam/transfer.hpp"

namespace pam {

// Marker placements collected from people for one problem, keyed by marker
// color, in target-image pixels.
struct HumanPlacements {
  std::string condition;
  std::map<std::string, std::vector<Vector>> by_color;
};

struct ProblemInstance {
  std::string id;
  std::string category;
  AttributedGraph source;
  AttributedGraph target;
  // Correct source node for every target node.
  std::optional<std::vector<int>> ground_truth;
  std::vector<Marker> markers;   // placed on the source object
  std::optional<Camera> camera;  // renders the target object
  std::optional<HumanPlacements> human;
};

// Source labels, or "n<i>" for unlabeled nodes.
std::vector<std::string> source_labels(const ProblemInstance& problem);

}  // namespace pam

#endif  // PAM_PROBLEM_HPP_

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

#ifndef PAM_IO_HPP_
#define PAM_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "pam/eval.hpp"
#include "pam/problem.hpp"

namespace pam {

// Interchange files are UTF-8 JSON; see docs/file-format.md. Numbers are
// written in shortest round-trip form so that save followed by load
// reproduces every double bit for bit.

inline constexpr const char* kProblemSchema = "pam-problems/1";
inline constexpr const char* kSolutionSchema = "pam-solution/1";
inline constexpr const char* kReportSchema = "pam-report/1";

enum class RelationRecipe { k2dFull, k3dAngular };

const char* recipe_name(RelationRecipe recipe);
RelationRecipe parse_recipe(const std::string& name);

struct ProblemFile {
  RelationRecipe recipe = RelationRecipe::k2dFull;
  int embedding_dim = 0;
  int coord_dim = 2;
  std::vector<ProblemInstance> problems;
};

// Clustering knobs applied to point-set payloads at load time.
struct LoadOptions {
  int k = 8;
  int restarts = 10;
  std::uint64_t seed = 0;
};

// Everything a command ran with; echoed into every output file.
struct RunConfig {
  SolverConfig solver;
  bool alpha_set = false;  // false: alpha follows the relation recipe
  LoadOptions load;
  AccuracyScheme scheme = AccuracyScheme::kPooled;
  HumanOptions human;
  int jobs = 1;
};

// Throws DataError with line/column and the enclosing problem id on malformed
// JSON, and with a field path on schema violations.
ProblemFile parse_problem_file(const std::string& text,
                               const LoadOptions& options = {});
ProblemFile load_problem_file(const std::string& path,
                              const LoadOptions& options = {});

std::string serialize_problem_file(const ProblemFile& file);
void save_problem_file(const std::string& path, const ProblemFile& file);

std::string read_text_file(const std::string& path);

// Writes to a temporary file next to `path`, then renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

nlohmann::json config_to_json(const RunConfig& config);
nlohmann::json report_to_json(const EvalReport& report);

struct SolveOutputOptions {
  bool emit_soft = false;
};

nlohmann::json solutions_to_json(const ProblemFile& file,
                                 const std::vector<ProblemSolution>& solutions,
                                 const RunConfig& config,
                                 const SolveOutputOptions& options);

// Hard assignments from a solution file, in file order, checked against the
// problem ids of `file`.
std::vector<Prediction> load_predictions(const std::string& path,
                                         const ProblemFile& file);

}  // namespace pam

#endif  // PAM_IO_HPP_

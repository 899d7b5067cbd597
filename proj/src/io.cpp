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

#include "pam/io.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "pam/clustering.hpp"
#include "pam/edge_features.hpp"
#include "pam/errors.hpp"

namespace pam {

using nlohmann::json;

const char* recipe_name(RelationRecipe recipe) {
  return recipe == RelationRecipe::k2dFull ? "2d-full" : "3d-angular";
}

RelationRecipe parse_recipe(const std::string& name) {
  if (name == "2d-full") return RelationRecipe::k2dFull;
  if (name == "3d-angular") return RelationRecipe::k3dAngular;
  throw DataError("unknown relation recipe '" + name +
                  "' (expected 2d-full or 3d-angular)");
}

namespace {

// ---------------------------------------------------------------------------
// Reading helpers. Every failure names the JSON path it happened at.

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw DataError(path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

const json* optional_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int read_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Vector read_vector(const json& j, const std::string& path,
                   Eigen::Index expected = -1) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  if (expected >= 0 && static_cast<Eigen::Index>(j.size()) != expected) {
    fail(path, "expected " + std::to_string(expected) + " values, got " +
                   std::to_string(j.size()));
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    v[static_cast<Eigen::Index>(k)] =
        read_number(j[k], path + "[" + std::to_string(k) + "]");
  }
  return v;
}

std::vector<Vector> read_vector_list(const json& j, const std::string& path,
                                     Eigen::Index expected = -1) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<Vector> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(read_vector(j[k], path + "[" + std::to_string(k) + "]", expected));
  }
  return out;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

struct FileShape {
  RelationRecipe recipe;
  int embedding_dim;
  int coord_dim;
};

void finish_graph(AttributedGraph& g, const FileShape& shape,
                  const std::string& path) {
  if (g.nodes.size() < 2) fail(path, "a graph needs at least 2 nodes");
  const Centroid c0{g.centroid};
  g.edges = shape.recipe == RelationRecipe::k2dFull ? build_edges_2d(g.nodes, c0)
                                                    : build_edges_3d(g.nodes, c0);
  const auto violations = validate_graph(g);
  if (!violations.empty()) {
    std::string all;
    for (const auto& v : violations) all += (all.empty() ? "" : "; ") + v;
    fail(path, "invalid graph: " + all);
  }
}

AttributedGraph read_graph(const json& j, const FileShape& shape,
                           const LoadOptions& options, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  AttributedGraph g;
  const json* points = optional_field(j, "points");
  const json* nodes = optional_field(j, "nodes");
  if ((points != nullptr) == (nodes != nullptr)) {
    fail(path, "exactly one of 'nodes' or 'points' is required");
  }

  if (points) {
    if (shape.recipe != RelationRecipe::k3dAngular) {
      fail(path + ".points", "point sets require the 3d-angular recipe");
    }
    PointSet ps;
    ps.coords = read_vector_list(field(*points, "coords", path + ".points"),
                                 path + ".points.coords", shape.coord_dim);
    ps.embeddings =
        read_vector_list(field(*points, "embeddings", path + ".points"),
                         path + ".points.embeddings", shape.embedding_dim);
    if (ps.coords.size() != ps.embeddings.size()) {
      fail(path + ".points", "coords and embeddings differ in length");
    }
    if (ps.coords.empty()) fail(path + ".points", "empty point set");
    try {
      const Clustering cl =
          cluster_point_set(ps, options.k, options.seed, options.restarts);
      PartNodes parts = clusters_to_nodes(ps, cl);
      g.nodes = std::move(parts.nodes);
      g.centroid = std::move(parts.centroid.coords);
    } catch (const InvalidInput& e) {
      fail(path + ".points", e.what());
    }
  } else {
    if (!nodes->is_array()) fail(path + ".nodes", "expected an array");
    for (std::size_t k = 0; k < nodes->size(); ++k) {
      const std::string np = path + ".nodes[" + std::to_string(k) + "]";
      const json& jn = (*nodes)[k];
      NodeAttr n;
      const json* id = optional_field(jn, "id");
      n.id = id ? read_int(*id, np + ".id") : static_cast<int>(k);
      n.embedding = read_vector(field(jn, "embedding", np), np + ".embedding",
                                shape.embedding_dim);
      n.coords = read_vector(field(jn, "coords", np), np + ".coords",
                             shape.coord_dim);
      if (const json* label = optional_field(jn, "label")) {
        n.label = read_string(*label, np + ".label");
      }
      if (const json* spread = optional_field(jn, "spread")) {
        n.spread = read_number(*spread, np + ".spread");
      }
      g.nodes.push_back(std::move(n));
    }
    std::vector<Vector> coords;
    for (const auto& n : g.nodes) coords.push_back(n.coords);
    if (coords.empty()) fail(path + ".nodes", "no nodes");
    g.centroid = compute_centroid(coords).coords;
  }

  if (const json* c = optional_field(j, "centroid")) {
    g.centroid = read_vector(*c, path + ".centroid", shape.coord_dim);
  }
  finish_graph(g, shape, path);
  return g;
}

Camera read_camera(const json& j, const std::string& path) {
  Camera cam;
  cam.position = read_vector(field(j, "position", path), path + ".position", 3);
  cam.look_at = read_vector(field(j, "look_at", path), path + ".look_at", 3);
  cam.up = read_vector(field(j, "up", path), path + ".up", 3);
  cam.focal_px = read_number(field(j, "focal_px", path), path + ".focal_px");
  cam.principal_point = read_vector(field(j, "principal_point", path),
                                    path + ".principal_point", 2);
  const json& size = field(j, "image_size", path);
  if (!size.is_array() || size.size() != 2) {
    fail(path + ".image_size", "expected [width, height]");
  }
  cam.width = read_int(size[0], path + ".image_size[0]");
  cam.height = read_int(size[1], path + ".image_size[1]");
  try {
    check_camera(cam);
  } catch (const InvalidInput& e) {
    fail(path, e.what());
  }
  return cam;
}

Marker read_marker(const json& j, const std::string& path) {
  Marker m;
  m.color = read_string(field(j, "color", path), path + ".color");
  if (const json* c = optional_field(j, "coords3d")) {
    m.coords3d = read_vector(*c, path + ".coords3d", 3);
  }
  if (const json* c = optional_field(j, "coords2d")) {
    m.coords2d = read_vector(*c, path + ".coords2d", 2);
  }
  if (!m.coords3d && !m.coords2d) {
    fail(path, "a marker needs coords3d or coords2d");
  }
  return m;
}

HumanPlacements read_human(const json& j, const std::string& path) {
  HumanPlacements h;
  if (const json* c = optional_field(j, "condition")) {
    h.condition = read_string(*c, path + ".condition");
  }
  const json& placements = field(j, "placements", path);
  if (!placements.is_object()) fail(path + ".placements", "expected an object");
  for (const auto& [color, list] : placements.items()) {
    h.by_color[color] =
        read_vector_list(list, path + ".placements." + color, 2);
  }
  return h;
}

ProblemInstance read_problem(const json& j, const FileShape& shape,
                             const LoadOptions& options, const std::string& path) {
  ProblemInstance p;
  p.id = read_string(field(j, "id", path), path + ".id");
  const std::string ctx = path + " ('" + p.id + "')";
  if (const json* c = optional_field(j, "category")) {
    p.category = read_string(*c, ctx + ".category");
  }
  p.source = read_graph(field(j, "source", ctx), shape, options, ctx + ".source");
  p.target = read_graph(field(j, "target", ctx), shape, options, ctx + ".target");

  if (const json* gt = optional_field(j, "ground_truth")) {
    if (!gt->is_array() || gt->size() != p.target.size()) {
      fail(ctx + ".ground_truth",
           "expected one source index per target node (" +
               std::to_string(p.target.size()) + ")");
    }
    std::vector<int> v;
    for (std::size_t k = 0; k < gt->size(); ++k) {
      const std::string ep = ctx + ".ground_truth[" + std::to_string(k) + "]";
      const int s = read_int((*gt)[k], ep);
      if (s < 0 || static_cast<std::size_t>(s) >= p.source.size()) {
        fail(ep, "source index out of range");
      }
      v.push_back(s);
    }
    p.ground_truth = std::move(v);
  }
  if (const json* ms = optional_field(j, "markers")) {
    if (!ms->is_array()) fail(ctx + ".markers", "expected an array");
    for (std::size_t k = 0; k < ms->size(); ++k) {
      p.markers.push_back(
          read_marker((*ms)[k], ctx + ".markers[" + std::to_string(k) + "]"));
    }
  }
  if (const json* cam = optional_field(j, "camera")) {
    p.camera = read_camera(*cam, ctx + ".camera");
  }
  if (const json* h = optional_field(j, "human")) {
    p.human = read_human(*h, ctx + ".human");
  }
  return p;
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text,
                                                    std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k < byte; ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Describes the problem record that encloses `byte`, from the last "id" key.
std::string enclosing_record(const std::string& text, std::size_t byte) {
  static const std::regex id_re(R"re("id"\s*:\s*"([^"]*)")re");
  const std::string prefix = text.substr(0, std::min(byte, text.size()));
  std::size_t count = 0;
  std::string last;
  for (auto it = std::sregex_iterator(prefix.begin(), prefix.end(), id_re);
       it != std::sregex_iterator(); ++it) {
    ++count;
    last = (*it)[1].str();
  }
  if (count == 0) return "before the first problem record";
  return "in problem record #" + std::to_string(count - 1) + " ('" + last + "')";
}

json graph_to_json(const AttributedGraph& g) {
  json nodes = json::array();
  for (const auto& n : g.nodes) {
    json jn;
    jn["id"] = n.id;
    jn["embedding"] = vector_json(n.embedding);
    jn["coords"] = vector_json(n.coords);
    if (n.label) jn["label"] = *n.label;
    if (n.spread) jn["spread"] = *n.spread;
    nodes.push_back(std::move(jn));
  }
  return {{"nodes", std::move(nodes)}, {"centroid", vector_json(g.centroid)}};
}

json marker_json(const Marker& m) {
  json j;
  j["color"] = m.color;
  if (m.coords3d) j["coords3d"] = vector_json(*m.coords3d);
  if (m.coords2d) j["coords2d"] = vector_json(*m.coords2d);
  return j;
}

json camera_json(const Camera& c) {
  return {{"position", vector_json(c.position)},
          {"look_at", vector_json(c.look_at)},
          {"up", vector_json(c.up)},
          {"focal_px", c.focal_px},
          {"principal_point", vector_json(c.principal_point)},
          {"image_size", {c.width, c.height}}};
}

json problem_to_json(const ProblemInstance& p) {
  json j;
  j["id"] = p.id;
  j["category"] = p.category;
  j["source"] = graph_to_json(p.source);
  j["target"] = graph_to_json(p.target);
  if (p.ground_truth) j["ground_truth"] = *p.ground_truth;
  if (!p.markers.empty()) {
    json ms = json::array();
    for (const auto& m : p.markers) ms.push_back(marker_json(m));
    j["markers"] = std::move(ms);
  }
  if (p.camera) j["camera"] = camera_json(*p.camera);
  if (p.human) {
    json placements = json::object();
    for (const auto& [color, list] : p.human->by_color) {
      json a = json::array();
      for (const auto& v : list) a.push_back(vector_json(v));
      placements[color] = std::move(a);
    }
    j["human"] = {{"condition", p.human->condition},
                  {"placements", std::move(placements)}};
  }
  return j;
}

}  // namespace

ProblemFile parse_problem_file(const std::string& text, const LoadOptions& options) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte);
    std::ostringstream msg;
    msg << "parse error at line " << line << ", column " << col << " "
        << enclosing_record(text, e.byte) << ": " << e.what();
    throw DataError(msg.str());
  }

  const std::string version =
      read_string(field(root, "schema_version", "$"), "$.schema_version");
  if (version != kProblemSchema) {
    throw DataError("schema version mismatch: file has '" + version +
                    "', expected '" + kProblemSchema + "'");
  }
  ProblemFile file;
  file.recipe = parse_recipe(
      read_string(field(root, "relation_recipe", "$"), "$.relation_recipe"));
  file.embedding_dim =
      read_int(field(root, "embedding_dim", "$"), "$.embedding_dim");
  file.coord_dim = read_int(field(root, "coord_dim", "$"), "$.coord_dim");
  if (file.embedding_dim < 1) fail("$.embedding_dim", "must be positive");
  const int expected_dim = file.recipe == RelationRecipe::k2dFull ? 2 : 3;
  if (file.coord_dim != expected_dim) {
    fail("$.coord_dim", "recipe " + std::string(recipe_name(file.recipe)) +
                            " requires coord_dim " + std::to_string(expected_dim));
  }

  const FileShape shape{file.recipe, file.embedding_dim, file.coord_dim};
  const json& problems = field(root, "problems", "$");
  if (!problems.is_array()) fail("$.problems", "expected an array");
  for (std::size_t k = 0; k < problems.size(); ++k) {
    file.problems.push_back(read_problem(
        problems[k], shape, options, "$.problems[" + std::to_string(k) + "]"));
  }
  return file;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ProblemFile load_problem_file(const std::string& path, const LoadOptions& options) {
  const std::string text = read_text_file(path);
  try {
    return parse_problem_file(text, options);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string serialize_problem_file(const ProblemFile& file) {
  json root;
  root["schema_version"] = kProblemSchema;
  root["relation_recipe"] = recipe_name(file.recipe);
  root["embedding_dim"] = file.embedding_dim;
  root["coord_dim"] = file.coord_dim;
  json problems = json::array();
  for (const auto& p : file.problems) problems.push_back(problem_to_json(p));
  root["problems"] = std::move(problems);
  return root.dump(1) + "\n";
}

void save_problem_file(const std::string& path, const ProblemFile& file) {
  write_file_atomic(path, serialize_problem_file(file));
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw DataError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw DataError("cannot move output into '" + path + "': " + ec.message());
  }
}

nlohmann::json config_to_json(const RunConfig& config) {
  const SolverConfig& s = config.solver;
  return {{"alpha", s.alpha},
          {"beta0", s.beta0},
          {"iterations", s.iterations},
          {"beta_increment", s.beta_increment},
          {"early_stop_delta", s.early_stop_delta},
          {"k", config.load.k},
          {"restarts", config.load.restarts},
          {"seed", config.load.seed},
          {"scheme",
           config.scheme == AccuracyScheme::kBalanced ? "balanced" : "pooled"},
          {"human_k", config.human.k},
          {"scale_markers", config.human.transfer.scale_by_spread}};
}

nlohmann::json report_to_json(const EvalReport& report) {
  json per_problem = json::array();
  for (const auto& [id, value] : report.per_problem) {
    per_problem.push_back({{"id", id}, {"value", value}});
  }
  json items = json::array();
  for (const auto& it : report.items) {
    items.push_back({{"problem", it.problem_id},
                     {"condition", it.condition},
                     {"color", it.color},
                     {"placements", it.placements},
                     {"human_mean_distance", it.human_mean_distance},
                     {"human_cluster_distance", it.human_cluster_distance},
                     {"model_mean_distance", it.model_mean_distance},
                     {"model_cluster_distance", it.model_cluster_distance},
                     {"model_px", vector_json(it.model_px)}});
  }
  json aggregate = json::object();
  for (const auto& [k, v] : report.aggregate) aggregate[k] = v;
  json metadata = json::object();
  for (const auto& [k, v] : report.metadata) metadata[k] = v;
  return {{"alpha", report.config.alpha},
          {"per_problem", std::move(per_problem)},
          {"aggregate", std::move(aggregate)},
          {"metadata", std::move(metadata)},
          {"items", std::move(items)}};
}

nlohmann::json solutions_to_json(const ProblemFile& file,
                                 const std::vector<ProblemSolution>& solutions,
                                 const RunConfig& config,
                                 const SolveOutputOptions& options) {
  json results = json::array();
  for (std::size_t p = 0; p < file.problems.size(); ++p) {
    const ProblemInstance& problem = file.problems[p];
    const ProblemSolution& sol = solutions[p];
    json r;
    r["id"] = problem.id;
    r["assignment"] = sol.assignment;
    r["labels"] = transfer_labels(sol.mapping, source_labels(problem));
    json markers = json::array();
    for (const Marker& m : problem.markers) {
      if (!m.coords3d) continue;
      if (problem.camera) {
        markers.push_back(marker_json(map_marker_end_to_end(
            m, problem.source, problem.target, sol.mapping, *problem.camera,
            config.human.transfer)));
      } else {
        std::vector<Vector> centers;
        for (const auto& n : problem.source.nodes) centers.push_back(n.coords);
        const int s = closest_cluster(*m.coords3d, centers);
        const int t = mapped_target(sol.mapping, s);
        Marker out{m.color, std::nullopt, std::nullopt};
        out.coords3d = transfer_marker(
            *m.coords3d, problem.source.nodes[static_cast<std::size_t>(s)].coords,
            problem.target.nodes[static_cast<std::size_t>(t)].coords);
        markers.push_back(marker_json(out));
      }
    }
    if (!markers.empty()) r["markers"] = std::move(markers);
    if (options.emit_soft) {
      json rows = json::array();
      for (Eigen::Index i = 0; i < sol.mapping.rows(); ++i) {
        rows.push_back(vector_json(sol.mapping.row(i).transpose()));
      }
      r["soft"] = std::move(rows);
    }
    r["trace"] = {{"iterations_run", sol.trace.iterations_run},
                  {"final_beta", sol.trace.final_beta},
                  {"max_delta_last", sol.trace.max_delta_last}};
    results.push_back(std::move(r));
  }
  return {{"schema_version", kSolutionSchema},
          {"relation_recipe", recipe_name(file.recipe)},
          {"config", config_to_json(config)},
          {"results", std::move(results)}};
}

std::vector<Prediction> load_predictions(const std::string& path,
                                         const ProblemFile& file) {
  json root;
  try {
    root = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
  try {
    const std::string version =
        read_string(field(root, "schema_version", "$"), "$.schema_version");
    if (version != kSolutionSchema) {
      fail("$.schema_version", "expected '" + std::string(kSolutionSchema) +
                                   "', got '" + version + "'");
    }
    const json& results = field(root, "results", "$");
    if (!results.is_array() || results.size() != file.problems.size()) {
      fail("$.results", "expected one result per problem (" +
                            std::to_string(file.problems.size()) + ")");
    }
    std::vector<Prediction> out;
    for (std::size_t k = 0; k < results.size(); ++k) {
      const std::string rp = "$.results[" + std::to_string(k) + "]";
      const std::string id = read_string(field(results[k], "id", rp), rp + ".id");
      if (id != file.problems[k].id) {
        fail(rp + ".id", "expected '" + file.problems[k].id + "', got '" + id + "'");
      }
      const json& a = field(results[k], "assignment", rp);
      if (!a.is_array()) fail(rp + ".assignment", "expected an array");
      Prediction pred;
      for (std::size_t t = 0; t < a.size(); ++t) {
        pred.push_back(read_int(a[t], rp + ".assignment[" + std::to_string(t) + "]"));
      }
      out.push_back(std::move(pred));
    }
    return out;
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace pam

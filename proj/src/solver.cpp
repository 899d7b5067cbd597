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

#include "pam/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "pam/errors.hpp"

namespace pam {

namespace {

void require_shape(const MappingMatrix& mapping, const SimilarityTables& tables,
                   const char* what) {
  if (mapping.rows() != tables.source_size() ||
      mapping.cols() != tables.target_size()) {
    std::ostringstream msg;
    msg << what << ": mapping is " << mapping.rows() << "x" << mapping.cols()
        << " but graphs have " << tables.source_size() << " and "
        << tables.target_size() << " nodes";
    throw InvalidInput(msg.str());
  }
}

void require_term(bool present, const char* what) {
  if (!present) {
    throw InvalidInput(std::string(what) +
                       ": similarity table for a weighted term was not built");
  }
}

}  // namespace

SimilarityTables::SimilarityTables(const AttributedGraph& source,
                                   const AttributedGraph& target,
                                   bool with_nodes, bool with_edges)
    : ns_(static_cast<Eigen::Index>(source.size())),
      nt_(static_cast<Eigen::Index>(target.size())),
      has_nodes_(with_nodes),
      has_edges_(with_edges) {
  if (ns_ == 0 || nt_ == 0) throw InvalidInput("graphs must be nonempty");
  if (with_nodes) node_sim_ = node_similarity_matrix(source, target);
  if (with_edges) {
    edge_sim_.assign(static_cast<std::size_t>(ns_ * ns_ * nt_ * nt_), 0.0);
    for (Eigen::Index i = 0; i < ns_; ++i) {
      for (Eigen::Index j = 0; j < ns_; ++j) {
        if (i == j) continue;
        const Vector& rs = source.edges.relation(static_cast<int>(i),
                                                 static_cast<int>(j));
        for (Eigen::Index t = 0; t < nt_; ++t) {
          for (Eigen::Index u = 0; u < nt_; ++u) {
            if (t == u) continue;
            const Vector& rt = target.edges.relation(static_cast<int>(t),
                                                     static_cast<int>(u));
            edge_sim_[static_cast<std::size_t>(((i * ns_ + j) * nt_ + t) * nt_ +
                                               u)] = cosine_similarity(rs, rt);
          }
        }
      }
    }
  }
}

SimilarityTables SimilarityTables::for_alpha(const AttributedGraph& source,
                                             const AttributedGraph& target,
                                             double alpha) {
  return SimilarityTables(source, target, alpha > 0.0, alpha < 1.0);
}

Matrix SimilarityTables::edge_support(const MappingMatrix& mapping) const {
  require_term(has_edges_, "edge_support");
  Matrix support = Matrix::Zero(ns_, nt_);
  for (Eigen::Index i = 0; i < ns_; ++i) {
    for (Eigen::Index t = 0; t < nt_; ++t) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < ns_; ++j) {
        if (j == i) continue;
        const double* row =
            &edge_sim_[static_cast<std::size_t>(((i * ns_ + j) * nt_ + t) * nt_)];
        for (Eigen::Index u = 0; u < nt_; ++u) {
          acc += mapping(j, u) * row[u];
        }
      }
      support(i, t) = acc;
    }
  }
  return support;
}

MappingMatrix init_mapping(Eigen::Index ns, Eigen::Index nt) {
  if (ns < 1 || nt < 1) {
    throw InvalidInput("init_mapping: sizes must be at least 1");
  }
  return MappingMatrix::Constant(ns, nt, 1.0 / static_cast<double>(ns));
}

CompatibilityMatrix compatibility_matrix(const MappingMatrix& mapping,
                                         const SimilarityTables& tables,
                                         double alpha) {
  require_shape(mapping, tables, "compatibility_matrix");
  const Eigen::Index ns = tables.source_size();
  CompatibilityMatrix q = CompatibilityMatrix::Zero(mapping.rows(), mapping.cols());
  if (alpha < 1.0 && ns > 1) {
    const double scale = (1.0 - alpha) / (2.0 * static_cast<double>(ns - 1));
    q += scale * mapping.cwiseProduct(tables.edge_support(mapping));
  }
  if (alpha > 0.0) {
    require_term(tables.has_nodes(), "compatibility_matrix");
    q += alpha * mapping.cwiseProduct(tables.nodes());
  }
  return q;
}

CompatibilityMatrix compatibility_matrix(const MappingMatrix& mapping,
                                         const AttributedGraph& source,
                                         const AttributedGraph& target,
                                         double alpha) {
  return compatibility_matrix(
      mapping, SimilarityTables::for_alpha(source, target, alpha), alpha);
}

MappingMatrix ga_step(const MappingMatrix& mapping,
                      const SimilarityTables& tables, double alpha, double beta) {
  if (!(beta > 0.0)) throw InvalidInput("ga_step: beta must be positive");
  const CompatibilityMatrix q = compatibility_matrix(mapping, tables, alpha);
  if (!q.allFinite()) {
    std::ostringstream msg;
    msg << "non-finite compatibility matrix at beta " << beta
        << " (check for overflowing or NaN attributes)";
    throw NumericalError(msg.str());
  }

  // Shifting a column by a constant cancels in the column normalization.
  MappingMatrix next(q.rows(), q.cols());
  for (Eigen::Index t = 0; t < q.cols(); ++t) {
    const double top = q.col(t).maxCoeff();
    // std::exp rather than Eigen's vectorized exp, which clamps large
    // negative arguments instead of underflowing to zero.
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      next(i, t) = std::exp(beta * (q(i, t) - top));
    }
  }
  for (Eigen::Index t = 0; t < next.cols(); ++t) {
    next.col(t) /= next.col(t).sum();
  }
  for (Eigen::Index i = 0; i < next.rows(); ++i) {
    const double s = next.row(i).sum();
    if (!(s > 0.0) || !std::isfinite(s)) {
      std::ostringstream msg;
      msg << "row " << i << " underflowed during normalization at beta "
          << beta;
      throw NumericalError(msg.str());
    }
    next.row(i) /= s;
  }
  return next;
}

MappingMatrix ga_step(const MappingMatrix& mapping,
                      const AttributedGraph& source,
                      const AttributedGraph& target, double alpha, double beta) {
  return ga_step(mapping, SimilarityTables::for_alpha(source, target, alpha),
                 alpha, beta);
}

SolveResult solve(const AttributedGraph& source, const AttributedGraph& target,
                  const SolverConfig& config, const SolveOptions& options) {
  check_config(config);
  const SimilarityTables tables =
      SimilarityTables::for_alpha(source, target, config.alpha);

  SolveResult result;
  MappingMatrix m = init_mapping(tables.source_size(), tables.target_size());
  SolveTrace& trace = result.trace;
  for (int k = 0; k < config.iterations; ++k) {
    const double beta = config.beta0 + k * config.beta_increment;
    MappingMatrix next = ga_step(m, tables, config.alpha, beta);
    trace.max_delta_last = (next - m).cwiseAbs().maxCoeff();
    m = std::move(next);
    trace.iterations_run = k + 1;
    if (options.record_energies) {
      trace.energies.push_back(energy(m, tables, config.alpha, beta));
    }
    if (options.observer) options.observer(k, beta, m);
    if (config.early_stop_delta > 0.0 &&
        trace.max_delta_last < config.early_stop_delta) {
      break;
    }
  }
  trace.final_beta = config.beta0 + trace.iterations_run * config.beta_increment;
  result.mapping = std::move(m);
  return result;
}

double likelihood(const MappingMatrix& mapping, const SimilarityTables& tables,
                  double alpha) {
  require_shape(mapping, tables, "likelihood");
  const auto n = static_cast<double>(tables.source_size());
  double value = 0.0;
  if (alpha < 1.0 && tables.source_size() > 1) {
    const double edge_sum =
        mapping.cwiseProduct(tables.edge_support(mapping)).sum();
    value += (1.0 - alpha) * edge_sum / (n * (n - 1.0));
  }
  if (alpha > 0.0) {
    require_term(tables.has_nodes(), "likelihood");
    value += alpha * mapping.cwiseProduct(tables.nodes()).sum() / n;
  }
  return value;
}

double likelihood(const MappingMatrix& mapping, const AttributedGraph& source,
                  const AttributedGraph& target, double alpha) {
  return likelihood(mapping, SimilarityTables::for_alpha(source, target, alpha),
                    alpha);
}

double log_prior(const MappingMatrix& mapping, double beta) {
  if (!(beta > 0.0)) throw InvalidInput("log_prior: beta must be positive");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < mapping.rows(); ++i) {
    for (Eigen::Index t = 0; t < mapping.cols(); ++t) {
      const double v = mapping(i, t);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidInput("log_prior: mapping entries must be finite and >= 0");
      }
      if (v > 0.0) acc += v * std::log(v);
    }
  }
  return acc / beta;
}

double energy(const MappingMatrix& mapping, const SimilarityTables& tables,
              double alpha, double beta) {
  const double prior = log_prior(mapping, beta);
  return -likelihood(mapping, tables, alpha) - prior;
}

double energy(const MappingMatrix& mapping, const AttributedGraph& source,
              const AttributedGraph& target, double alpha, double beta) {
  return energy(mapping, SimilarityTables::for_alpha(source, target, alpha),
                alpha, beta);
}

std::vector<int> hard_assignment(const MappingMatrix& mapping) {
  std::vector<int> out(static_cast<std::size_t>(mapping.cols()), 0);
  for (Eigen::Index t = 0; t < mapping.cols(); ++t) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < mapping.rows(); ++i) {
      if (mapping(i, t) > mapping(best, t)) best = i;
    }
    out[static_cast<std::size_t>(t)] = static_cast<int>(best);
  }
  return out;
}

MappingMatrix assignment_matrix(const std::vector<int>& target_to_source,
                                Eigen::Index ns) {
  MappingMatrix m = MappingMatrix::Zero(
      ns, static_cast<Eigen::Index>(target_to_source.size()));
  for (std::size_t t = 0; t < target_to_source.size(); ++t) {
    const int s = target_to_source[t];
    if (s < 0 || s >= ns) {
      throw InvalidInput("assignment_matrix: source index out of range");
    }
    m(s, static_cast<Eigen::Index>(t)) = 1.0;
  }
  return m;
}

BruteForceResult brute_force_map(const AttributedGraph& source,
                                 const AttributedGraph& target, double alpha) {
  const auto n = static_cast<Eigen::Index>(source.size());
  if (n != static_cast<Eigen::Index>(target.size())) {
    throw InvalidInput("brute_force_map: graphs must have equal node counts");
  }
  if (n > kBruteForceLimit) {
    throw InvalidInput("brute_force_map: refusing " + std::to_string(n) +
                       " nodes (limit " + std::to_string(kBruteForceLimit) +
                       ")");
  }
  const SimilarityTables tables =
      SimilarityTables::for_alpha(source, target, alpha);
  const double nn = static_cast<double>(n);

  // Likelihood of a permutation, summed directly over the assigned pairs.
  auto score = [&](const std::vector<int>& a) {
    double value = 0.0;
    if (alpha < 1.0 && n > 1) {
      double edges = 0.0;
      for (Eigen::Index t = 0; t < n; ++t) {
        for (Eigen::Index u = 0; u < n; ++u) {
          if (t == u) continue;
          edges += tables.edge(a[t], a[u], t, u);
        }
      }
      value += (1.0 - alpha) * edges / (nn * (nn - 1.0));
    }
    if (alpha > 0.0) {
      double nodes = 0.0;
      for (Eigen::Index t = 0; t < n; ++t) nodes += tables.nodes()(a[t], t);
      value += alpha * nodes / nn;
    }
    return value;
  };

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  BruteForceResult out;
  out.assignment = perm;
  out.best = score(perm);
  out.runner_up = -std::numeric_limits<double>::infinity();
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double s = score(perm);
    if (s > out.best) {
      out.runner_up = out.best;
      out.best = s;
      out.assignment = perm;
    } else if (s > out.runner_up) {
      out.runner_up = s;
    }
  }
  return out;
}

}  // namespace pam

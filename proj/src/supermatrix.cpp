#include "anp/supermatrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

#include "anp/kernels.hpp"

namespace anp {

std::string_view to_string(SupermatrixState state) {
  switch (state) {
    case SupermatrixState::unweighted: return "unweighted";
    case SupermatrixState::weighted: return "weighted";
    case SupermatrixState::limit: return "limit";
  }
  return "unweighted";
}

std::optional<std::size_t> Supermatrix::position(std::string_view id) const {
  for (std::size_t i = 0; i < index.size(); ++i)
    if (index[i] == id) return i;
  return std::nullopt;
}

double Supermatrix::at(std::string_view row, std::string_view column) const {
  const auto r = position(row);
  const auto c = position(column);
  if (!r || !c) throw Error(ErrorCode::InvalidArgument, "unknown supermatrix index");
  return entries(*r, *c);
}

double ClusterWeights::weight(const std::string& source, const std::string& target) const {
  auto it = by_source.find(source);
  if (it == by_source.end()) return 0.0;
  auto jt = it->second.find(target);
  return jt == it->second.end() ? 0.0 : jt->second;
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

ConsistencyError::ConsistencyError(std::vector<std::string> failing_slots)
    : Error(ErrorCode::ConsistencyFailure, "inconsistent judgments in " + join(failing_slots)),
      slots_(std::move(failing_slots)) {}

// ---------------------------------------------------------------------------
// Slot evaluation and assembly

std::vector<SlotEvaluation> evaluate_slots(const DecisionNetwork& net, const SolveOptions& opts) {
  std::vector<SlotEvaluation> out;
  std::vector<ComparisonMatrix> batch;
  std::vector<std::size_t> batch_owner;
  std::vector<std::string> missing;

  for (const auto& e : net.edges) {
    SlotEvaluation ev;
    ev.slot = e.slot();
    ev.elements = net.slot_elements(ev.slot);
    if (ev.elements.size() == 1) {
      ev.priorities.weights = {1.0};
      ev.priorities.lambda_max = 1.0;
    } else if (!e.matrix) {
      missing.push_back(ev.slot.key());
    } else {
      ev.matrix = e.matrix;
      batch.push_back(*e.matrix);
      batch_owner.push_back(out.size());
    }
    out.push_back(std::move(ev));
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::IncompleteModel, "unrated slots: " + join(missing));
  }

  auto vectors = kernels::eigenvectors(batch, opts.rci);
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    auto& ev = out[batch_owner[k]];
    ev.priorities = std::move(vectors[k]);
    ev.verdict = screen_consistency(ev.priorities, ev.elements.size(), opts.policy);
  }
  return out;
}

Supermatrix assemble_unweighted(const DecisionNetwork& net,
                                const std::map<JudgmentSlot, PriorityVector>& eigenvectors) {
  Supermatrix sm;
  sm.index = net.node_order();
  for (const auto& c : net.clusters)
    for (std::size_t i = 0; i < c.node_ids.size(); ++i) sm.clusters.push_back(c.id);
  sm.entries = Matrix(sm.index.size());
  sm.state = SupermatrixState::unweighted;

  std::vector<std::string> missing;
  for (const auto& e : net.edges) {
    const auto slot = e.slot();
    const auto elements = net.slot_elements(slot);
    const auto col = sm.position(slot.control_node);
    if (!col || elements.empty()) continue;

    std::vector<double> weights;
    if (auto it = eigenvectors.find(slot); it != eigenvectors.end()) {
      weights = it->second.weights;
    } else if (elements.size() == 1) {
      weights = {1.0};
    } else {
      missing.push_back(slot.key());
      continue;
    }
    if (weights.size() != elements.size()) {
      throw Error(ErrorCode::SlotShapeMismatch, "eigenvector for " + slot.key() + " has wrong length");
    }
    for (std::size_t k = 0; k < elements.size(); ++k) {
      sm.entries(*sm.position(elements[k]), *col) = weights[k];
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::IncompleteModel, "no eigenvector for " + join(missing));
  }
  return sm;
}

ClusterWeights derive_cluster_weights(const DecisionNetwork& net, const SolveOptions& opts) {
  ClusterWeights cw;
  std::vector<std::string> failing;
  for (const auto& c : net.clusters) {
    const auto targets = net.influenced_clusters(c.id);
    if (targets.empty()) continue;
    auto& row = cw.by_source[c.id];

    if (auto it = net.cluster_weight_matrices.find(c.id); it != net.cluster_weight_matrices.end()) {
      const auto& m = it->second;
      const auto pv = principal_eigenvector(m, opts.rci);
      for (std::size_t k = 0; k < m.order(); ++k) row[m.labels()[k]] = pv.weights[k];
      const auto verdict = screen_consistency(pv, m.order(), opts.policy);
      if (verdict.verdict != Verdict::pass) failing.push_back("cluster:" + c.id);
      cw.derived[c.id] = pv;
      cw.verdicts[c.id] = verdict;
    } else {
      const double share = 1.0 / static_cast<double>(targets.size());
      for (const auto& t : targets) row[t] = share;
    }
  }
  if (opts.strict && !failing.empty()) throw ConsistencyError(failing);
  return cw;
}

Supermatrix weight(const Supermatrix& unweighted, const ClusterWeights& cw) {
  Supermatrix out = unweighted;
  out.state = SupermatrixState::weighted;
  const std::size_t n = unweighted.order();

  for (std::size_t col = 0; col < n; ++col) {
    const std::string& source = unweighted.clusters[col];
    double total = 0.0;
    for (std::size_t row = 0; row < n; ++row) {
      const double v = unweighted.entries(row, col);
      if (v == 0.0) continue;
      const double scaled = v * cw.weight(source, unweighted.clusters[row]);
      out.entries(row, col) = scaled;
      total += scaled;
    }
    if (total > 0.0) {
      for (std::size_t row = 0; row < n; ++row) out.entries(row, col) /= total;
    } else {
      // Sink node: keep stochasticity with a self-loop.
      for (std::size_t row = 0; row < n; ++row) out.entries(row, col) = 0.0;
      out.entries(col, col) = 1.0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Limit

Supermatrix limit(const Supermatrix& weighted, const ConvergenceOptions& opts) {
  const Matrix& w = weighted.entries;
  const std::size_t squarings =
      opts.max_power == 0 ? 0 : static_cast<std::size_t>(std::bit_width(opts.max_power) - 1);

  Matrix p = w;
  ConvergenceInfo info;
  double last_step = 0.0;
  for (;;) {
    Matrix pw = kernels::multiply(p, w);
    const double step = max_abs_diff(pw, p);
    if (step < opts.tolerance) {
      info.residual = step;
      break;
    }
    if (info.iterations == squarings) {
      throw Error(ErrorCode::ConvergenceFailure,
                  "no convergence by power " + std::to_string(info.power) + " (residual " +
                      std::to_string(step) + ")");
    }
    Matrix next = kernels::multiply(p, p);
    last_step = max_abs_diff(next, p);
    if (last_step < opts.tolerance) {
      // Even powers have settled but W^(2k) != W^(2k+1): oscillation.
      Matrix avg(p.size());
      for (std::size_t i = 0; i < avg.data().size(); ++i) avg.data()[i] = 0.5 * (p.data()[i] + pw.data()[i]);
      const double drift = max_abs_diff(kernels::multiply(avg, w), avg);
      if (drift >= 10.0 * opts.tolerance) {
        throw Error(ErrorCode::ConvergenceFailure,
                    "powers oscillate with period greater than 2 (Cesaro drift " +
                        std::to_string(drift) + ")");
      }
      p = std::move(avg);
      info.cesaro_used = true;
      info.residual = drift;
      break;
    }
    p = std::move(next);
    ++info.iterations;
    info.power *= 2;
  }

  Supermatrix out = weighted;
  out.entries = std::move(p);
  out.state = SupermatrixState::limit;
  out.convergence = info;
  return out;
}

// ---------------------------------------------------------------------------
// Ranking

std::vector<std::string> RankingReport::order() const {
  std::vector<std::string> out;
  for (const auto& a : ranking) out.push_back(a.id);
  return out;
}

const AlternativeWeight* RankingReport::find(std::string_view id) const {
  for (const auto& a : ranking)
    if (a.id == id) return &a;
  return nullptr;
}

namespace {

void sort_ranking(std::vector<AlternativeWeight>& ranking) {
  std::sort(ranking.begin(), ranking.end(), [](const AlternativeWeight& a, const AlternativeWeight& b) {
    if (a.limit_weight != b.limit_weight) return a.limit_weight > b.limit_weight;
    return a.id < b.id;
  });
}

void normalize_ranking(std::vector<AlternativeWeight>& ranking) {
  double total = 0.0;
  for (const auto& a : ranking) total += a.limit_weight;
  for (auto& a : ranking) a.normalized = total > 0.0 ? a.limit_weight / total : 0.0;
}

}  // namespace

RankingReport rank(const Supermatrix& limit_matrix, const DecisionNetwork& net) {
  RankingReport report;
  std::size_t col = 0;
  if (const Cluster* goal = net.goal_cluster(); goal != nullptr && !goal->node_ids.empty()) {
    if (auto p = limit_matrix.position(goal->node_ids.front())) col = *p;
  }
  report.source_column = limit_matrix.order() > 0 ? limit_matrix.index[col] : "";
  report.raw_limit_column = limit_matrix.entries.column(col);
  report.convergence = limit_matrix.convergence;

  for (const auto& c : net.clusters) {
    if (c.kind != ClusterKind::alternatives) continue;
    for (const auto& id : c.node_ids) {
      const Node* node = net.find_node(id);
      const auto pos = limit_matrix.position(id);
      report.ranking.push_back(AlternativeWeight{
          id, node ? node->label : id, pos ? report.raw_limit_column[*pos] : 0.0, 0.0});
    }
  }
  normalize_ranking(report.ranking);
  sort_ranking(report.ranking);
  return report;
}

RankingReport solve_hierarchy(const DecisionNetwork& net, const SolveOptions& opts) {
  const Cluster* goal = net.goal_cluster();
  if (goal == nullptr || goal->node_ids.size() != 1) {
    throw Error(ErrorCode::NotAHierarchy, "a hierarchy needs a goal cluster with one node");
  }

  // Walk the chain of levels from the goal.
  std::vector<const Cluster*> levels{goal};
  std::set<std::string> visited{goal->id};
  std::size_t edges_used = 0;
  for (;;) {
    const Cluster* level = levels.back();
    const auto targets = net.influenced_clusters(level->id);
    if (targets.empty()) break;
    if (targets.size() != 1) {
      throw Error(ErrorCode::NotAHierarchy, "cluster '" + level->id + "' influences several clusters");
    }
    if (!visited.insert(targets.front()).second) {
      throw Error(ErrorCode::NotAHierarchy, "feedback or loop at cluster '" + targets.front() + "'");
    }
    for (const auto& id : level->node_ids) {
      if (net.find_edge({id, targets.front()}) == nullptr) {
        throw Error(ErrorCode::NotAHierarchy, "node '" + id + "' has no edge to the next level");
      }
      ++edges_used;
    }
    levels.push_back(net.find_cluster(targets.front()));
  }
  if (edges_used != net.edges.size()) {
    throw Error(ErrorCode::NotAHierarchy, "edges outside the goal-to-alternatives chain");
  }
  if (levels.back()->kind != ClusterKind::alternatives) {
    throw Error(ErrorCode::NotAHierarchy, "the lowest level is not an alternatives cluster");
  }

  std::map<JudgmentSlot, PriorityVector> vectors;
  for (auto& ev : evaluate_slots(net, opts)) vectors[ev.slot] = std::move(ev.priorities);

  std::map<std::string, double> global{{goal->node_ids.front(), 1.0}};
  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    for (const auto& control : levels[l]->node_ids) {
      const JudgmentSlot slot{control, levels[l + 1]->id};
      const auto elements = net.slot_elements(slot);
      const auto& w = vectors.at(slot).weights;
      for (std::size_t k = 0; k < elements.size(); ++k) global[elements[k]] += global[control] * w[k];
    }
  }

  RankingReport report;
  report.source_column = goal->node_ids.front();
  for (const auto& id : net.node_order()) report.raw_limit_column.push_back(global[id]);
  for (const auto& id : levels.back()->node_ids) {
    const Node* node = net.find_node(id);
    report.ranking.push_back({id, node ? node->label : id, global[id], 0.0});
  }
  normalize_ranking(report.ranking);
  sort_ranking(report.ranking);
  return report;
}

// ---------------------------------------------------------------------------
// Pipeline

std::vector<std::string> Solution::failing_slots() const {
  std::vector<std::string> out;
  for (const auto& s : slots)
    if (s.verdict.verdict != Verdict::pass) out.push_back(s.slot.key());
  for (const auto& [source, v] : cluster_weights.verdicts)
    if (v.verdict != Verdict::pass) out.push_back("cluster:" + source);
  return out;
}

Solution solve(const DecisionNetwork& net, const SolveOptions& opts) {
  Solution s;
  s.slots = evaluate_slots(net, opts);
  if (opts.strict) {
    std::vector<std::string> failing;
    for (const auto& ev : s.slots)
      if (ev.verdict.verdict != Verdict::pass) failing.push_back(ev.slot.key());
    if (!failing.empty()) throw ConsistencyError(failing);
  }
  s.cluster_weights = derive_cluster_weights(net, opts);

  std::map<JudgmentSlot, PriorityVector> vectors;
  for (const auto& ev : s.slots) vectors[ev.slot] = ev.priorities;
  s.unweighted = assemble_unweighted(net, vectors);
  s.weighted = weight(s.unweighted, s.cluster_weights);
  s.limit_matrix = limit(s.weighted, opts.convergence);
  s.ranking = rank(s.limit_matrix, net);
  return s;
}

DecisionNetwork apply_overrides(const DecisionNetwork& net,
                                const std::vector<JudgmentOverride>& overrides, ScaleMode mode) {
  DecisionNetwork out = net;
  for (const auto& o : overrides) {
    auto it = std::find_if(out.edges.begin(), out.edges.end(),
                           [&](const InfluenceEdge& e) { return e.slot() == o.slot; });
    if (it == out.edges.end() || !it->matrix) {
      throw Error(ErrorCode::InvalidOverride, "no judged slot " + o.slot.key());
    }
    const auto i = it->matrix->index_of(o.row);
    const auto j = it->matrix->index_of(o.col);
    if (!i || !j || *i == *j) {
      throw Error(ErrorCode::InvalidOverride,
                  "pair (" + o.row + "," + o.col + ") is not in slot " + o.slot.key());
    }
    if (mode == ScaleMode::strict && !o.value.on_scale()) {
      throw Error(ErrorCode::InvalidOverride, o.value.to_string() + " is not on the 1..9 scale");
    }
    it->matrix = it->matrix->with_judgment(*i, *j, o.value);
  }
  return out;
}

WhatIfReport whatif(const DecisionNetwork& net, const std::vector<JudgmentOverride>& overrides,
                    const SolveOptions& opts) {
  SolveOptions relaxed = opts;
  relaxed.strict = false;
  const DecisionNetwork edited = apply_overrides(net, overrides);

  WhatIfReport r;
  r.baseline = solve(net, relaxed).ranking;
  r.perturbed = solve(edited, relaxed).ranking;

  const auto after = r.perturbed.order();
  for (std::size_t k = 0; k < r.baseline.ranking.size(); ++k) {
    const auto& b = r.baseline.ranking[k];
    const AlternativeWeight* p = r.perturbed.find(b.id);
    const auto pos = static_cast<std::size_t>(std::find(after.begin(), after.end(), b.id) - after.begin());
    r.delta.push_back({b.id, p->limit_weight - b.limit_weight, p->normalized - b.normalized,
                       static_cast<int>(k) - static_cast<int>(pos)});
  }
  return r;
}

}  // namespace anp

#include "anp/network.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "anp/error.hpp"

namespace anp {

std::string_view to_string(ClusterKind kind) {
  switch (kind) {
    case ClusterKind::goal: return "goal";
    case ClusterKind::criteria: return "criteria";
    case ClusterKind::alternatives: return "alternatives";
    case ClusterKind::other: return "other";
  }
  return "other";
}

std::optional<ClusterKind> parse_cluster_kind(std::string_view text) {
  if (text == "goal") return ClusterKind::goal;
  if (text == "criteria") return ClusterKind::criteria;
  if (text == "alternatives") return ClusterKind::alternatives;
  if (text == "other") return ClusterKind::other;
  return std::nullopt;
}

bool is_valid_identifier(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.';
  });
}

std::optional<JudgmentSlot> JudgmentSlot::parse(std::string_view key) {
  const auto colon = key.find(':');
  if (colon == std::string_view::npos || key.find(':', colon + 1) != std::string_view::npos) {
    return std::nullopt;
  }
  JudgmentSlot s{std::string(key.substr(0, colon)), std::string(key.substr(colon + 1))};
  if (!is_valid_identifier(s.control_node) || !is_valid_identifier(s.dependent_cluster)) {
    return std::nullopt;
  }
  return s;
}

const Node* DecisionNetwork::find_node(std::string_view id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

const Cluster* DecisionNetwork::find_cluster(std::string_view id) const {
  for (const auto& c : clusters)
    if (c.id == id) return &c;
  return nullptr;
}

const InfluenceEdge* DecisionNetwork::find_edge(const JudgmentSlot& slot) const {
  for (const auto& e : edges)
    if (e.control_node == slot.control_node && e.dependent_cluster == slot.dependent_cluster)
      return &e;
  return nullptr;
}

const Cluster* DecisionNetwork::goal_cluster() const {
  for (const auto& c : clusters)
    if (c.kind == ClusterKind::goal) return &c;
  return nullptr;
}

std::vector<std::string> DecisionNetwork::node_order() const {
  std::vector<std::string> out;
  for (const auto& c : clusters) out.insert(out.end(), c.node_ids.begin(), c.node_ids.end());
  return out;
}

std::vector<std::string> DecisionNetwork::slot_elements(const JudgmentSlot& slot) const {
  std::vector<std::string> out;
  const Cluster* c = find_cluster(slot.dependent_cluster);
  if (c == nullptr) return out;
  for (const auto& id : c->node_ids)
    if (id != slot.control_node) out.push_back(id);
  return out;
}

std::vector<std::string> DecisionNetwork::influenced_clusters(
    std::string_view source_cluster) const {
  std::set<std::string> targets;
  for (const auto& e : edges) {
    const Node* n = find_node(e.control_node);
    if (n != nullptr && n->cluster_id == source_cluster) targets.insert(e.dependent_cluster);
  }
  std::vector<std::string> out;
  for (const auto& c : clusters)
    if (targets.contains(c.id)) out.push_back(c.id);
  return out;
}

DecisionNetwork& DecisionNetwork::add_cluster(
    std::string id, std::string label, ClusterKind kind,
    const std::vector<std::pair<std::string, std::string>>& members) {
  Cluster c{std::move(id), std::move(label), kind, {}};
  if (c.label.empty()) c.label = c.id;
  for (const auto& [node_id, node_label] : members) {
    c.node_ids.push_back(node_id);
    nodes.push_back(Node{node_id, node_label.empty() ? node_id : node_label, c.id});
  }
  clusters.push_back(std::move(c));
  return *this;
}

DecisionNetwork& DecisionNetwork::declare(std::string control_node, std::string dependent_cluster) {
  edges.push_back(InfluenceEdge{std::move(control_node), std::move(dependent_cluster), std::nullopt});
  return *this;
}

bool ValidationReport::structurally_sound() const {
  return std::none_of(violations.begin(), violations.end(), [](const Violation& v) {
    return v.kind == Violation::Kind::structural;
  });
}

ValidationReport validate(const DecisionNetwork& net, const RciTable& rci) {
  ValidationReport report;
  auto structural = [&](std::string path, std::string message) {
    report.violations.push_back({Violation::Kind::structural, std::move(path), std::move(message)});
  };

  // Clusters and nodes.
  std::set<std::string> cluster_ids;
  std::size_t goals = 0;
  bool has_alternatives = false;
  for (std::size_t ci = 0; ci < net.clusters.size(); ++ci) {
    const auto& c = net.clusters[ci];
    const std::string path = "clusters[" + std::to_string(ci) + "]";
    if (!is_valid_identifier(c.id)) structural(path + ".id", "invalid identifier '" + c.id + "'");
    if (!cluster_ids.insert(c.id).second) structural(path + ".id", "duplicate cluster id '" + c.id + "'");
    if (c.kind == ClusterKind::goal) ++goals;
    if (c.kind == ClusterKind::alternatives && !c.node_ids.empty()) has_alternatives = true;
    for (std::size_t ni = 0; ni < c.node_ids.size(); ++ni) {
      const Node* n = net.find_node(c.node_ids[ni]);
      if (n == nullptr || n->cluster_id != c.id) {
        structural(path + ".nodes[" + std::to_string(ni) + "]",
                   "node '" + c.node_ids[ni] + "' is not registered to cluster '" + c.id + "'");
      }
    }
  }
  if (goals > 1) structural("clusters", "more than one goal cluster");
  if (!has_alternatives) structural("clusters", "no alternatives");

  std::set<std::string> node_ids;
  for (std::size_t ni = 0; ni < net.nodes.size(); ++ni) {
    const auto& n = net.nodes[ni];
    const std::string path = "nodes[" + std::to_string(ni) + "]";
    if (!is_valid_identifier(n.id)) structural(path + ".id", "invalid identifier '" + n.id + "'");
    if (!node_ids.insert(n.id).second) structural(path + ".id", "duplicate node id '" + n.id + "'");
    const Cluster* c = net.find_cluster(n.cluster_id);
    if (c == nullptr) {
      structural(path + ".cluster", "node '" + n.id + "' refers to unknown cluster '" + n.cluster_id + "'");
    } else if (std::find(c->node_ids.begin(), c->node_ids.end(), n.id) == c->node_ids.end()) {
      structural(path + ".cluster", "node '" + n.id + "' missing from cluster '" + c->id + "' node list");
    }
  }

  // Edges.
  std::set<JudgmentSlot> seen_slots;
  const Cluster* goal = net.goal_cluster();
  for (std::size_t ei = 0; ei < net.edges.size(); ++ei) {
    const auto& e = net.edges[ei];
    const std::string path = "edges[" + std::to_string(ei) + "] (" + e.slot().key() + ")";
    if (net.find_node(e.control_node) == nullptr) {
      structural(path, "unknown control node '" + e.control_node + "'");
      continue;
    }
    const Cluster* dep = net.find_cluster(e.dependent_cluster);
    if (dep == nullptr) {
      structural(path, "unknown dependent cluster '" + e.dependent_cluster + "'");
      continue;
    }
    if (!seen_slots.insert(e.slot()).second) structural(path, "duplicate edge");
    if (goal != nullptr && dep->id == goal->id) structural(path, "the goal cluster cannot be influenced");

    const auto elements = net.slot_elements(e.slot());
    if (elements.empty()) {
      structural(path, "no elements to compare");
      continue;
    }
    if (elements.size() > rci.max_order()) {
      structural(path, "unsupported order " + std::to_string(elements.size()) + " (max " +
                           std::to_string(rci.max_order()) + ")");
    }
    if (e.matrix) {
      const auto& labels = e.matrix->labels();
      for (const auto& l : labels) {
        if (std::find(elements.begin(), elements.end(), l) == elements.end()) {
          structural(path, "matrix label '" + l + "' is not an element of this slot");
        }
      }
      if (labels.size() == elements.size() && labels != elements &&
          std::is_permutation(labels.begin(), labels.end(), elements.begin())) {
        structural(path, "matrix labels are not in cluster order");
      } else if (labels.size() != elements.size()) {
        structural(path, "matrix order " + std::to_string(labels.size()) + " does not match " +
                             std::to_string(elements.size()) + " slot elements");
      }
    } else if (elements.size() >= 2) {
      report.violations.push_back(
          {Violation::Kind::missing_judgment, path, "unrated slot " + e.slot().key()});
    }
  }

  // Cluster weight matrices.
  for (const auto& [source, m] : net.cluster_weight_matrices) {
    const std::string path = "cluster_judgments." + source;
    if (net.find_cluster(source) == nullptr) {
      structural(path, "unknown cluster '" + source + "'");
      continue;
    }
    if (m.labels() != net.influenced_clusters(source)) {
      structural(path, "labels must be the clusters influenced by '" + source + "', in cluster order");
    }
  }

  // Reachability from the goal.
  if (goal != nullptr) {
    std::set<std::string> reached{goal->id};
    std::deque<std::string> queue{goal->id};
    while (!queue.empty()) {
      const std::string cur = queue.front();
      queue.pop_front();
      for (const auto& target : net.influenced_clusters(cur)) {
        if (reached.insert(target).second) queue.push_back(target);
      }
    }
    for (const auto& c : net.clusters) {
      if (!reached.contains(c.id)) {
        structural("clusters." + c.id, "cluster '" + c.id + "' is not reachable from the goal");
      }
    }
  }
  return report;
}

std::vector<PendingSlot> required_judgments(const DecisionNetwork& net) {
  std::vector<PendingSlot> out;
  for (const auto& e : net.edges) {
    if (e.matrix) continue;
    auto elements = net.slot_elements(e.slot());
    if (elements.size() < 2) continue;
    PendingSlot p{e.slot(), std::move(elements), {}};
    for (std::size_t i = 0; i < p.elements.size(); ++i)
      for (std::size_t j = i + 1; j < p.elements.size(); ++j) p.pairs.emplace_back(i, j);
    out.push_back(std::move(p));
  }
  return out;
}

DecisionNetwork attach_judgments(const DecisionNetwork& net, const JudgmentSlot& slot,
                                 ComparisonMatrix m) {
  DecisionNetwork out = net;
  auto it = std::find_if(out.edges.begin(), out.edges.end(),
                         [&](const InfluenceEdge& e) { return e.slot() == slot; });
  if (it == out.edges.end()) {
    throw Error(ErrorCode::UnknownSlot, "slot " + slot.key() + " is not declared");
  }
  const auto elements = net.slot_elements(slot);
  if (m.order() != elements.size()) {
    throw Error(ErrorCode::SlotShapeMismatch,
                "slot " + slot.key() + " compares " + std::to_string(elements.size()) +
                    " elements, matrix has order " + std::to_string(m.order()));
  }
  if (m.labels() != elements) {
    bool numeric = true;
    for (std::size_t i = 0; i < m.order(); ++i) numeric = numeric && m.labels()[i] == std::to_string(i);
    if (!numeric) {
      throw Error(ErrorCode::SlotShapeMismatch,
                  "matrix labels do not match the elements of slot " + slot.key());
    }
    m = m.with_labels(elements);
  }
  it->matrix = std::move(m);
  return out;
}

DecisionNetwork detach_judgments(const DecisionNetwork& net, const JudgmentSlot& slot) {
  DecisionNetwork out = net;
  for (auto& e : out.edges)
    if (e.slot() == slot) e.matrix.reset();
  return out;
}

}  // namespace anp

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anp/judgments.hpp"
#include "json.hpp"

namespace anp {

enum class ClusterKind { goal, criteria, alternatives, other };

std::string_view to_string(ClusterKind kind);
std::optional<ClusterKind> parse_cluster_kind(std::string_view text);

struct Node {
  std::string id;
  std::string label;
  std::string cluster_id;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Cluster {
  std::string id;
  std::string label;
  ClusterKind kind = ClusterKind::other;
  std::vector<std::string> node_ids;  // fixes supermatrix row/column order

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Identity of one comparison: the elements of `dependent_cluster` compared
/// with respect to `control_node`.
struct JudgmentSlot {
  std::string control_node;
  std::string dependent_cluster;

  /// "control:cluster"
  std::string key() const { return control_node + ":" + dependent_cluster; }
  static std::optional<JudgmentSlot> parse(std::string_view key);

  friend auto operator<=>(const JudgmentSlot&, const JudgmentSlot&) = default;
};

struct InfluenceEdge {
  std::string control_node;
  std::string dependent_cluster;
  std::optional<ComparisonMatrix> matrix;  // labels are the slot's element ids

  JudgmentSlot slot() const { return {control_node, dependent_cluster}; }
  friend bool operator==(const InfluenceEdge&, const InfluenceEdge&) = default;
};

/// A slot still waiting for judgments, with the element pairs to rate.
struct PendingSlot {
  JudgmentSlot slot;
  std::vector<std::string> elements;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Clusters, nodes and declared influence edges of a decision problem. Value
/// type: every modifying operation returns a new network.
struct DecisionNetwork {
  std::vector<Cluster> clusters;
  std::vector<Node> nodes;
  std::vector<InfluenceEdge> edges;
  /// Source cluster id -> comparison of the target clusters it influences.
  std::map<std::string, ComparisonMatrix> cluster_weight_matrices;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  const Node* find_node(std::string_view id) const;
  const Cluster* find_cluster(std::string_view id) const;
  const InfluenceEdge* find_edge(const JudgmentSlot& slot) const;
  const Cluster* goal_cluster() const;

  /// Node ids in supermatrix order: clusters in order, nodes in cluster order.
  std::vector<std::string> node_order() const;

  /// Elements compared in a slot: the dependent cluster's nodes minus the
  /// control node, in cluster order.
  std::vector<std::string> slot_elements(const JudgmentSlot& slot) const;

  /// Target clusters influenced by any node of `source_cluster`, in cluster order.
  std::vector<std::string> influenced_clusters(std::string_view source_cluster) const;

  /// Appends a cluster and its nodes; labels default to ids.
  DecisionNetwork& add_cluster(std::string id, std::string label, ClusterKind kind,
                               const std::vector<std::pair<std::string, std::string>>& nodes);
  DecisionNetwork& declare(std::string control_node, std::string dependent_cluster);

  friend bool operator==(const DecisionNetwork&, const DecisionNetwork&) = default;
};

struct Violation {
  enum class Kind { structural, missing_judgment };
  Kind kind;
  std::string path;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool clean() const { return violations.empty(); }
  /// No structural violations; unrated slots are allowed.
  bool structurally_sound() const;
};

/// Lists every invariant violation. An empty report means the network can
/// be solved.
ValidationReport validate(const DecisionNetwork& net, const RciTable& rci = RciTable::saaty1980());

/// Slots with two or more elements and no attached matrix, in edge order.
std::vector<PendingSlot> required_judgments(const DecisionNetwork& net);

/// Returns a copy with `m` attached to `slot`. Matrices built with default
/// numeric labels are relabelled to the slot's elements.
DecisionNetwork attach_judgments(const DecisionNetwork& net, const JudgmentSlot& slot,
                                 ComparisonMatrix m);

/// Returns a copy with the declared edge's matrix removed.
DecisionNetwork detach_judgments(const DecisionNetwork& net, const JudgmentSlot& slot);

bool is_valid_identifier(std::string_view id);

}  // namespace anp

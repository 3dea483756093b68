#include "support.hpp"

#include <fstream>

namespace anp::testing {

namespace fs = std::filesystem;

fs::path data_dir() { return ANP_TEST_DATA_DIR; }
fs::path oracle_path() { return ANP_TEST_ORACLE; }
fs::path anp_binary() { return ANP_TEST_BINARY; }

ModelDocument fixture(const std::string& name) { return load_file(data_dir() / (name + ".anp.json")); }

const nlohmann::json& oracle() {
  static const nlohmann::json j = nlohmann::json::parse(std::ifstream(oracle_path()));
  return j;
}

fs::path scratch_dir(const std::string& tag) {
  static Rng rng(std::random_device{}());
  auto dir = fs::temp_directory_path() / ("anp-test-" + tag + "-" + std::to_string(rng() % 1000000000));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ComparisonMatrix random_matrix(Rng& rng, std::size_t n) {
  const auto scale = saaty_scale();
  std::uniform_int_distribution<std::size_t> pick(0, scale.size() - 1);
  std::vector<PairJudgment> upper;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) upper.push_back({i, j, scale[pick(rng)]});
  return build_matrix(n, upper);
}

ComparisonMatrix consistent_matrix(Rng& rng, std::size_t n, std::vector<double>& weights) {
  std::uniform_int_distribution<int> pick(1, 9);
  std::vector<int> w(n);
  for (auto& x : w) x = pick(rng);
  std::vector<PairJudgment> upper;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) upper.push_back({i, j, SaatyJudgment(w[i], w[j])});
  double total = 0.0;
  for (int x : w) total += x;
  weights.clear();
  for (int x : w) weights.push_back(x / total);
  return build_matrix(n, upper, {}, ScaleMode::relaxed);
}

namespace {

std::vector<std::pair<std::string, std::string>> named(const std::string& prefix, std::size_t n) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(prefix + std::to_string(i + 1), "");
  return out;
}

DecisionNetwork rate_all(Rng& rng, DecisionNetwork net) {
  for (const auto& pending : required_judgments(net)) {
    net = attach_judgments(net, pending.slot, random_matrix(rng, pending.elements.size()));
  }
  return net;
}

}  // namespace

DecisionNetwork random_hierarchy(Rng& rng) {
  std::uniform_int_distribution<std::size_t> width(2, 6);
  std::bernoulli_distribution deep(0.4);
  DecisionNetwork net;
  net.add_cluster("goal", "Goal", ClusterKind::goal, {{"G", "Goal"}});
  net.add_cluster("criteria", "Criteria", ClusterKind::criteria, named("c", width(rng)));
  std::string last = "criteria";
  if (deep(rng)) {
    net.add_cluster("sub", "Subcriteria", ClusterKind::other, named("s", width(rng)));
    last = "sub";
  }
  net.add_cluster("alternatives", "Alternatives", ClusterKind::alternatives, named("a", width(rng)));
  net.declare("G", "criteria");
  for (const auto& id : net.find_cluster("criteria")->node_ids) net.declare(id, last == "sub" ? "sub" : "alternatives");
  if (last == "sub")
    for (const auto& id : net.find_cluster("sub")->node_ids) net.declare(id, "alternatives");
  return rate_all(rng, std::move(net));
}

DecisionNetwork random_feedback_network(Rng& rng) {
  std::uniform_int_distribution<std::size_t> width(2, 6);
  std::bernoulli_distribution coin(0.5);
  DecisionNetwork net;
  net.add_cluster("goal", "Goal", ClusterKind::goal, {{"G", "Goal"}});
  net.add_cluster("criteria", "Criteria", ClusterKind::criteria, named("c", width(rng)));
  net.add_cluster("alternatives", "Alternatives", ClusterKind::alternatives, named("a", width(rng)));
  net.declare("G", "criteria");
  const bool inner = coin(rng);
  for (const auto& id : net.find_cluster("criteria")->node_ids) {
    if (inner) net.declare(id, "criteria");
    net.declare(id, "alternatives");
  }
  for (const auto& id : net.find_cluster("alternatives")->node_ids) net.declare(id, "criteria");
  net = rate_all(rng, std::move(net));
  if (inner && coin(rng)) {
    const auto targets = net.influenced_clusters("criteria");
    net.cluster_weight_matrices.emplace("criteria", random_matrix(rng, targets.size()).with_labels(targets));
  }
  return net;
}

DecisionNetwork period_three_network() {
  DecisionNetwork net;
  net.add_cluster("x", "X", ClusterKind::other, {{"x1", ""}});
  net.add_cluster("y", "Y", ClusterKind::other, {{"y1", ""}});
  net.add_cluster("alternatives", "Alternatives", ClusterKind::alternatives, {{"z1", ""}});
  net.declare("x1", "y").declare("y1", "alternatives").declare("z1", "x");
  return net;
}

}  // namespace anp::testing

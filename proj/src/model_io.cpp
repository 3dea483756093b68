#include "anp/model_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <system_error>

#include "anp/error.hpp"

namespace anp {

using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::SchemaError, path + ": " + message);
}

const ojson& member(const ojson& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string get_string(const ojson& obj, const char* key, const std::string& path,
                       std::optional<std::string> fallback = std::nullopt) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    schema_error(path, std::string("missing field '") + key + "'");
  }
  if (!it->is_string()) schema_error(path + "." + key, "expected a string");
  return it->get<std::string>();
}

void check_keys(const ojson& obj, std::initializer_list<std::string_view> allowed,
                const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      schema_error(path, "unknown field '" + it.key() + "'");
    }
  }
}

std::string quote_key(const std::string& key) { return "['" + key + "']"; }

std::pair<std::string, std::string> split_pair(const std::string& key, const std::string& path) {
  const auto comma = key.find(',');
  if (comma == std::string::npos || key.find(',', comma + 1) != std::string::npos) {
    schema_error(path, "pair key must be 'row,col'");
  }
  return {key.substr(0, comma), key.substr(comma + 1)};
}

std::optional<std::size_t> index_in(const std::vector<std::string>& items, const std::string& id) {
  auto it = std::find(items.begin(), items.end(), id);
  if (it == items.end()) return std::nullopt;
  return static_cast<std::size_t>(it - items.begin());
}

SaatyJudgment parse_judgment(const ojson& value, ScaleMode mode, const std::string& path) {
  if (!value.is_string()) schema_error(path, "judgments are strings such as \"3\" or \"1/7\"");
  try {
    return SaatyJudgment::parse(value.get<std::string>(), mode);
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

void check_pair_order(std::size_t i, std::size_t j, const std::string& path) {
  if (i == j) schema_error(path, "diagonal entries are implicit");
  if (i > j) schema_error(path, "reciprocal stored: only the upper triangle (row before column) is kept");
}

}  // namespace

// ---------------------------------------------------------------------------
// ModelDocument

DecisionNetwork ModelDocument::network() const {
  DecisionNetwork net = topology;
  for (auto& e : net.edges) {
    e.matrix.reset();
    const auto slot = e.slot();
    const auto elements = net.slot_elements(slot);
    if (elements.size() < 2 || !slot_complete(slot)) continue;
    std::vector<PairJudgment> upper;
    for (const auto& [ij, v] : judgments.at(slot)) upper.push_back({ij.first, ij.second, v});
    e.matrix = build_matrix(elements.size(), upper, elements, ScaleMode::relaxed);
  }
  return net;
}

std::vector<PairIndex> ModelDocument::missing_pairs(const JudgmentSlot& slot) const {
  std::vector<PairIndex> out;
  const auto elements = topology.slot_elements(slot);
  auto it = judgments.find(slot);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      if (it == judgments.end() || !it->second.contains({i, j})) out.emplace_back(i, j);
    }
  }
  return out;
}

bool ModelDocument::slot_complete(const JudgmentSlot& slot) const { return missing_pairs(slot).empty(); }

void ModelDocument::set_judgment(const JudgmentSlot& slot, std::string_view row,
                                 std::string_view col, SaatyJudgment value) {
  if (topology.find_edge(slot) == nullptr) {
    throw Error(ErrorCode::UnknownSlot, "slot " + slot.key() + " is not declared");
  }
  const auto elements = topology.slot_elements(slot);
  const auto i = index_in(elements, std::string(row));
  const auto j = index_in(elements, std::string(col));
  if (!i || !j || *i == *j) {
    throw Error(ErrorCode::InvalidArgument,
                "pair (" + std::string(row) + "," + std::string(col) + ") is not in slot " + slot.key());
  }
  if (options.scale == ScaleMode::strict && !value.on_scale()) {
    throw Error(ErrorCode::InvalidScaleValue, value.to_string() + " is not on the 1..9 scale");
  }
  if (*i < *j) {
    judgments[slot][{*i, *j}] = value;
  } else {
    judgments[slot][{*j, *i}] = value.reciprocal();
  }
}

SolveOptions ModelDocument::solve_options() const {
  SolveOptions opts;
  opts.policy = options.policy;
  opts.strict = options.strict;
  opts.convergence = options.convergence;
  return opts;
}

ModelDocument document_from_network(const DecisionNetwork& net, std::string title) {
  ModelDocument doc;
  doc.title = std::move(title);
  doc.topology = net;
  for (auto& e : doc.topology.edges) {
    if (e.matrix) {
      auto& slot_judgments = doc.judgments[e.slot()];
      for (const auto& p : e.matrix->upper_triangle()) slot_judgments[{p.row, p.col}] = p.value;
      if (std::any_of(slot_judgments.begin(), slot_judgments.end(),
                      [](const auto& kv) { return !kv.second.on_scale(); })) {
        doc.options.scale = ScaleMode::relaxed;
      }
    }
    e.matrix.reset();
  }
  return doc;
}

// ---------------------------------------------------------------------------
// load / save

ModelDocument load(std::string_view bytes) {
  ojson root;
  try {
    root = ojson::parse(bytes.begin(), bytes.end());
  } catch (const ojson::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < bytes.size(); ++k) {
      if (bytes[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    if (bytes.find_first_not_of(" \t\r\n") == std::string_view::npos) {
      schema_error("$", "empty document");
    }
    schema_error("$ (line " + std::to_string(line) + ", column " + std::to_string(column) + ")",
                 "invalid JSON");
  }
  if (!root.is_object()) schema_error("$", "expected an object");
  check_keys(root,
             {"format_version", "title", "clusters", "edges", "judgments", "cluster_judgments",
              "options", "metadata"},
             "$");

  const auto& version = member(root, "format_version", "$");
  if (!version.is_number_integer()) schema_error("$.format_version", "expected an integer");
  if (version.get<int>() != kFormatVersion) {
    throw Error(ErrorCode::UnsupportedVersion,
                "format_version " + std::to_string(version.get<int>()) + " (supported: 1)");
  }

  ModelDocument doc;
  doc.title = get_string(root, "title", "$", std::string{});

  // options first: the scale mode governs judgment parsing.
  if (auto it = root.find("options"); it != root.end()) {
    const std::string path = "$.options";
    if (!it->is_object()) schema_error(path, "expected an object");
    check_keys(*it, {"policy", "strict", "scale", "tolerance", "max_power"}, path);
    if (it->contains("policy")) {
      auto p = parse_policy(get_string(*it, "policy", path));
      if (!p) schema_error(path + ".policy", "expected 'saaty1994' or 'uniform'");
      doc.options.policy = *p;
    }
    if (it->contains("strict")) {
      if (!(*it)["strict"].is_boolean()) schema_error(path + ".strict", "expected a boolean");
      doc.options.strict = (*it)["strict"].get<bool>();
    }
    if (it->contains("scale")) {
      const auto s = get_string(*it, "scale", path);
      if (s != "strict" && s != "relaxed") schema_error(path + ".scale", "expected 'strict' or 'relaxed'");
      doc.options.scale = s == "strict" ? ScaleMode::strict : ScaleMode::relaxed;
    }
    if (it->contains("tolerance")) {
      const auto& t = (*it)["tolerance"];
      if (!t.is_number() || !(t.get<double>() > 0.0)) schema_error(path + ".tolerance", "expected a positive number");
      doc.options.convergence.tolerance = t.get<double>();
    }
    if (it->contains("max_power")) {
      const auto& m = (*it)["max_power"];
      if (!m.is_number_unsigned() || m.get<std::uint64_t>() == 0) {
        schema_error(path + ".max_power", "expected a positive integer");
      }
      doc.options.convergence.max_power = m.get<std::uint64_t>();
    }
  }

  // Topology.
  auto& net = doc.topology;
  const auto& clusters = member(root, "clusters", "$");
  if (!clusters.is_array()) schema_error("$.clusters", "expected an array");
  std::set<std::string> node_ids;
  std::set<std::string> cluster_ids;
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    const std::string path = "$.clusters[" + std::to_string(ci) + "]";
    const auto& c = clusters[ci];
    if (!c.is_object()) schema_error(path, "expected an object");
    check_keys(c, {"id", "label", "kind", "nodes"}, path);
    const auto id = get_string(c, "id", path);
    if (!is_valid_identifier(id)) schema_error(path + ".id", "identifiers use [A-Za-z0-9_.-]");
    if (!cluster_ids.insert(id).second) schema_error(path + ".id", "duplicate cluster id '" + id + "'");
    const auto kind = parse_cluster_kind(get_string(c, "kind", path));
    if (!kind) schema_error(path + ".kind", "expected goal, criteria, alternatives or other");
    const auto& nodes = member(c, "nodes", path);
    if (!nodes.is_array()) schema_error(path + ".nodes", "expected an array");
    std::vector<std::pair<std::string, std::string>> members;
    for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
      const std::string npath = path + ".nodes[" + std::to_string(ni) + "]";
      const auto& n = nodes[ni];
      if (!n.is_object()) schema_error(npath, "expected an object");
      check_keys(n, {"id", "label"}, npath);
      const auto nid = get_string(n, "id", npath);
      if (!is_valid_identifier(nid)) schema_error(npath + ".id", "identifiers use [A-Za-z0-9_.-]");
      if (!node_ids.insert(nid).second) schema_error(npath + ".id", "duplicate node id '" + nid + "'");
      members.emplace_back(nid, get_string(n, "label", npath, nid));
    }
    net.add_cluster(id, get_string(c, "label", path, id), *kind, members);
  }

  const auto& edges = member(root, "edges", "$");
  if (!edges.is_array()) schema_error("$.edges", "expected an array");
  for (std::size_t ei = 0; ei < edges.size(); ++ei) {
    const std::string path = "$.edges[" + std::to_string(ei) + "]";
    const auto& e = edges[ei];
    if (!e.is_object()) schema_error(path, "expected an object");
    check_keys(e, {"control", "cluster"}, path);
    JudgmentSlot slot{get_string(e, "control", path), get_string(e, "cluster", path)};
    if (!node_ids.contains(slot.control_node)) schema_error(path + ".control", "unknown node '" + slot.control_node + "'");
    if (!cluster_ids.contains(slot.dependent_cluster)) {
      schema_error(path + ".cluster", "unknown cluster '" + slot.dependent_cluster + "'");
    }
    if (net.find_edge(slot) != nullptr) schema_error(path, "duplicate edge " + slot.key());
    net.declare(slot.control_node, slot.dependent_cluster);
  }

  if (auto it = root.find("judgments"); it != root.end()) {
    if (!it->is_object()) schema_error("$.judgments", "expected an object");
    for (auto sit = it->begin(); sit != it->end(); ++sit) {
      const std::string path = "$.judgments" + quote_key(sit.key());
      const auto slot = JudgmentSlot::parse(sit.key());
      if (!slot || net.find_edge(*slot) == nullptr) schema_error(path, "no declared edge for this slot");
      if (!sit->is_object()) schema_error(path, "expected an object");
      const auto elements = net.slot_elements(*slot);
      auto& target = doc.judgments[*slot];
      for (auto pit = sit->begin(); pit != sit->end(); ++pit) {
        const std::string ppath = path + quote_key(pit.key());
        const auto [row, col] = split_pair(pit.key(), ppath);
        const auto i = index_in(elements, row);
        const auto j = index_in(elements, col);
        if (!i || !j) schema_error(ppath, "pair is not in this slot's elements");
        check_pair_order(*i, *j, ppath);
        target[{*i, *j}] = parse_judgment(*pit, doc.options.scale, ppath);
      }
    }
  }

  if (auto it = root.find("cluster_judgments"); it != root.end()) {
    if (!it->is_object()) schema_error("$.cluster_judgments", "expected an object");
    for (auto sit = it->begin(); sit != it->end(); ++sit) {
      const std::string path = "$.cluster_judgments" + quote_key(sit.key());
      if (!cluster_ids.contains(sit.key())) schema_error(path, "unknown cluster");
      if (!sit->is_object()) schema_error(path, "expected an object");
      const auto targets = net.influenced_clusters(sit.key());
      if (targets.size() < 2) schema_error(path, "cluster influences fewer than two clusters");
      std::vector<PairJudgment> upper;
      for (auto pit = sit->begin(); pit != sit->end(); ++pit) {
        const std::string ppath = path + quote_key(pit.key());
        const auto [row, col] = split_pair(pit.key(), ppath);
        const auto i = index_in(targets, row);
        const auto j = index_in(targets, col);
        if (!i || !j) schema_error(ppath, "pair is not among the influenced clusters");
        check_pair_order(*i, *j, ppath);
        upper.push_back({*i, *j, parse_judgment(*pit, doc.options.scale, ppath)});
      }
      try {
        net.cluster_weight_matrices.emplace(sit.key(),
                                            build_matrix(targets.size(), upper, targets, doc.options.scale));
      } catch (const Error& e) {
        schema_error(path, e.what());
      }
    }
  }

  if (auto it = root.find("metadata"); it != root.end()) {
    if (!it->is_object()) schema_error("$.metadata", "expected an object");
    net.metadata = *it;
  }
  return doc;
}

std::string save(const ModelDocument& doc) {
  const auto& net = doc.topology;
  ojson root = ojson::object();
  root["format_version"] = doc.format_version;
  root["title"] = doc.title;

  ojson clusters = ojson::array();
  for (const auto& c : net.clusters) {
    ojson jc = ojson::object();
    jc["id"] = c.id;
    jc["label"] = c.label;
    jc["kind"] = std::string(to_string(c.kind));
    ojson nodes = ojson::array();
    for (const auto& id : c.node_ids) {
      const Node* n = net.find_node(id);
      ojson jn = ojson::object();
      jn["id"] = id;
      jn["label"] = n ? n->label : id;
      nodes.push_back(std::move(jn));
    }
    jc["nodes"] = std::move(nodes);
    clusters.push_back(std::move(jc));
  }
  root["clusters"] = std::move(clusters);

  ojson edges = ojson::array();
  for (const auto& e : net.edges) {
    ojson je = ojson::object();
    je["control"] = e.control_node;
    je["cluster"] = e.dependent_cluster;
    edges.push_back(std::move(je));
  }
  root["edges"] = std::move(edges);

  ojson judgments = ojson::object();
  for (const auto& e : net.edges) {
    auto it = doc.judgments.find(e.slot());
    if (it == doc.judgments.end() || it->second.empty()) continue;
    const auto elements = net.slot_elements(e.slot());
    ojson js = ojson::object();
    for (const auto& [ij, v] : it->second) js[elements[ij.first] + "," + elements[ij.second]] = v.to_string();
    judgments[e.slot().key()] = std::move(js);
  }
  root["judgments"] = std::move(judgments);

  ojson cluster_judgments = ojson::object();
  for (const auto& c : net.clusters) {
    auto it = net.cluster_weight_matrices.find(c.id);
    if (it == net.cluster_weight_matrices.end()) continue;
    ojson js = ojson::object();
    for (const auto& p : it->second.upper_triangle()) {
      js[it->second.labels()[p.row] + "," + it->second.labels()[p.col]] = p.value.to_string();
    }
    cluster_judgments[c.id] = std::move(js);
  }
  root["cluster_judgments"] = std::move(cluster_judgments);

  ojson options = ojson::object();
  options["policy"] = std::string(to_string(doc.options.policy));
  options["strict"] = doc.options.strict;
  options["scale"] = doc.options.scale == ScaleMode::strict ? "strict" : "relaxed";
  options["tolerance"] = doc.options.convergence.tolerance;
  options["max_power"] = doc.options.convergence.max_power;
  root["options"] = std::move(options);
  root["metadata"] = net.metadata.is_object() ? net.metadata : ojson::object();
  return root.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelDocument load_file(const std::filesystem::path& path) { return load(read_file(path)); }

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw std::system_error(errno, std::generic_category(), "write failed " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string sha256_digest(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  out << "sha256:";
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return out.str();
}

// ---------------------------------------------------------------------------
// Results

namespace {

MatrixResult to_matrix_result(const Supermatrix& sm) {
  MatrixResult r;
  r.index = sm.index;
  r.clusters = sm.clusters;
  for (std::size_t i = 0; i < sm.order(); ++i) {
    std::vector<double> row(sm.order());
    for (std::size_t j = 0; j < sm.order(); ++j) row[j] = sm.entries(i, j);
    r.rows.push_back(std::move(row));
  }
  return r;
}

ojson matrix_json(const MatrixResult& m) {
  ojson j = ojson::object();
  j["index"] = m.index;
  j["clusters"] = m.clusters;
  j["rows"] = m.rows;
  return j;
}

MatrixResult matrix_from_json(const ojson& j) {
  MatrixResult m;
  m.index = j.at("index").get<std::vector<std::string>>();
  m.clusters = j.at("clusters").get<std::vector<std::string>>();
  m.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  return m;
}

ojson result_body(const ResultDocument& r) {
  ojson root = ojson::object();
  root["engine_version"] = r.engine_version;
  root["input_digest"] = r.input_digest;
  root["title"] = r.title;
  root["policy"] = std::string(to_string(r.policy));
  root["strict"] = r.strict;
  ojson labels = ojson::object();
  for (const auto& [id, label] : r.labels) labels[id] = label;
  root["labels"] = std::move(labels);

  ojson slots = ojson::array();
  for (const auto& s : r.slots) {
    ojson js = ojson::object();
    js["slot"] = s.slot;
    js["control"] = s.control;
    js["cluster"] = s.cluster;
    js["elements"] = s.elements;
    js["matrix"] = s.matrix;
    js["weights"] = s.weights;
    js["lambda_max"] = s.lambda_max;
    js["ci"] = s.ci;
    js["cr"] = s.cr;
    js["verdict"] = std::string(to_string(s.verdict));
    js["threshold"] = s.threshold;
    slots.push_back(std::move(js));
  }
  root["slots"] = std::move(slots);

  ojson cw = ojson::object();
  for (const auto& [source, targets] : r.cluster_weights) {
    ojson t = ojson::object();
    for (const auto& [target, w] : targets) t[target] = w;
    cw[source] = std::move(t);
  }
  root["cluster_weights"] = std::move(cw);
  root["unweighted"] = matrix_json(r.unweighted);
  root["weighted"] = matrix_json(r.weighted);
  root["limit"] = matrix_json(r.limit);

  ojson ranking = ojson::object();
  ranking["column"] = r.ranking_column;
  ranking["iterations"] = r.iterations;
  ranking["residual"] = r.residual;
  ranking["cesaro_used"] = r.cesaro_used;
  ojson entries = ojson::array();
  for (const auto& e : r.ranking) {
    ojson je = ojson::object();
    je["id"] = e.id;
    je["label"] = e.label;
    je["limit_weight"] = e.limit_weight;
    je["normalized"] = e.normalized;
    entries.push_back(std::move(je));
  }
  ranking["alternatives"] = std::move(entries);
  root["ranking"] = std::move(ranking);
  return root;
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

std::string label_of(const ResultDocument& r, const std::string& id) {
  auto it = r.labels.find(id);
  return it == r.labels.end() ? id : it->second;
}

std::string markdown_cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += "\\|";
    else out += c;
  }
  return out;
}

}  // namespace

ResultDocument make_result(const ModelDocument& doc, const Solution& solution,
                           const SolveOptions& opts) {
  ResultDocument r;
  r.input_digest = sha256_digest(save(doc));
  r.title = doc.title;
  r.policy = opts.policy;
  r.strict = opts.strict;
  for (const auto& n : doc.topology.nodes) r.labels[n.id] = n.label;

  for (const auto& ev : solution.slots) {
    SlotResult s;
    s.slot = ev.slot.key();
    s.control = ev.slot.control_node;
    s.cluster = ev.slot.dependent_cluster;
    s.elements = ev.elements;
    if (ev.matrix) {
      for (std::size_t i = 0; i < ev.matrix->order(); ++i)
        for (std::size_t j = 0; j < ev.matrix->order(); ++j)
          s.matrix.push_back(ev.matrix->judgment(i, j).to_string());
    }
    s.weights = ev.priorities.weights;
    s.lambda_max = ev.priorities.lambda_max;
    s.ci = ev.priorities.ci;
    s.cr = ev.priorities.cr;
    s.verdict = ev.verdict.verdict;
    s.threshold = ev.verdict.threshold;
    r.slots.push_back(std::move(s));
  }
  r.cluster_weights = solution.cluster_weights.by_source;
  r.unweighted = to_matrix_result(solution.unweighted);
  r.weighted = to_matrix_result(solution.weighted);
  r.limit = to_matrix_result(solution.limit_matrix);
  for (const auto& a : solution.ranking.ranking) {
    r.ranking.push_back({a.id, a.label, a.limit_weight, a.normalized});
  }
  r.ranking_column = solution.ranking.source_column;
  r.iterations = solution.ranking.convergence.iterations;
  r.residual = solution.ranking.convergence.residual;
  r.cesaro_used = solution.ranking.convergence.cesaro_used;
  return r;
}

std::string result_to_json(const ResultDocument& res) {
  ojson root = result_body(res);
  root["content_digest"] = sha256_digest(root.dump());
  return root.dump(2) + "\n";
}

ResultDocument result_from_json(std::string_view bytes) {
  ojson root;
  try {
    root = ojson::parse(bytes.begin(), bytes.end());
  } catch (const ojson::parse_error&) {
    schema_error("$", "invalid JSON");
  }
  if (!root.is_object() || !root.contains("content_digest")) {
    schema_error("$", "not a result document");
  }
  const auto stored = root["content_digest"].get<std::string>();
  root.erase("content_digest");
  if (sha256_digest(root.dump()) != stored) {
    throw Error(ErrorCode::IntegrityFailure, "result content digest mismatch");
  }

  try {
    ResultDocument r;
    r.engine_version = root.at("engine_version").get<std::string>();
    r.input_digest = root.at("input_digest").get<std::string>();
    r.title = root.at("title").get<std::string>();
    r.policy = parse_policy(root.at("policy").get<std::string>()).value();
    r.strict = root.at("strict").get<bool>();
    for (auto it = root.at("labels").begin(); it != root.at("labels").end(); ++it) {
      r.labels[it.key()] = it->get<std::string>();
    }
    for (const auto& js : root.at("slots")) {
      SlotResult s;
      s.slot = js.at("slot").get<std::string>();
      s.control = js.at("control").get<std::string>();
      s.cluster = js.at("cluster").get<std::string>();
      s.elements = js.at("elements").get<std::vector<std::string>>();
      s.matrix = js.at("matrix").get<std::vector<std::string>>();
      s.weights = js.at("weights").get<std::vector<double>>();
      s.lambda_max = js.at("lambda_max").get<double>();
      s.ci = js.at("ci").get<double>();
      s.cr = js.at("cr").get<double>();
      s.verdict = parse_verdict(js.at("verdict").get<std::string>()).value();
      s.threshold = js.at("threshold").get<double>();
      r.slots.push_back(std::move(s));
    }
    for (auto it = root.at("cluster_weights").begin(); it != root.at("cluster_weights").end(); ++it) {
      for (auto jt = it->begin(); jt != it->end(); ++jt) r.cluster_weights[it.key()][jt.key()] = jt->get<double>();
    }
    r.unweighted = matrix_from_json(root.at("unweighted"));
    r.weighted = matrix_from_json(root.at("weighted"));
    r.limit = matrix_from_json(root.at("limit"));
    const auto& ranking = root.at("ranking");
    r.ranking_column = ranking.at("column").get<std::string>();
    r.iterations = ranking.at("iterations").get<std::size_t>();
    r.residual = ranking.at("residual").get<double>();
    r.cesaro_used = ranking.at("cesaro_used").get<bool>();
    for (const auto& je : ranking.at("alternatives")) {
      r.ranking.push_back({je.at("id").get<std::string>(), je.at("label").get<std::string>(),
                           je.at("limit_weight").get<double>(), je.at("normalized").get<double>()});
    }
    return r;
  } catch (const ojson::exception& e) {
    schema_error("$", std::string("malformed result: ") + e.what());
  } catch (const std::bad_optional_access&) {
    schema_error("$", "malformed result: bad enumeration value");
  }
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  if (text == "markdown" || text == "md") return ReportFormat::markdown;
  return std::nullopt;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string export_report(const ResultDocument& res, ReportFormat format) {
  switch (format) {
    case ReportFormat::json:
      return result_to_json(res);

    case ReportFormat::csv: {
      std::ostringstream out;
      bool first = true;
      for (const auto& s : res.slots) {
        if (s.matrix.empty()) continue;
        if (!first) out << "\n";
        first = false;
        out << "section," << csv_field("With respect to " + label_of(res, s.control) + " (" + s.cluster + ")")
            << "\n";
        out << "slot," << csv_field(s.slot) << "\n";
        for (const auto& e : s.elements) out << "," << csv_field(e);
        out << ",E.V\n";
        const std::size_t n = s.elements.size();
        for (std::size_t i = 0; i < n; ++i) {
          out << csv_field(s.elements[i]);
          for (std::size_t j = 0; j < n; ++j) out << "," << csv_field(s.matrix[i * n + j]);
          out << "," << fixed(s.weights[i]) << "\n";
        }
        out << "CR," << fixed(s.cr) << "\n";
        out << "verdict," << to_string(s.verdict) << "\n";
      }
      if (!first) out << "\n";
      out << "section,ranking\n";
      out << "alternative,label,limit_weight,normalized\n";
      for (const auto& e : res.ranking) {
        out << csv_field(e.id) << "," << csv_field(e.label) << "," << fixed(e.limit_weight) << ","
            << fixed(e.normalized) << "\n";
      }
      return out.str();
    }

    case ReportFormat::markdown: {
      std::ostringstream out;
      out << "# " << (res.title.empty() ? "ANP result" : res.title) << "\n\n";
      out << "## Weights of alternatives from limit matrix\n\n";
      out << "| Rank | Alternative | Limit weight | Normalized |\n";
      out << "|---:|---|---:|---:|\n";
      std::size_t k = 1;
      for (const auto& e : res.ranking) {
        out << "| " << k++ << " | " << markdown_cell(e.label) << " | " << fixed(e.limit_weight) << " | "
            << fixed(e.normalized) << " |\n";
      }
      out << "\n## Consistency\n\n";
      out << "| Slot | n | lambda_max | CI | CR | Threshold | Verdict |\n";
      out << "|---|---:|---:|---:|---:|---:|---|\n";
      for (const auto& s : res.slots) {
        if (s.matrix.empty()) continue;
        out << "| With respect to " << markdown_cell(label_of(res, s.control)) << " (" << s.cluster << ") | "
            << s.elements.size() << " | " << fixed(s.lambda_max) << " | " << fixed(s.ci) << " | "
            << fixed(s.cr) << " | " << fixed(s.threshold, 2) << " | " << to_string(s.verdict) << " |\n";
      }
      out << "\n## Limit priorities\n\n";
      out << "| Node | Cluster | Weight |\n";
      out << "|---|---|---:|\n";
      const auto col = std::find(res.limit.index.begin(), res.limit.index.end(), res.ranking_column);
      const std::size_t c = col == res.limit.index.end() ? 0 : static_cast<std::size_t>(col - res.limit.index.begin());
      for (std::size_t i = 0; i < res.limit.index.size(); ++i) {
        out << "| " << markdown_cell(label_of(res, res.limit.index[i])) << " | " << res.limit.clusters[i] << " | "
            << fixed(res.limit.rows[i][c]) << " |\n";
      }
      out << "\nInput digest: `" << res.input_digest << "`\n";
      return out.str();
    }
  }
  return {};
}

}  // namespace anp

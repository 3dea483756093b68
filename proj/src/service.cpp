#include "anp/service.hpp"

#include <algorithm>
#include <fstream>

#include "anp/error.hpp"
#include "httplib.h"

namespace anp {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// ModelStore

ModelStore::ModelStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
  for (const auto& f : fs::directory_iterator(root_)) {
    const auto name = f.path().filename().string();
    const std::string suffix = ".anp.json";
    if (name.size() <= suffix.size() || !name.ends_with(suffix)) continue;
    const auto id = name.substr(0, name.size() - suffix.size());
    Entry e;
    e.doc = load_file(f.path());
    e.revision = 1;
    if (std::ifstream rev(root_ / (id + ".rev")); rev) rev >> e.revision;
    entries_[id] = std::move(e);
    if (id.starts_with("model-")) {
      try {
        next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(id.substr(6)) + 1);
      } catch (const std::exception&) {
      }
    }
  }
}

std::mutex& ModelStore::guard(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto& g = guards_[id];
  if (!g) g = std::make_unique<std::mutex>();
  return *g;
}

void ModelStore::persist(const std::string& id, const Entry& entry) {
  write_file_atomic(root_ / (id + ".anp.json"), save(entry.doc));
  write_file_atomic(root_ / (id + ".rev"), std::to_string(entry.revision) + "\n");
}

std::string ModelStore::create(const ModelDocument& doc) {
  std::string id;
  {
    std::lock_guard lock(mutex_);
    id = "model-" + std::to_string(next_id_++);
  }
  Entry entry{doc, 1};
  std::lock_guard write_lock(guard(id));
  persist(id, entry);
  std::lock_guard lock(mutex_);
  entries_[id] = std::move(entry);
  return id;
}

std::optional<ModelStore::Entry> ModelStore::get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(id);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<std::string, ModelStore::Entry>> ModelStore::list() const {
  std::lock_guard lock(mutex_);
  return {entries_.begin(), entries_.end()};
}

void ModelStore::put_result(const std::string& id, const std::string& bytes) {
  write_file_atomic(root_ / (id + ".result.json"), bytes);
}

std::optional<std::string> ModelStore::result(const std::string& id) const {
  const auto path = root_ / (id + ".result.json");
  if (!fs::exists(path)) return std::nullopt;
  return read_file(path);
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const ojson& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", kJson);
}

void send_error(httplib::Response& res, int status, const std::string& message,
                ojson extra = ojson::object()) {
  ojson body = ojson::object();
  body["error"] = message;
  for (auto it = extra.begin(); it != extra.end(); ++it) body[it.key()] = *it;
  send_json(res, status, body);
}

std::optional<ojson> parse_body(const httplib::Request& req, httplib::Response& res, bool allow_empty) {
  if (req.body.empty() && allow_empty) return ojson::object();
  try {
    auto body = ojson::parse(req.body);
    if (!body.is_object()) {
      send_error(res, 400, "request body must be a JSON object");
      return std::nullopt;
    }
    return body;
  } catch (const ojson::parse_error&) {
    send_error(res, 400, "request body is not valid JSON");
    return std::nullopt;
  }
}

ojson ranking_json(const RankingReport& r) {
  ojson j = ojson::object();
  j["column"] = r.source_column;
  j["iterations"] = r.convergence.iterations;
  j["cesaro_used"] = r.convergence.cesaro_used;
  ojson alts = ojson::array();
  for (const auto& a : r.ranking) {
    ojson e = ojson::object();
    e["id"] = a.id;
    e["label"] = a.label;
    e["limit_weight"] = a.limit_weight;
    e["normalized"] = a.normalized;
    alts.push_back(std::move(e));
  }
  j["alternatives"] = std::move(alts);
  return j;
}

ojson pending_json(const ModelDocument& doc) {
  ojson out = ojson::array();
  for (const auto& e : doc.topology.edges) {
    const auto slot = e.slot();
    const auto missing = doc.missing_pairs(slot);
    if (missing.empty()) continue;
    const auto elements = doc.topology.slot_elements(slot);
    ojson j = ojson::object();
    j["slot"] = slot.key();
    ojson pairs = ojson::array();
    for (const auto& [i, k] : missing) pairs.push_back(elements[i] + "," + elements[k]);
    j["missing"] = std::move(pairs);
    out.push_back(std::move(j));
  }
  return out;
}

SolveOptions effective_options(const ModelDocument& doc, const ServiceConfig& config, const ojson& body) {
  SolveOptions opts = doc.solve_options();
  if (config.policy) opts.policy = *config.policy;
  if (config.strict) opts.strict = *config.strict;
  if (auto it = body.find("policy"); it != body.end()) {
    auto p = it->is_string() ? parse_policy(it->get<std::string>()) : std::nullopt;
    if (!p) throw Error(ErrorCode::InvalidArgument, "policy must be 'saaty1994' or 'uniform'");
    opts.policy = *p;
  }
  if (auto it = body.find("strict"); it != body.end()) {
    if (!it->is_boolean()) throw Error(ErrorCode::InvalidArgument, "strict must be a boolean");
    opts.strict = it->get<bool>();
  }
  return opts;
}

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)), store_(config_.store_dir) {}

bool Service::listen(const std::string& host, int port) {
  httplib::Server server;
  register_routes(server);
  return server.listen(host, port);
}

void Service::register_routes(httplib::Server& server) {
  if (config_.ui_dir) server.set_mount_point("/", config_.ui_dir->string());

  server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    ojson body = ojson::object();
    body["status"] = "ok";
    body["engine"] = std::string(kEngineVersion);
    send_json(res, 200, body);
  });

  server.Post("/api/models", [this](const httplib::Request& req, httplib::Response& res) {
    ModelDocument doc;
    try {
      doc = load(req.body);
    } catch (const Error& e) {
      send_error(res, 400, e.what());
      return;
    }
    const auto report = validate(doc.topology);
    if (!report.structurally_sound()) {
      ojson violations = ojson::array();
      for (const auto& v : report.violations) {
        if (v.kind == Violation::Kind::structural) violations.push_back(v.path + ": " + v.message);
      }
      send_error(res, 400, "invalid topology", ojson{{"violations", violations}});
      return;
    }
    const auto id = store_.create(doc);
    ojson body = ojson::object();
    body["id"] = id;
    body["revision"] = 1;
    res.set_header("Location", "/api/models/" + id);
    send_json(res, 201, body);
  });

  server.Get("/api/models", [this](const httplib::Request&, httplib::Response& res) {
    ojson out = ojson::array();
    for (const auto& [id, entry] : store_.list()) {
      ojson j = ojson::object();
      j["id"] = id;
      j["title"] = entry.doc.title;
      j["revision"] = entry.revision;
      j["pending_slots"] = pending_json(entry.doc).size();
      out.push_back(std::move(j));
    }
    send_json(res, 200, out);
  });

  server.Get(R"(/api/models/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const auto entry = store_.get(req.matches[1]);
    if (!entry) {
      send_error(res, 404, "unknown model");
      return;
    }
    res.set_header("X-Revision", std::to_string(entry->revision));
    res.set_header("ETag", "\"" + std::to_string(entry->revision) + "\"");
    res.status = 200;
    res.set_content(save(entry->doc), kJson);
  });

  server.Put(R"(/api/models/([^/]+)/judgments/([^/]+)/([^/]+))",
             [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const auto entry = store_.get(id);
    if (!entry) {
      send_error(res, 404, "unknown model");
      return;
    }
    const auto slot = JudgmentSlot::parse(req.matches[2].str());
    if (!slot || entry->doc.topology.find_edge(*slot) == nullptr) {
      send_error(res, 404, "unknown slot");
      return;
    }
    const std::string pair = req.matches[3];
    const auto comma = pair.find(',');
    const auto elements = entry->doc.topology.slot_elements(*slot);
    const std::string row = comma == std::string::npos ? "" : pair.substr(0, comma);
    const std::string col = comma == std::string::npos ? "" : pair.substr(comma + 1);
    if (std::find(elements.begin(), elements.end(), row) == elements.end() ||
        std::find(elements.begin(), elements.end(), col) == elements.end() || row == col) {
      send_error(res, 404, "unknown pair");
      return;
    }

    const auto body = parse_body(req, res, false);
    if (!body) return;
    if (!body->contains("revision") || !(*body)["revision"].is_number_unsigned()) {
      send_error(res, 400, "expected revision is required");
      return;
    }
    if (!body->contains("value") || !(*body)["value"].is_string()) {
      send_error(res, 400, "value must be a string such as \"3\" or \"1/7\"");
      return;
    }
    SaatyJudgment value;
    try {
      value = SaatyJudgment::parse((*body)["value"].get<std::string>(), entry->doc.options.scale);
    } catch (const Error& e) {
      send_error(res, 422, e.what());
      return;
    }

    ModelStore::Entry updated;
    try {
      updated = store_.update(id, (*body)["revision"].get<std::uint64_t>(),
                              [&](ModelDocument& doc) { doc.set_judgment(*slot, row, col, value); });
    } catch (const RevisionConflict& e) {
      send_error(res, 409, e.what(), ojson{{"revision", e.current}});
      return;
    }

    const auto& doc = updated.doc;
    const auto missing = doc.missing_pairs(*slot);
    const std::size_t total = elements.size() * (elements.size() - 1) / 2;
    ojson snap = ojson::object();
    snap["model"] = id;
    snap["revision"] = updated.revision;
    snap["slot"] = slot->key();
    snap["elements"] = elements;
    snap["filled"] = total - missing.size();
    snap["total"] = total;
    snap["complete"] = missing.empty();
    if (missing.empty()) {
      const auto net = doc.network();
      const auto& m = *net.find_edge(*slot)->matrix;
      const auto opts = effective_options(doc, config_, ojson::object());
      const auto pv = principal_eigenvector(m, opts.rci);
      const auto verdict = screen_consistency(pv, m.order(), opts.policy);
      snap["weights"] = pv.weights;
      snap["lambda_max"] = pv.lambda_max;
      snap["ci"] = pv.ci;
      snap["cr"] = pv.cr;
      snap["policy"] = std::string(to_string(opts.policy));
      snap["threshold"] = verdict.threshold;
      snap["verdict"] = std::string(to_string(verdict.verdict));
    }
    send_json(res, 200, snap);
  });

  server.Post(R"(/api/models/([^/]+)/solve)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const auto entry = store_.get(id);
    if (!entry) {
      send_error(res, 404, "unknown model");
      return;
    }
    const auto body = parse_body(req, res, true);
    if (!body) return;
    const auto pending = pending_json(entry->doc);
    if (!pending.empty()) {
      send_error(res, 409, "model is incomplete", ojson{{"remaining", pending}});
      return;
    }
    try {
      const auto opts = effective_options(entry->doc, config_, *body);
      const auto solution = solve(entry->doc.network(), opts);
      const auto bytes = result_to_json(make_result(entry->doc, solution, opts));
      store_.put_result(id, bytes);
      res.status = 200;
      res.set_content(bytes, kJson);
    } catch (const ConsistencyError& e) {
      send_error(res, 422, e.what(), ojson{{"failing", e.failing_slots()}});
    } catch (const Error& e) {
      const int status = e.code() == ErrorCode::ConvergenceFailure ? 500 : 422;
      send_error(res, status, e.what());
    }
  });

  server.Post(R"(/api/models/([^/]+)/whatif)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const auto entry = store_.get(id);
    if (!entry) {
      send_error(res, 404, "unknown model");
      return;
    }
    const auto body = parse_body(req, res, true);
    if (!body) return;
    const auto pending = pending_json(entry->doc);
    if (!pending.empty()) {
      send_error(res, 409, "model is incomplete", ojson{{"remaining", pending}});
      return;
    }
    try {
      std::vector<JudgmentOverride> overrides;
      if (auto it = body->find("overrides"); it != body->end()) {
        if (!it->is_array()) throw Error(ErrorCode::InvalidOverride, "overrides must be an array");
        for (const auto& o : *it) {
          if (!o.is_object() || !o.contains("slot") || !o.contains("pair") || !o.contains("value") ||
              !o["slot"].is_string() || !o["pair"].is_string() || !o["value"].is_string()) {
            throw Error(ErrorCode::InvalidOverride, "each override needs string slot, pair and value");
          }
          const auto slot = JudgmentSlot::parse(o["slot"].get<std::string>());
          const auto pair = o["pair"].get<std::string>();
          const auto comma = pair.find(',');
          if (!slot || comma == std::string::npos) throw Error(ErrorCode::InvalidOverride, "malformed slot or pair");
          overrides.push_back({*slot, pair.substr(0, comma), pair.substr(comma + 1),
                               SaatyJudgment::parse(o["value"].get<std::string>(), entry->doc.options.scale)});
        }
      }
      const auto opts = effective_options(entry->doc, config_, *body);
      const auto report = whatif(entry->doc.network(), overrides, opts);
      ojson out = ojson::object();
      out["revision"] = entry->revision;
      out["baseline"] = ranking_json(report.baseline);
      out["perturbed"] = ranking_json(report.perturbed);
      ojson delta = ojson::array();
      for (const auto& d : report.delta) {
        ojson j = ojson::object();
        j["id"] = d.id;
        j["weight_delta"] = d.weight_delta;
        j["normalized_delta"] = d.normalized_delta;
        j["rank_delta"] = d.rank_delta;
        delta.push_back(std::move(j));
      }
      out["delta"] = std::move(delta);
      send_json(res, 200, out);
    } catch (const Error& e) {
      const int status = e.code() == ErrorCode::ConvergenceFailure ? 500 : 422;
      send_error(res, status, e.what());
    }
  });

  server.Get(R"(/api/models/([^/]+)/result)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    if (!store_.get(id)) {
      send_error(res, 404, "unknown model");
      return;
    }
    const auto bytes = store_.result(id);
    if (!bytes) {
      send_error(res, 404, "model has not been solved");
      return;
    }
    res.status = 200;
    res.set_content(*bytes, kJson);
  });
}

}  // namespace anp

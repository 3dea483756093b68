#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "anp/model_io.hpp"

namespace httplib {
class Server;
}

namespace anp {

/// Thrown by ModelStore::update when the caller's revision is stale.
class RevisionConflict : public std::runtime_error {
 public:
  RevisionConflict(std::uint64_t expected, std::uint64_t actual)
      : std::runtime_error("revision conflict: expected " + std::to_string(expected) + ", current " +
                           std::to_string(actual)),
        current(actual) {}
  std::uint64_t current;
};

/// One canonical .anp.json per model under a root directory, plus a revision
/// sidecar and the last solve result. Revisions start at 1 and only grow.
class ModelStore {
 public:
  struct Entry {
    ModelDocument doc;
    std::uint64_t revision = 0;
  };

  explicit ModelStore(std::filesystem::path root);

  std::string create(const ModelDocument& doc);
  std::optional<Entry> get(const std::string& id) const;
  std::vector<std::pair<std::string, Entry>> list() const;

  /// Applies `edit` under the model's write guard if `expected_revision`
  /// matches, persists, and returns the new entry.
  template <typename Edit>
  Entry update(const std::string& id, std::uint64_t expected_revision, Edit&& edit);

  void put_result(const std::string& id, const std::string& bytes);
  std::optional<std::string> result(const std::string& id) const;

  const std::filesystem::path& root() const noexcept { return root_; }

 private:
  std::mutex& guard(const std::string& id);
  void persist(const std::string& id, const Entry& entry);

  std::filesystem::path root_;
  mutable std::mutex mutex_;  // protects entries_ and guards_
  std::map<std::string, Entry> entries_;
  std::map<std::string, std::unique_ptr<std::mutex>> guards_;
  std::uint64_t next_id_ = 1;
};

struct ServiceConfig {
  std::filesystem::path store_dir = "anp-store";
  std::optional<ConsistencyPolicy> policy;  // unset: each model's own option
  std::optional<bool> strict;
  std::optional<std::filesystem::path> ui_dir;
};

/// HTTP routes over a ModelStore. Bodies are JSON; models use the .anp.json
/// schema byte for byte.
class Service {
 public:
  explicit Service(ServiceConfig config);

  void register_routes(httplib::Server& server);
  ModelStore& store() noexcept { return store_; }

  /// Blocks serving on host:port.
  bool listen(const std::string& host, int port);

 private:
  ServiceConfig config_;
  ModelStore store_;
};

template <typename Edit>
ModelStore::Entry ModelStore::update(const std::string& id, std::uint64_t expected_revision,
                                     Edit&& edit) {
  std::lock_guard write_lock(guard(id));
  Entry entry;
  {
    std::lock_guard lock(mutex_);
    entry = entries_.at(id);
  }
  if (entry.revision != expected_revision) throw RevisionConflict(expected_revision, entry.revision);
  edit(entry.doc);
  ++entry.revision;
  persist(id, entry);
  {
    std::lock_guard lock(mutex_);
    entries_[id] = entry;
  }
  return entry;
}

}  // namespace anp

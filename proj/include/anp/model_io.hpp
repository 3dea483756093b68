#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anp/judgments.hpp"
#include "anp/network.hpp"
#include "anp/supermatrix.hpp"
#include "json.hpp"

namespace anp {

inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kEngineVersion = "anp-engine 1.0.0";

using PairIndex = std::pair<std::size_t, std::size_t>;

struct ModelOptions {
  ConsistencyPolicy policy = ConsistencyPolicy::saaty1994;
  bool strict = false;
  ScaleMode scale = ScaleMode::strict;
  ConvergenceOptions convergence;

  friend bool operator==(const ModelOptions& a, const ModelOptions& b) {
    return a.policy == b.policy && a.strict == b.strict && a.scale == b.scale &&
           a.convergence.tolerance == b.convergence.tolerance &&
           a.convergence.max_power == b.convergence.max_power;
  }
};

/// A model file: topology plus upper-triangle judgments, possibly partial.
/// The network's edges never carry matrices here; network() attaches the
/// complete ones.
struct ModelDocument {
  int format_version = kFormatVersion;
  std::string title;
  DecisionNetwork topology;
  /// slot -> (i, j) with i < j over slot_elements -> a_ij
  std::map<JudgmentSlot, std::map<PairIndex, SaatyJudgment>> judgments;
  ModelOptions options;

  /// Topology with every complete slot's matrix attached.
  DecisionNetwork network() const;

  /// Pairs still unrated in a declared slot, in (i, j) order.
  std::vector<PairIndex> missing_pairs(const JudgmentSlot& slot) const;
  bool slot_complete(const JudgmentSlot& slot) const;

  /// Records a_{row,col}; either orientation is accepted and stored as the
  /// upper-triangle entry. Throws UnknownSlot, InvalidArgument, InvalidScaleValue.
  void set_judgment(const JudgmentSlot& slot, std::string_view row, std::string_view col,
                    SaatyJudgment value);

  SolveOptions solve_options() const;

  friend bool operator==(const ModelDocument&, const ModelDocument&) = default;
};

/// Document holding a network's attached matrices as judgments.
ModelDocument document_from_network(const DecisionNetwork& net, std::string title = {});

/// Parses and checks a model file. Throws SchemaError (with a JSON path) or
/// UnsupportedVersion.
ModelDocument load(std::string_view bytes);

/// Canonical bytes: fixed key order, rationals as "k" or "p/q", trailing LF.
std::string save(const ModelDocument& doc);

ModelDocument load_file(const std::filesystem::path& path);
/// Writes via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

/// "sha256:<hex>" of the given bytes.
std::string sha256_digest(std::string_view bytes);

struct SlotResult {
  std::string slot;
  std::string control;
  std::string cluster;
  std::vector<std::string> elements;
  std::vector<std::string> matrix;  // row-major rationals; empty for one-element slots
  std::vector<double> weights;
  double lambda_max = 0.0;
  double ci = 0.0;
  double cr = 0.0;
  Verdict verdict = Verdict::pass;
  double threshold = 0.0;

  friend bool operator==(const SlotResult&, const SlotResult&) = default;
};

struct MatrixResult {
  std::vector<std::string> index;
  std::vector<std::string> clusters;
  std::vector<std::vector<double>> rows;

  friend bool operator==(const MatrixResult&, const MatrixResult&) = default;
};

struct RankingEntry {
  std::string id;
  std::string label;
  double limit_weight = 0.0;
  double normalized = 0.0;

  friend bool operator==(const RankingEntry&, const RankingEntry&) = default;
};

struct ResultDocument {
  std::string engine_version{kEngineVersion};
  std::string input_digest;
  std::string title;
  ConsistencyPolicy policy = ConsistencyPolicy::saaty1994;
  bool strict = false;
  std::map<std::string, std::string> labels;  // node id -> label
  std::vector<SlotResult> slots;
  std::map<std::string, std::map<std::string, double>> cluster_weights;
  MatrixResult unweighted;
  MatrixResult weighted;
  MatrixResult limit;
  std::vector<RankingEntry> ranking;
  std::string ranking_column;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool cesaro_used = false;

  friend bool operator==(const ResultDocument&, const ResultDocument&) = default;
};

ResultDocument make_result(const ModelDocument& doc, const Solution& solution,
                           const SolveOptions& opts);

/// Lossless JSON with an embedded content digest.
std::string result_to_json(const ResultDocument& res);

/// Parses a result; throws IntegrityFailure when the content digest does not
/// match, SchemaError on malformed input.
ResultDocument result_from_json(std::string_view bytes);

enum class ReportFormat { json, csv, markdown };
std::optional<ReportFormat> parse_report_format(std::string_view text);

std::string export_report(const ResultDocument& res, ReportFormat format);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view text);

}  // namespace anp

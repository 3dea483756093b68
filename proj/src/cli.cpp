#include "anp/cli.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "anp/error.hpp"
#include "anp/model_io.hpp"
#include "anp/service.hpp"

namespace anp {

namespace fs = std::filesystem;

namespace {

std::atomic<bool> g_interrupted{false};

struct Style {
  bool color = false;
  std::string paint(std::string_view text, const char* code) const {
    if (!color) return std::string(text);
    return std::string("\x1b[") + code + "m" + std::string(text) + "\x1b[0m";
  }
  std::string verdict(Verdict v) const {
    std::string text(to_string(v));
    std::transform(text.begin(), text.end(), text.begin(), ::toupper);
    switch (v) {
      case Verdict::pass: return paint(text, "32");
      case Verdict::warn: return paint(text, "33");
      case Verdict::fail: return paint(text, "31");
    }
    return text;
  }
};

std::string fixed(double x, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

std::string label_of(const DecisionNetwork& net, const std::string& id) {
  const auto* n = net.find_node(id);
  return n && !n->label.empty() ? n->label : id;
}

std::string cluster_label(const DecisionNetwork& net, const std::string& id) {
  const auto* c = net.find_cluster(id);
  return c && !c->label.empty() ? c->label : id;
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConvergenceFailure: return kExitConvergence;
    case ErrorCode::ConsistencyFailure: return kExitConsistency;
    case ErrorCode::IntegrityFailure: return kExitIntegrity;
    default: return kExitInput;
  }
}

// Loads a model or reports why not. Filesystem errors count as input errors.
std::optional<ModelDocument> open_model(const std::string& path, std::ostream& err) {
  try {
    return load_file(path);
  } catch (const Error& e) {
    err << "error: " << path << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << path << ": " << e.what() << "\n";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  auto doc = open_model(path, err);
  if (!doc) return kExitInput;
  const auto net = doc->network();
  const auto report = validate(net);
  if (report.clean()) {
    out << "valid: " << net.clusters.size() << " clusters, " << net.nodes.size() << " nodes, "
        << net.edges.size() << " slots\n";
    return kExitOk;
  }
  for (const auto& v : report.violations) {
    out << (v.kind == Violation::Kind::structural ? "structural  " : "unrated     ") << v.path << ": "
        << v.message << "\n";
  }
  out << report.violations.size() << " violation(s)\n";
  return kExitConsistency;
}

struct SolveFlags {
  std::string path;
  std::string out_path;
  std::string format = "json";
  bool strict = false;
  std::string policy;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> max_power;
  bool print = false;
  bool quiet = false;
};

fs::path default_result_path(const fs::path& model) {
  auto name = model.filename().string();
  for (const std::string suffix : {".anp.json", ".json"}) {
    if (name.size() > suffix.size() && name.ends_with(suffix)) {
      name.resize(name.size() - suffix.size());
      break;
    }
  }
  return model.parent_path() / (name + ".result.json");
}

void print_ranking(const ResultDocument& r, std::ostream& out) {
  out << "Ranking (limit column " << r.ranking_column << ")\n";
  std::size_t width = 0;
  for (const auto& e : r.ranking) width = std::max(width, e.label.size());
  for (std::size_t i = 0; i < r.ranking.size(); ++i) {
    const auto& e = r.ranking[i];
    out << "  " << (i + 1) << ". " << e.label << std::string(width - e.label.size() + 2, ' ')
        << fixed(e.limit_weight) << "  normalized " << fixed(e.normalized) << "\n";
  }
}

int cmd_solve(const SolveFlags& f, std::ostream& out, std::ostream& err, const Style& style) {
  auto doc = open_model(f.path, err);
  if (!doc) return kExitInput;
  const auto format = parse_report_format(f.format);
  if (!format) {
    err << "error: unknown format '" << f.format << "'\n";
    return kExitInput;
  }

  SolveOptions opts = doc->solve_options();
  if (!f.policy.empty()) opts.policy = *parse_policy(f.policy);
  if (f.strict) opts.strict = true;
  if (f.tolerance) opts.convergence.tolerance = *f.tolerance;
  if (f.max_power) opts.convergence.max_power = *f.max_power;

  std::string bytes;
  ResultDocument result;
  try {
    const auto solution = solve(doc->network(), opts);
    result = make_result(*doc, solution, opts);
    bytes = *format == ReportFormat::json ? result_to_json(result) : export_report(result, *format);
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << "\n";
    for (const auto& s : e.failing_slots()) err << "  failing: " << s << "\n";
    return kExitConsistency;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e);
  }

  for (const auto& s : result.slots) {
    if (s.verdict == Verdict::pass) continue;
    err << "warning: " << s.slot << " CR " << fixed(s.cr) << " exceeds " << fixed(s.threshold, 2) << " ("
        << style.verdict(s.verdict) << ")\n";
  }

  const fs::path target = f.out_path.empty() ? default_result_path(f.path) : fs::path(f.out_path);
  try {
    write_file_atomic(target, bytes);
  } catch (const std::exception& e) {
    err << "error: cannot write " << target.string() << ": " << e.what() << "\n";
    return kExitInput;
  }

  if (f.print) {
    out << bytes;
  } else if (!f.quiet) {
    print_ranking(result, out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// rate

enum class Answer { value, eof };

// Reads one line; stops on EOF, stream error (EINTR) or a pending interrupt.
Answer read_line(std::istream& in, std::string& line) {
  if (interrupt_requested()) return Answer::eof;
  if (!std::getline(in, line)) return Answer::eof;
  if (interrupt_requested()) return Answer::eof;
  const auto b = line.find_first_not_of(" \t\r");
  const auto e = line.find_last_not_of(" \t\r");
  line = b == std::string::npos ? "" : line.substr(b, e - b + 1);
  return Answer::value;
}

std::size_t remaining_slots(const ModelDocument& doc) {
  std::size_t n = 0;
  for (const auto& e : doc.topology.edges) n += doc.slot_complete(e.slot()) ? 0 : 1;
  return n;
}

int cmd_rate(const std::string& path, const std::string& out_path, std::istream& in, std::ostream& out,
             std::ostream& err, const Style& style) {
  auto loaded = open_model(path, err);
  if (!loaded) return kExitInput;
  ModelDocument doc = std::move(*loaded);
  const fs::path target = out_path.empty() ? fs::path(path) : fs::path(out_path);
  const auto& net = doc.topology;
  const auto opts = doc.solve_options();

  auto persist = [&]() {
    try {
      write_file_atomic(target, save(doc));
      return true;
    } catch (const std::exception& e) {
      err << "error: cannot write " << target.string() << ": " << e.what() << "\n";
      return false;
    }
  };
  auto stop = [&]() {
    out << "\n";
    if (!persist()) return kExitInput;
    out << "saved partial model to " << target.string() << " (" << remaining_slots(doc)
        << " slots remaining)\n";
    return interrupt_requested() ? kExitInterrupted : kExitOk;
  };

  std::size_t pending = remaining_slots(doc);
  std::size_t done = 0;
  for (const auto& edge : net.edges) {
    const auto slot = edge.slot();
    if (doc.slot_complete(slot)) continue;
    const auto elements = net.slot_elements(slot);
    const auto control = label_of(net, slot.control_node);
    for (;;) {
      out << "\nMatrix " << (done + 1) << " of " << pending << ": with respect to " << control << " ("
          << cluster_label(net, slot.dependent_cluster) << ")\n";
      for (const auto& [i, j] : doc.missing_pairs(slot)) {
        for (;;) {
          out << "With respect to " << control << ": how much more important is "
              << label_of(net, elements[i]) << " than " << label_of(net, elements[j]) << "? " << std::flush;
          std::string line;
          if (read_line(in, line) == Answer::eof) return stop();
          try {
            doc.set_judgment(slot, elements[i], elements[j], SaatyJudgment::parse(line, doc.options.scale));
            break;
          } catch (const Error&) {
            out << "Please answer 1 to 9, or a reciprocal 1/2 to 1/9 when " << label_of(net, elements[j])
                << " is the more important one.\n";
          }
        }
      }

      const auto m = *doc.network().find_edge(slot)->matrix;
      PriorityVector pv;
      try {
        pv = principal_eigenvector(m, opts.rci);
      } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        persist();
        return exit_for(e);
      }
      const auto verdict = screen_consistency(pv, m.order(), opts.policy);
      out << "Priorities:";
      for (std::size_t k = 0; k < elements.size(); ++k) {
        out << " " << label_of(net, elements[k]) << "=" << fixed(pv.weights[k]);
      }
      out << "\nCR = " << fixed(pv.cr) << " (threshold " << fixed(verdict.threshold, 2) << ") "
          << style.verdict(verdict.verdict) << "\n";
      if (verdict.verdict == Verdict::pass) break;

      out << "Re-rate this matrix? [y/N] " << std::flush;
      std::string line;
      if (read_line(in, line) == Answer::eof) return stop();
      if (line != "y" && line != "Y" && line != "yes") break;
      doc.judgments.erase(slot);
    }
    ++done;
  }

  if (!persist()) return kExitInput;
  out << "\nall judgments entered; saved " << target.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_report(const std::string& result_path, const std::string& model_path, const std::string& format_text,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
  const auto format = parse_report_format(format_text);
  if (!format) {
    err << "error: unknown format '" << format_text << "'\n";
    return kExitInput;
  }
  ResultDocument result;
  try {
    result = result_from_json(read_file(result_path));
  } catch (const Error& e) {
    err << "error: " << result_path << ": " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "error: " << result_path << ": " << e.what() << "\n";
    return kExitInput;
  }
  if (!model_path.empty()) {
    auto doc = open_model(model_path, err);
    if (!doc) return kExitInput;
    if (sha256_digest(save(*doc)) != result.input_digest) {
      err << "error: result does not match model\n";
      return kExitIntegrity;
    }
  }
  const auto bytes = export_report(result, *format);
  if (out_path.empty()) {
    out << bytes;
    return kExitOk;
  }
  try {
    write_file_atomic(out_path, bytes);
  } catch (const std::exception& e) {
    err << "error: cannot write " << out_path << ": " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

int cmd_serve(const std::string& addr, const ServiceConfig& config, std::ostream& out, std::ostream& err) {
  const auto colon = addr.rfind(':');
  int port = 0;
  try {
    if (colon == std::string::npos) throw std::invalid_argument(addr);
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::exception&) {
    err << "error: --addr must look like host:port\n";
    return kExitInput;
  }
  const auto host = addr.substr(0, colon);
  try {
    Service service(config);
    out << "listening on http://" << host << ":" << port << "\n" << std::flush;
    if (!service.listen(host, port)) {
      err << "error: cannot bind " << addr << "\n";
      return kExitInput;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

const std::map<std::string, ConsistencyPolicy> kPolicies{{"saaty1994", ConsistencyPolicy::saaty1994},
                                                         {"uniform", ConsistencyPolicy::uniform}};

}  // namespace

void request_interrupt() noexcept { g_interrupted.store(true); }
void clear_interrupt() noexcept { g_interrupted.store(false); }
bool interrupt_requested() noexcept { return g_interrupted.load(); }

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
            bool color) {
  const Style style{color};
  CLI::App app{"Analytic Network Process decision engine", "anp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kEngineVersion));

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a model file for problems");
  validate_cmd->add_option("model", validate_path, "Model file (.anp.json)")->required();

  SolveFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "Compute the limit supermatrix and ranking");
  solve_cmd->add_option("model", solve_flags.path, "Model file (.anp.json)")->required();
  solve_cmd->add_option("-o,--out", solve_flags.out_path, "Result path (default <model>.result.json)");
  solve_cmd->add_option("--format", solve_flags.format, "Result format")
      ->check(CLI::IsMember({"json", "csv", "markdown"}));
  solve_cmd->add_flag("--strict", solve_flags.strict, "Fail when any matrix fails screening");
  solve_cmd->add_option("--policy", solve_flags.policy, "Consistency policy")
      ->check(CLI::IsMember({"saaty1994", "uniform"}));
  solve_cmd->add_option("--tolerance", solve_flags.tolerance, "Limit convergence tolerance")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-power", solve_flags.max_power, "Largest supermatrix power tried")
      ->check(CLI::PositiveNumber);
  auto* print_flag = solve_cmd->add_flag("--print", solve_flags.print, "Print the result instead of a summary");
  auto* quiet_flag = solve_cmd->add_flag("-q,--quiet", solve_flags.quiet, "Print nothing on success");
  print_flag->excludes(quiet_flag);

  std::string rate_path, rate_out;
  auto* rate_cmd = app.add_subcommand("rate", "Enter pairwise judgments interactively");
  rate_cmd->add_option("model", rate_path, "Model file (.anp.json)")->required();
  rate_cmd->add_option("-o,--out", rate_out, "Save to this path instead of the model file");

  std::string report_path, report_model, report_format = "markdown", report_out;
  auto* report_cmd = app.add_subcommand("report", "Render a saved result");
  report_cmd->add_option("result", report_path, "Result file")->required();
  report_cmd->add_option("--model", report_model, "Check the result against this model");
  report_cmd->add_option("--format", report_format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "markdown"}));
  report_cmd->add_option("-o,--out", report_out, "Output path (default stdout)");

  std::string serve_addr = "127.0.0.1:8080";
  std::string serve_store = "anp-store";
  std::string serve_policy;
  bool serve_strict = false;
  std::string serve_ui;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--addr", serve_addr, "host:port to bind");
  serve_cmd->add_option("--store-dir", serve_store, "Directory holding stored models");
  serve_cmd->add_option("--policy", serve_policy, "Override every model's policy")
      ->check(CLI::IsMember({"saaty1994", "uniform"}));
  serve_cmd->add_flag("--strict", serve_strict, "Strict solves for every model");
  serve_cmd->add_option("--ui-dir", serve_ui, "Static files served at /");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (validate_cmd->parsed()) return cmd_validate(validate_path, out, err);
  if (solve_cmd->parsed()) return cmd_solve(solve_flags, out, err, style);
  if (rate_cmd->parsed()) return cmd_rate(rate_path, rate_out, in, out, err, style);
  if (report_cmd->parsed()) return cmd_report(report_path, report_model, report_format, report_out, out, err);
  if (serve_cmd->parsed()) {
    ServiceConfig config;
    config.store_dir = serve_store;
    if (!serve_policy.empty()) config.policy = kPolicies.at(serve_policy);
    if (serve_strict) config.strict = true;
    if (!serve_ui.empty()) config.ui_dir = serve_ui;
    return cmd_serve(serve_addr, config, out, err);
  }
  return kExitInput;
}

}  // namespace anp

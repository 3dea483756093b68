#include "properties.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "anp/cli.hpp"
#include "anp/kernels.hpp"
#include "support.hpp"

namespace anp::testing {

namespace fs = std::filesystem;

namespace {

// Runs `body` for each case; a false return or an exception is a failure.
PropertyResult run(const std::string& name, std::uint64_t seed, std::size_t cases,
                   const std::function<bool(Rng&, std::string&)>& body) {
  PropertyResult r;
  r.name = name;
  for (std::size_t k = 0; k < cases; ++k) {
    Rng rng(seed + k);
    std::string why;
    bool ok = false;
    try {
      ok = body(rng, why);
    } catch (const std::exception& e) {
      why = e.what();
    }
    ++r.cases;
    if (!ok) {
      if (r.failures++ == 0) r.first_failure = "case " + std::to_string(k) + ": " + why;
    }
  }
  return r;
}

std::string num(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

DecisionNetwork random_network(Rng& rng) {
  return std::bernoulli_distribution(0.5)(rng) ? random_hierarchy(rng) : random_feedback_network(rng);
}

double fixed_point_residual(const Supermatrix& weighted, const Supermatrix& lim) {
  return max_abs_diff(kernels::multiply(weighted.entries, lim.entries), lim.entries);
}

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::istringstream in;
  std::ostringstream out, err;
  const int code = run_cli(args, in, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

}  // namespace

PropertyResult reciprocity(std::uint64_t seed, std::size_t cases) {
  return run("reciprocity", seed, cases, [](Rng& rng, std::string& why) {
    const auto n = std::uniform_int_distribution<std::size_t>(2, 10)(rng);
    const auto m = random_matrix(rng, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (std::abs(m(i, j) * m(j, i) - 1.0) > 1e-12) {
          why = "a_ij * a_ji != 1 at " + std::to_string(i) + "," + std::to_string(j);
          return false;
        }
    return true;
  });
}

PropertyResult consistent_recovery(std::uint64_t seed, std::size_t cases) {
  return run("consistent_recovery", seed, cases, [](Rng& rng, std::string& why) {
    const auto n = std::uniform_int_distribution<std::size_t>(2, 10)(rng);
    std::vector<double> w;
    const auto pv = principal_eigenvector(consistent_matrix(rng, n, w));
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(pv.weights[i] - w[i]) > 1e-9) {
        why = "weight " + std::to_string(i) + " off by " + num(pv.weights[i] - w[i]);
        return false;
      }
    if (pv.cr >= 1e-9) {
      why = "CR " + num(pv.cr);
      return false;
    }
    return true;
  });
}

PropertyResult weighted_stochasticity(std::uint64_t seed, std::size_t cases) {
  return run("weighted_stochasticity", seed, cases, [](Rng& rng, std::string& why) {
    const auto s = solve(random_network(rng));
    for (std::size_t c = 0; c < s.weighted.order(); ++c) {
      const double sum = s.weighted.entries.column_sum(c);
      if (std::abs(sum - 1.0) > 1e-9) {
        why = "column " + s.weighted.index[c] + " sums to " + num(sum);
        return false;
      }
    }
    return true;
  });
}

PropertyResult limit_idempotence(std::uint64_t seed, std::size_t cases) {
  return run("limit_idempotence", seed, cases, [](Rng& rng, std::string& why) {
    const auto s = solve(random_network(rng));
    const auto& l = s.limit_matrix.entries;
    const double d = max_abs_diff(kernels::multiply(l, l), l);
    if (d >= 1e-8) why = "|L*L - L| = " + num(d);
    return d < 1e-8;
  });
}

PropertyResult limit_fixed_point(std::uint64_t seed, std::size_t cases) {
  return run("limit_fixed_point", seed, cases, [](Rng& rng, std::string& why) {
    const auto s = solve(random_network(rng));
    const double d = fixed_point_residual(s.weighted, s.limit_matrix);
    if (d >= 1e-8) why = "|W*L - L| = " + num(d);
    return d < 1e-8;
  });
}

PropertyResult ahp_anp_agreement(std::uint64_t seed, std::size_t cases) {
  return run("ahp_anp_agreement", seed, cases, [](Rng& rng, std::string& why) {
    const auto net = random_hierarchy(rng);
    const auto anp = solve(net).ranking;
    const auto ahp = solve_hierarchy(net);
    if (anp.order() != ahp.order()) {
      why = "orders differ";
      return false;
    }
    for (const auto& a : ahp.ranking) {
      const double d = std::abs(anp.find(a.id)->normalized - a.normalized);
      if (d > 1e-8) {
        why = a.id + " differs by " + num(d);
        return false;
      }
    }
    return true;
  });
}

PropertyResult load_save_identity(std::uint64_t seed, std::size_t cases) {
  return run("load_save_identity", seed, cases, [](Rng& rng, std::string& why) {
    auto doc = document_from_network(random_network(rng), "case " + std::to_string(rng() % 1000));
    const auto bytes = save(doc);
    const auto back = load(bytes);
    if (!(back == doc)) {
      why = "load(save(doc)) != doc";
      return false;
    }
    if (save(back) != bytes) {
      why = "save(load(bytes)) != bytes";
      return false;
    }
    return true;
  });
}

PropertyResult cli_determinism(std::uint64_t seed, std::size_t cases) {
  const auto dir = scratch_dir("determinism");
  auto r = run("cli_determinism", seed, cases, [&](Rng& rng, std::string& why) {
    const auto model = dir / "model.anp.json";
    write_file_atomic(model, save(document_from_network(random_network(rng), "determinism")));
    std::string first, second;
    const int c1 = cli({"solve", model.string(), "-o", (dir / "a.json").string(), "--print"}, &first);
    const int c2 = cli({"solve", model.string(), "-o", (dir / "b.json").string(), "--print"}, &second);
    if (c1 != 0 || c2 != 0) {
      why = "exit codes " + std::to_string(c1) + "," + std::to_string(c2);
      return false;
    }
    if (first != second || read_file(dir / "a.json") != read_file(dir / "b.json")) {
      why = "outputs differ";
      return false;
    }
    return true;
  });
  fs::remove_all(dir);
  return r;
}

PropertyResult cli_exit_codes() {
  const auto dir = scratch_dir("exit-codes");
  const auto kwic = (data_dir() / "kwic.anp.json").string();
  const auto result = (dir / "kwic.result.json").string();
  const auto cyclic = (dir / "cyclic.anp.json").string();
  write_file_atomic(cyclic, save(document_from_network(period_three_network(), "period three")));

  struct Case {
    std::string what;
    std::function<int()> invoke;
    int expected;
  };
  const std::vector<Case> table{
      {"solve kwic", [&] { return cli({"solve", kwic, "-o", result, "-q"}); }, kExitOk},
      {"strict solve kwic", [&] { return cli({"solve", kwic, "-o", result, "-q", "--strict"}); }, kExitConsistency},
      {"missing file", [&] { return cli({"solve", (dir / "absent.anp.json").string()}); }, kExitInput},
      {"period three", [&] { return cli({"solve", cyclic, "-o", (dir / "c.json").string()}); }, kExitConvergence},
      {"tampered result",
       [&] {
         auto text = read_file(result);
         text.replace(text.find("Pipes & Filters"), 5, "Tubes");
         write_file_atomic(dir / "tampered.json", text);
         return cli({"report", (dir / "tampered.json").string()});
       },
       kExitIntegrity},
  };
  PropertyResult r;
  r.name = "cli_exit_codes";
  for (const auto& c : table) {
    ++r.cases;
    int got = -1;
    try {
      got = c.invoke();
    } catch (const std::exception& e) {
      got = -1;
    }
    if (got != c.expected && r.failures++ == 0) {
      r.first_failure = c.what + ": exit " + std::to_string(got) + ", expected " + std::to_string(c.expected);
    }
  }
  fs::remove_all(dir);
  return r;
}

std::vector<PropertyResult> all_properties(std::uint64_t seed) {
  return {reciprocity(seed),         consistent_recovery(seed), weighted_stochasticity(seed),
          limit_idempotence(seed),   limit_fixed_point(seed),   ahp_anp_agreement(seed),
          load_save_identity(seed),  cli_determinism(seed),     cli_exit_codes()};
}

}  // namespace anp::testing

#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "anp/model_io.hpp"
#include "json.hpp"

namespace anp::testing {

std::filesystem::path data_dir();
std::filesystem::path oracle_path();
std::filesystem::path anp_binary();

ModelDocument fixture(const std::string& name);  // e.g. "kwic"
const nlohmann::json& oracle();

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

using Rng = std::mt19937_64;

/// Random positive reciprocal matrix with strict-scale entries.
ComparisonMatrix random_matrix(Rng& rng, std::size_t n);
/// a_ij = w_i / w_j for integer weights 1..9 (relaxed scale). Returns the
/// normalized weights through `weights`.
ComparisonMatrix consistent_matrix(Rng& rng, std::size_t n, std::vector<double>& weights);

/// goal -> criteria -> [subcriteria ->] alternatives, every slot rated.
DecisionNetwork random_hierarchy(Rng& rng);
/// Criteria and alternatives with feedback, inner dependence among criteria
/// and random cluster comparisons; every slot rated.
DecisionNetwork random_feedback_network(Rng& rng);

/// Three single-node clusters in a cycle: powers have period 3.
DecisionNetwork period_three_network();

}  // namespace anp::testing

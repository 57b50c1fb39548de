#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/concavify.hpp"
#include "persuasion/environment.hpp"

namespace persuasion {

inline constexpr int kScenarioSchemaVersion = 1;

struct SolverOptions {
  /// Absent means first-best only.
  std::optional<double> gamma;
  std::vector<double> gamma_grid;
  std::size_t oracle_grid_n = kDefaultOracleGrid;
  double beta_prime = 0.0;
};

struct Scenario {
  Environment env;
  SolverOptions solver;
};

/// Parses a JSON scenario document. Throws ParseError naming the field (or
/// line/column for syntax errors) when the document is malformed.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// "start:stop:step" (inclusive of stop) or a comma-separated list.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace persuasion

#pragma once

#include <filesystem>
#include <string>

#include "persuasion/contracts.hpp"
#include "persuasion/environment.hpp"
#include "persuasion/solver.hpp"

namespace persuasion::cli {

std::string format_first_best(const Environment& env, const SolveReport& fb);

std::string format_second_best(const Environment& env, const SolveReport& sb,
                               const SolveReport& fb);

std::string format_alignment(const Environment& env, const AlignmentResult& alignment);

std::string format_implementation(const Environment& env, double beta_prime,
                                  const TransferSchedule& transfers,
                                  const ImplementationVerdict& verdict);

/// Writes Phi = W + H and its concave envelope for both reports on a fixed
/// grid, plus a sidecar "<path>.chords.csv" with the supporting chords.
void write_curves(const std::filesystem::path& path, const Environment& env,
                  const SolveReport& fb, const SolveReport& sb);

}  // namespace persuasion::cli

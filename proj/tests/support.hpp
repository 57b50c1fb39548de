#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "persuasion/environment.hpp"

namespace testing {

using namespace persuasion;

// Two actions, receiver indifferent at (beta0 - beta1) / (alpha1 - alpha0).
inline Environment binary_env(double prior, PayoffMatrix u, PayoffMatrix pi, PayoffMatrix v,
                              double ubar = 0.0) {
  Environment env;
  env.prior = Posterior::binary(prior);
  env.actions = {"a0", "a1"};
  env.receiver_u = std::move(u);
  env.principal_pi = std::move(pi);
  env.mediator_v = std::move(v);
  env.outside_option = ubar;
  return env;
}

// Worked example: mu_bar = 0.5, kink 1, mediator differential 0.5.
inline Environment example_env(double prior = 0.45) {
  return binary_env(prior, PayoffMatrix({{0, 0}, {-1, 1}}), PayoffMatrix({{0, 0}, {0, 1}}),
                    PayoffMatrix({{0, 0}, {0, 0.5}}));
}

// Mediator indifferent across actions and states.
inline Environment flat_mediator_env(double prior = 0.5) {
  return binary_env(prior, PayoffMatrix({{0, 0}, {-1, 1}}), PayoffMatrix({{0, 0}, {0, 1}}),
                    PayoffMatrix({{0, 0}, {0, 0}}));
}

inline std::string fixture(const std::string& name) {
  return std::string(FIXTURES_DIR) + "/" + name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliRun {
  int exit_code;
  std::string out;
};

// Runs the CLI with stdout captured to a temp file.
inline CliRun run_cli(const std::string& args, const std::filesystem::path& out_file) {
  const std::string cmd =
      std::string(PERSUADE_EXE) + " " + args + " > " + out_file.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out_file)};
}

}  // namespace testing

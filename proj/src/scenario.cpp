#include "persuasion/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ParseError("field '" + field + "': " + what);
}

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) fail(key, "missing");
  return doc.at(key);
}

double number(const json& node, const std::string& field) {
  if (!node.is_number()) fail(field, "expected a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

PayoffMatrix matrix(const json& doc, const char* key, std::size_t actions, std::size_t states) {
  const json& node = require(doc, key);
  if (!node.is_array()) fail(key, "expected an array of rows");
  if (node.size() != actions)
    fail(key, "expected " + std::to_string(actions) + " rows (one per action), got " +
                  std::to_string(node.size()));
  PayoffMatrix m(actions, states);
  for (std::size_t a = 0; a < actions; ++a) {
    const std::string row_name = std::string(key) + "[" + std::to_string(a) + "]";
    const json& row = node[a];
    if (!row.is_array()) fail(row_name, "expected an array");
    if (row.size() != states)
      fail(row_name, "expected " + std::to_string(states) + " entries (one per state), got " +
                         std::to_string(row.size()));
    for (std::size_t w = 0; w < states; ++w)
      m(a, w) = number(row[w], row_name + "[" + std::to_string(w) + "]");
  }
  return m;
}

CostFunction parse_cost(const json& doc) {
  if (!doc.contains("cost")) return CostFunction::shannon();
  const json& node = doc.at("cost");
  if (!node.is_object()) fail("cost", "expected an object");
  const json& type = require(node, "type");
  if (!type.is_string()) fail("cost.type", "expected a string");
  const auto kind = type.get<std::string>();
  if (kind == "shannon") return CostFunction::shannon();
  if (kind == "scaled_shannon") {
    if (!node.contains("lambda")) fail("cost.lambda", "missing for scaled_shannon");
    const double lambda = number(node.at("lambda"), "cost.lambda");
    if (!(lambda > 0.0)) fail("cost.lambda", "must be positive");
    return CostFunction::scaled_shannon(lambda);
  }
  fail("cost.type", "unknown cost '" + kind + "' (expected shannon or scaled_shannon)");
}

SolverOptions parse_solver(const json& doc) {
  SolverOptions opts;
  if (!doc.contains("solver")) return opts;
  const json& node = doc.at("solver");
  if (!node.is_object()) fail("solver", "expected an object");
  if (node.contains("gamma") && !node.at("gamma").is_null()) {
    opts.gamma = number(node.at("gamma"), "solver.gamma");
    if (*opts.gamma < 0.0) fail("solver.gamma", "must be non-negative");
  }
  if (node.contains("gamma_grid")) {
    const json& g = node.at("gamma_grid");
    if (g.is_string()) {
      try {
        opts.gamma_grid = parse_grid(g.get<std::string>());
      } catch (const ParseError& e) {
        fail("solver.gamma_grid", e.what());
      }
    } else if (g.is_array()) {
      for (std::size_t k = 0; k < g.size(); ++k)
        opts.gamma_grid.push_back(number(g[k], "solver.gamma_grid[" + std::to_string(k) + "]"));
    } else {
      fail("solver.gamma_grid", "expected an array or a start:stop:step string");
    }
    for (double v : opts.gamma_grid)
      if (v < 0.0) fail("solver.gamma_grid", "entries must be non-negative");
  }
  if (node.contains("oracle_grid_n")) {
    const json& n = node.at("oracle_grid_n");
    if (!n.is_number_integer() || n.get<long long>() < 1000)
      fail("solver.oracle_grid_n", "expected an integer >= 1000");
    opts.oracle_grid_n = n.get<std::size_t>();
  }
  if (node.contains("beta_prime")) opts.beta_prime = number(node.at("beta_prime"), "solver.beta_prime");
  return opts;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario must be a JSON object");

  if (doc.contains("schema_version")) {
    const json& v = doc.at("schema_version");
    if (!v.is_number_integer() || v.get<int>() != kScenarioSchemaVersion)
      fail("schema_version", "unsupported version (expected " +
                                 std::to_string(kScenarioSchemaVersion) + ")");
  }

  const json& states_node = require(doc, "states");
  if (!states_node.is_number_integer() || states_node.get<long long>() < 2)
    fail("states", "expected an integer >= 2");
  const auto states = states_node.get<std::size_t>();

  Scenario sc;
  Environment& env = sc.env;

  const json& prior = require(doc, "prior");
  try {
    if (prior.is_number()) {
      if (states != 2) fail("prior", "a scalar prior needs states = 2");
      env.prior = Posterior::binary(number(prior, "prior"));
    } else if (prior.is_array()) {
      if (prior.size() != states) fail("prior", "expected " + std::to_string(states) + " entries");
      std::vector<double> probs;
      for (std::size_t k = 0; k < prior.size(); ++k)
        probs.push_back(number(prior[k], "prior[" + std::to_string(k) + "]"));
      env.prior = Posterior(std::move(probs));
    } else {
      fail("prior", "expected a number or an array");
    }
  } catch (const InvalidInput& e) {
    fail("prior", e.what());
  }

  const json& actions = require(doc, "actions");
  if (!actions.is_array() || actions.empty()) fail("actions", "expected a non-empty array");
  for (std::size_t k = 0; k < actions.size(); ++k) {
    if (!actions[k].is_string()) fail("actions[" + std::to_string(k) + "]", "expected a string");
    env.actions.push_back(actions[k].get<std::string>());
  }

  env.receiver_u = matrix(doc, "receiver_u", env.actions.size(), states);
  env.principal_pi = matrix(doc, "principal_pi", env.actions.size(), states);
  env.mediator_v = matrix(doc, "mediator_v", env.actions.size(), states);
  if (doc.contains("outside_option")) {
    env.outside_option = number(doc.at("outside_option"), "outside_option");
    if (env.outside_option < 0.0) fail("outside_option", "must be non-negative");
  }
  env.cost = parse_cost(doc);

  if (doc.contains("tie_break")) {
    const json& tb = doc.at("tie_break");
    if (!tb.is_array()) fail("tie_break", "expected an array of action labels");
    for (std::size_t k = 0; k < tb.size(); ++k) {
      const std::string name = "tie_break[" + std::to_string(k) + "]";
      if (!tb[k].is_string()) fail(name, "expected an action label");
      const auto label = tb[k].get<std::string>();
      const auto it = std::find(env.actions.begin(), env.actions.end(), label);
      if (it == env.actions.end()) fail(name, "unknown action '" + label + "'");
      env.tie_break.push_back(static_cast<std::size_t>(it - env.actions.begin()));
    }
  }

  sc.solver = parse_solver(doc);
  try {
    env.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("invalid environment: ") + e.what());
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::vector<double> parse_grid(const std::string& spec) {
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ParseError("bad number '" + s + "' in grid '" + spec + "'");
    }
    if (used != s.size() || !std::isfinite(v))
      throw ParseError("bad number '" + s + "' in grid '" + spec + "'");
    return v;
  };

  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw ParseError("grid range must be start:stop:step, got '" + spec + "'");
    const double start = to_double(parts[0]);
    const double stop = to_double(parts[1]);
    const double step = to_double(parts[2]);
    if (!(step > 0.0) || stop < start)
      throw ParseError("grid range needs step > 0 and stop >= start, got '" + spec + "'");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) out.push_back(start + static_cast<double>(k) * step);
  } else {
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(to_double(part));
  }
  if (out.empty()) throw ParseError("grid '" + spec + "' is empty");
  return out;
}

}  // namespace persuasion

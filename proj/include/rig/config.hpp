#pragma once

// JSON readers for laws and model configurations.
//
// Degree law: a bare integer (constant), or an object
//   {"type": "constant", "value": 3}
//   {"type": "pmf", "atoms": [[1, 0.5], [3, 0.5]]}
//   {"type": "poisson", "lambda": 2}
//   {"type": "mixed-poisson", "weight": <weight law>}
//   {"type": "shifted", "base": <degree law>, "offset": 1}
// Weight law: a bare number (point mass), or an object
//   {"type": "point", "value": 1}
//   {"type": "finite", "atoms": [[0.5, 0.5], [2, 0.5]]}
//   {"type": "exponential", "rate": 1}
//   {"type": "gamma", "shape": 2, "rate": 1}
//   {"type": "pareto", "shape": 3, "scale": 1}
// Model: {"model": "active", "n1": 1000, "n2": 1000 | "beta": 1, "P": 3,
//         "xi1": ..., "xi2": ..., "D1": ..., "D2": ..., "balance": "unit",
//         "seed": 1}

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "generators.hpp"
#include "laws.hpp"

namespace rig {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw validation_error(where + ": missing field '" + key + "'");
  return *it;
}

template <class T>
T get_as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw validation_error(where + ": " + e.what());
  }
}

template <class T>
T get_field(const json& j, const char* key, const std::string& where) {
  return get_as<T>(field(j, key, where), where + "." + key);
}

inline std::size_t get_count(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (x >= 0 && std::floor(x) == x && x < 1e18) return static_cast<std::size_t>(x);
  }
  throw validation_error(where + ": expected a nonnegative integer");
}

}  // namespace detail

inline WeightLaw parse_weight_law(const json& j, const std::string& where = "weight") {
  if (j.is_number()) return WeightLaw::point_mass(j.get<double>());
  if (!j.is_object()) throw validation_error(where + ": expected a number or an object");
  const auto type = detail::get_field<std::string>(j, "type", where);
  if (type == "point") return WeightLaw::point_mass(detail::get_field<double>(j, "value", where));
  if (type == "finite")
    return WeightLaw::finite(detail::get_field<std::vector<std::pair<double, double>>>(j, "atoms", where));
  if (type == "exponential") return WeightLaw::exponential(detail::get_field<double>(j, "rate", where));
  if (type == "gamma")
    return WeightLaw::gamma(detail::get_field<double>(j, "shape", where), detail::get_field<double>(j, "rate", where));
  if (type == "pareto")
    return WeightLaw::pareto(detail::get_field<double>(j, "shape", where),
                             detail::get_field<double>(j, "scale", where));
  throw validation_error(where + ": unknown weight law type '" + type + "'");
}

inline DegreeLaw parse_degree_law(const json& j, const std::string& where = "law") {
  if (j.is_number_integer()) {
    const auto c = j.get<long long>();
    require(c >= 0, where + ": constant law must be >= 0");
    return DegreeLaw::constant(c);
  }
  if (!j.is_object()) throw validation_error(where + ": expected an integer or an object");
  const auto type = detail::get_field<std::string>(j, "type", where);
  if (type == "constant") return DegreeLaw::constant(detail::get_field<long long>(j, "value", where));
  if (type == "pmf")
    return DegreeLaw::pmf(detail::get_field<std::vector<std::pair<long long, double>>>(j, "atoms", where));
  if (type == "poisson") return DegreeLaw::poisson(detail::get_field<double>(j, "lambda", where));
  if (type == "mixed-poisson") return DegreeLaw::mixed_poisson(parse_weight_law(detail::field(j, "weight", where), where + ".weight"));
  if (type == "shifted")
    return DegreeLaw::shifted(parse_degree_law(detail::field(j, "base", where), where + ".base"),
                              detail::get_field<long long>(j, "offset", where));
  throw validation_error(where + ": unknown degree law type '" + type + "'");
}

// Sets n1 (and n2 from "n2" or round(beta * n1)) on a model description.
inline ModelConfig parse_model(const json& j, std::optional<std::size_t> n1_override = std::nullopt) {
  const std::string where = "model";
  if (!j.is_object()) throw validation_error("model: expected an object");
  ModelConfig c;
  c.model = model_kind_from_string(detail::get_field<std::string>(j, "model", where));
  if (n1_override)
    c.n1 = *n1_override;
  else
    c.n1 = detail::get_count(detail::field(j, "n1", where), "model.n1");
  if (j.contains("seed")) c.seed = detail::get_as<std::uint64_t>(j["seed"], "model.seed");
  if (j.contains("P")) c.P = parse_degree_law(j["P"], "model.P");
  if (j.contains("xi1")) c.xi1 = parse_weight_law(j["xi1"], "model.xi1");
  if (j.contains("xi2")) c.xi2 = parse_weight_law(j["xi2"], "model.xi2");
  if (j.contains("D1")) c.D1 = parse_degree_law(j["D1"], "model.D1");
  if (j.contains("D2")) c.D2 = parse_degree_law(j["D2"], "model.D2");
  if (j.contains("balance")) c.balance = balance_mode_from_string(detail::get_as<std::string>(j["balance"], "model.balance"));
  if (c.model == ModelKind::configuration) {
    require(c.D1 && c.D2, "configuration model needs laws D1 and D2");
    c.n2 = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(c.D1->mean() / c.D2->mean() * static_cast<double>(c.n1))));
  } else if (j.contains("n2") && !n1_override) {
    c.n2 = detail::get_count(j["n2"], "model.n2");
  } else if (j.contains("beta")) {
    const double beta = detail::get_as<double>(j["beta"], "model.beta");
    require(beta > 0.0 && std::isfinite(beta), "model.beta must be positive");
    c.n2 = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(beta * static_cast<double>(c.n1))));
  } else {
    throw validation_error("model: need n2 or beta");
  }
  c.validate();
  return c;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw validation_error("config file '" + path + "': " + e.what());
  }
}

}  // namespace rig

#pragma once

#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "gspec/error.hpp"
#include "gspec/graphon.hpp"

namespace gspec {

namespace detail {
inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
  for (const auto& [key, _] : j.items())
    if (!allowed.contains(key)) throw ValidationError(where + ": unknown key '" + key + "'");
}
}  // namespace detail

/// Parses {"type":"constant","p":..}, {"type":"product"}, {"type":"mean"} or
/// {"type":"sbm","boundaries":[..],"matrix":[[..],..]}. Unknown keys are errors.
inline CatalogSpec catalog_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("graphon spec must be a JSON object");
  if (!j.contains("type") || !j["type"].is_string())
    throw ValidationError("graphon spec needs a string 'type'");
  const auto type = j["type"].get<std::string>();
  try {
    if (type == "constant") {
      detail::reject_unknown_keys(j, {"type", "p"}, "constant graphon");
      if (!j.contains("p") || !j["p"].is_number())
        throw ValidationError("constant graphon needs numeric 'p'");
      return catalog::Constant{j["p"].get<double>()};
    }
    if (type == "product") {
      detail::reject_unknown_keys(j, {"type"}, "product graphon");
      return catalog::Product{};
    }
    if (type == "mean") {
      detail::reject_unknown_keys(j, {"type"}, "mean graphon");
      return catalog::Mean{};
    }
    if (type == "sbm") {
      detail::reject_unknown_keys(j, {"type", "boundaries", "matrix"}, "sbm graphon");
      if (!j.contains("boundaries") || !j.contains("matrix"))
        throw ValidationError("sbm graphon needs 'boundaries' and 'matrix'");
      return catalog::Sbm{j["boundaries"].get<std::vector<double>>(),
                          j["matrix"].get<std::vector<std::vector<double>>>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("graphon spec: ") + e.what());
  }
  throw ValidationError("unknown graphon type '" + type + "'");
}

inline nlohmann::json to_json(const CatalogSpec& spec) {
  struct Visitor {
    nlohmann::json operator()(const catalog::Constant& c) const {
      return {{"type", "constant"}, {"p", c.p}};
    }
    nlohmann::json operator()(const catalog::Product&) const { return {{"type", "product"}}; }
    nlohmann::json operator()(const catalog::Mean&) const { return {{"type", "mean"}}; }
    nlohmann::json operator()(const catalog::Sbm& s) const {
      return {{"type", "sbm"}, {"boundaries", s.boundaries}, {"matrix", s.matrix}};
    }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace gspec

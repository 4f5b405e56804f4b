#pragma once

// JSON configuration files. Relative paths inside a file are resolved against
// the directory that file lives in.
//
// vocabulary:  {"predicates": [{"name": "...", "category": "monadic-on-entity"}, ...]}
// rule set:    {"name": "...", "action_priority": ["Stop", ...],
//               "hypotheses": [{"when": {"Near": 1, ...}, "action": "Slow"}, ...]}
// scenario:    {"name", "grid_size", "block", "cars", "pedestrians", "route_length",
//               "r_fov", "r_vic", "steps", "near_distance", "ahead_range"}  (all optional
//               except name)
// run config:  {"vocabulary": path, "scenario": path | "scenarios": [path, ...],
//               "rule_set": path | "rule_sets": [path, ...],
//               "architectures": [{"kind": "multi-zone-lna", "zones": [2, 2]}, ...],
//               "strategies": [...], "k": [...], "seeds": [...] | {"first": 1, "count": 20},
//               "enumeration_cap": n, "key_order": "tuple" | "objective", "T": n}

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semsel/comms.hpp"
#include "semsel/errors.hpp"
#include "semsel/logic.hpp"
#include "semsel/metrics.hpp"
#include "semsel/rules.hpp"

namespace semsel {

namespace fs = std::filesystem;
using Json = nlohmann::json;

inline Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

namespace detail {

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

inline std::vector<fs::path> paths(const Json& j, const char* one, const char* many,
                                   const fs::path& base) {
  std::vector<fs::path> out;
  if (j.contains(one)) out.push_back(base / j.at(one).get<std::string>());
  if (j.contains(many)) {
    for (const auto& p : j.at(many)) out.push_back(base / p.get<std::string>());
  }
  return out;
}

}  // namespace detail

inline PredicateVocabulary parse_vocabulary(const Json& j) {
  PredicateVocabulary v;
  if (!j.contains("predicates") || !j.at("predicates").is_array()) {
    throw ConfigError("vocabulary needs a 'predicates' array");
  }
  for (const auto& p : j.at("predicates")) {
    v.predicates.push_back(
        {p.at("name").get<std::string>(), parse_category(p.at("category").get<std::string>())});
  }
  build_slot_map(v);  // validates
  return v;
}

inline PredicateVocabulary load_vocabulary(const fs::path& path) {
  return parse_vocabulary(read_json(path));
}

inline RuleSet parse_rule_set(const Json& j, const SlotMap& sigma) {
  RuleSet rs;
  rs.name = detail::get_or<std::string>(j, "name", "");
  if (rs.name.empty()) throw ConfigError("rule set needs a name");
  if (j.contains("action_priority")) {
    for (const auto& a : j.at("action_priority")) {
      rs.action_priority.push_back(parse_action(a.get<std::string>()));
    }
  } else {
    rs.action_priority = default_action_priority();
  }
  if (!j.contains("hypotheses") || !j.at("hypotheses").is_array()) {
    throw ConfigError("rule set '" + rs.name + "' needs a 'hypotheses' array");
  }
  int id = 0;
  for (const auto& h : j.at("hypotheses")) {
    std::vector<SlotConstraint> fixed;
    for (const auto& [name, value] : h.at("when").items()) {
      const auto slot = sigma.find(name);
      if (!slot) throw ConfigError("rule set '" + rs.name + "' names unknown predicate '" + name + "'");
      const int v = value.is_boolean() ? static_cast<int>(value.get<bool>()) : value.get<int>();
      if (v != 0 && v != 1) throw ConfigError("slot values must be 0 or 1");
      fixed.push_back({*slot, v == 1});
    }
    rs.hypotheses.emplace_back(id++, std::move(fixed),
                               parse_action(h.at("action").get<std::string>()), sigma.width());
  }
  rs.validate();
  return rs;
}

inline RuleSet load_rule_set(const fs::path& path, const SlotMap& sigma) {
  try {
    return parse_rule_set(read_json(path), sigma);
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline Scenario parse_scenario(const Json& j) {
  Scenario s;
  using detail::get_or;
  s.name = get_or<std::string>(j, "name", "");
  if (s.name.empty()) throw ConfigError("scenario needs a name");
  s.sim.grid_size = get_or(j, "grid_size", s.sim.grid_size);
  s.sim.block = get_or(j, "block", s.sim.block);
  s.sim.cars = get_or(j, "cars", s.sim.cars);
  s.sim.pedestrians = get_or(j, "pedestrians", s.sim.pedestrians);
  s.sim.route_length = get_or(j, "route_length", s.sim.route_length);
  s.obs.r_fov = get_or(j, "r_fov", s.obs.r_fov);
  s.obs.r_vic = get_or(j, "r_vic", s.obs.r_vic);
  s.steps = get_or(j, "steps", s.steps);
  s.predicates.near_distance = get_or(j, "near_distance", s.predicates.near_distance);
  s.predicates.ahead_range = get_or(j, "ahead_range", s.predicates.ahead_range);
  s.sim.validate();
  s.obs.validate();
  if (s.steps < 1) throw ConfigError("scenario '" + s.name + "' needs steps >= 1");
  return s;
}

inline Scenario load_scenario(const fs::path& path) {
  try {
    return parse_scenario(read_json(path));
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline std::vector<std::uint64_t> parse_seeds(const Json& j) {
  std::vector<std::uint64_t> out;
  if (j.is_array()) {
    for (const auto& s : j) out.push_back(s.get<std::uint64_t>());
  } else if (j.is_object()) {
    const auto first = j.at("first").get<std::uint64_t>();
    const auto count = j.at("count").get<std::uint64_t>();
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(first + i);
  } else {
    throw ConfigError("'seeds' must be a list or {first, count}");
  }
  return out;
}

// Comma-separated list, as given on the command line.
inline std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    try {
      if (dash != std::string::npos && dash > 0) {
        const auto lo = std::stoull(item.substr(0, dash));
        const auto hi = std::stoull(item.substr(dash + 1));
        if (hi < lo) throw ConfigError("bad seed range '" + item + "'");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
      } else {
        out.push_back(std::stoull(item));
      }
    } catch (const std::logic_error&) {
      throw ConfigError("bad seed '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty seed list");
  return out;
}

inline SweepPlan parse_run_config(const Json& j, const fs::path& base) {
  SweepPlan plan;
  try {
    if (!j.contains("vocabulary")) throw ConfigError("run config needs 'vocabulary'");
    plan.vocabulary = load_vocabulary(base / j.at("vocabulary").get<std::string>());
    const SlotMap sigma = build_slot_map(plan.vocabulary);
    if (j.contains("T") && j.at("T").get<int>() != sigma.width()) {
      throw ConfigError("T=" + std::to_string(j.at("T").get<int>()) +
                        " but the vocabulary has " + std::to_string(sigma.width()) + " slots");
    }
    for (const auto& p : detail::paths(j, "scenario", "scenarios", base)) {
      plan.scenarios.push_back(load_scenario(p));
    }
    for (const auto& p : detail::paths(j, "rule_set", "rule_sets", base)) {
      plan.rule_sets.push_back(load_rule_set(p, sigma));
    }
    if (j.contains("architectures")) {
      for (const auto& a : j.at("architectures")) {
        Architecture arch;
        arch.kind = parse_architecture(a.at("kind").get<std::string>());
        if (a.contains("zones")) {
          arch.zones_x = a.at("zones").at(0).get<int>();
          arch.zones_y = a.at("zones").at(1).get<int>();
        }
        plan.architectures.push_back(arch);
      }
    } else {
      for (auto k : kAllArchitectures) plan.architectures.push_back({k, 2, 2, 0});
    }
    if (j.contains("strategies")) {
      plan.strategies.clear();
      for (const auto& s : j.at("strategies")) plan.strategies.push_back(parse_strategy(s.get<std::string>()));
    }
    if (j.contains("k")) plan.ks = j.at("k").get<std::vector<int>>();
    if (j.contains("seeds")) plan.seeds = parse_seeds(j.at("seeds"));
    plan.selection.enumeration_cap =
        detail::get_or<std::uint64_t>(j, "enumeration_cap", plan.selection.enumeration_cap);
    if (j.contains("key_order")) {
      plan.selection.order = parse_key_order(j.at("key_order").get<std::string>());
    }
  } catch (const Json::exception& e) {
    throw ConfigError(e.what());
  }
  for (int k : plan.ks) {
    if (k < 0) throw ConfigError("k values must be non-negative");
  }
  for (const auto& s : plan.scenarios) {
    for (const auto& a : plan.architectures) a.validate(s.sim.grid_size);
  }
  if (plan.scenarios.empty()) throw ConfigError("run config lists no scenario");
  if (plan.rule_sets.empty()) throw ConfigError("run config lists no rule set");
  return plan;
}

inline SweepPlan load_run_config(const fs::path& path) {
  try {
    return parse_run_config(read_json(path), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace semsel

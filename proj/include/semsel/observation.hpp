#pragma once

// Ground-truth predicates over (ego, entity) pairs and the FOV / vicinity
// observation model. Grounding is exact: the simulator state is the valuation.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "semsel/errors.hpp"
#include "semsel/logic.hpp"
#include "semsel/world.hpp"

namespace semsel {

struct PredicateParams {
  int near_distance = 4;
  int ahead_range = 8;
};

// Called as f(world, ego, x, params) for every category; the category only
// decides the argument order the name refers to.
using PredicateFn =
    std::function<bool(const WorldState&, const Agent&, const Agent&, const PredicateParams&)>;

struct PredicateDef {
  PredicateCategory category;
  PredicateFn fn;
};

namespace detail {

// `target` lies in the lane ahead of `a`: at most one cell to either side
// and 1..range cells forward.
inline bool in_corridor(const WorldState& w, const Agent& a, const Cell& target, int range) {
  const auto [fwd, lat] = w.frame_offset(a, target);
  return lat <= 1 && fwd >= 1 && fwd <= range;
}

}  // namespace detail

// The built-in predicates a vocabulary may name.
inline const std::map<std::string, PredicateDef>& predicate_registry() {
  using C = PredicateCategory;
  static const std::map<std::string, PredicateDef> reg = {
      {"IsPedestrian",
       {C::kMonadicOnEntity,
        [](const WorldState&, const Agent&, const Agent& x, const PredicateParams&) {
          return x.kind == AgentKind::kPedestrian;
        }}},
      {"IsStopped",
       {C::kMonadicOnEntity,
        [](const WorldState&, const Agent&, const Agent& x, const PredicateParams&) {
          return x.last_speed == 0;
        }}},
      {"IsFast",
       {C::kMonadicOnEntity,
        [](const WorldState&, const Agent&, const Agent& x, const PredicateParams&) {
          return x.last_speed >= speed_of(Action::kFast);
        }}},
      {"AtCrossing",
       {C::kMonadicOnEntity,
        [](const WorldState& w, const Agent&, const Agent& x, const PredicateParams&) {
          return w.in_intersection(x.pos);
        }}},
      {"Near",
       {C::kDyadicEgoEntity,
        [](const WorldState& w, const Agent& ego, const Agent& x, const PredicateParams& p) {
          return w.distance(ego.pos, x.pos) <= p.near_distance;
        }}},
      {"InIntersection",
       {C::kDyadicEgoEntity,
        [](const WorldState& w, const Agent& ego, const Agent& x, const PredicateParams&) {
          return w.distance(w.next_crossing(ego), x.pos) <= 1;
        }}},
      {"Ahead",
       {C::kDyadicEgoEntity,
        [](const WorldState& w, const Agent& ego, const Agent& x, const PredicateParams& p) {
          return detail::in_corridor(w, ego, x.pos, p.ahead_range);
        }}},
      {"SameHeading",
       {C::kDyadicEgoEntity,
        [](const WorldState&, const Agent& ego, const Agent& x, const PredicateParams&) {
          return ego.heading == x.heading;
        }}},
      {"Approaching",
       {C::kDyadicEntityEgo,
        [](const WorldState& w, const Agent& ego, const Agent& x, const PredicateParams&) {
          if (x.last_speed == 0) return false;
          const Cell d = heading_delta(x.heading);
          const Cell next{w.wrap(x.pos.x + d.x), w.wrap(x.pos.y + d.y)};
          return w.distance(next, ego.pos) < w.distance(x.pos, ego.pos);
        }}},
      {"Following",
       {C::kDyadicEntityEgo,
        [](const WorldState& w, const Agent& ego, const Agent& x, const PredicateParams& p) {
          return x.heading == ego.heading && detail::in_corridor(w, x, ego.pos, p.ahead_range);
        }}},
  };
  return reg;
}

// Turns (ego, entity) pairs into Q-sentences for a fixed vocabulary.
class Grounder {
 public:
  Grounder(const PredicateVocabulary& vocab, PredicateParams params = {})
      : sigma_(build_slot_map(vocab)), params_(params) {
    const auto& reg = predicate_registry();
    for (const auto& p : vocab.predicates) {
      auto it = reg.find(p.name);
      if (it == reg.end()) throw ConfigError("no built-in predicate named '" + p.name + "'");
      if (it->second.category != p.category) {
        throw ConfigError("predicate '" + p.name + "' is " +
                          std::string(to_string(it->second.category)) + ", not " +
                          std::string(to_string(p.category)));
      }
      fns_.push_back(&it->second.fn);
    }
  }

  const SlotMap& slot_map() const { return sigma_; }
  int width() const { return sigma_.width(); }
  const PredicateParams& params() const { return params_; }

  TruthAssignment truth_assignment(const WorldState& w, const Agent& ego, const Agent& x) const {
    TruthAssignment t;
    for (int s = 0; s < width(); ++s) t[sigma_.key(s)] = (*fns_[s])(w, ego, x, params_);
    return t;
  }

  // Same result as ground_pair(truth_assignment(...)), without the map.
  QSentence ground(const WorldState& w, const Agent& ego, const Agent& x) const {
    std::uint64_t bits = 0;
    for (int s = 0; s < width(); ++s) {
      if ((*fns_[s])(w, ego, x, params_)) bits |= std::uint64_t{1} << s;
    }
    return QSentence(bits, width());
  }

 private:
  SlotMap sigma_;
  PredicateParams params_;
  std::vector<const PredicateFn*> fns_;
};

// Indices of agents within Chebyshev distance `radius` of agent `ego`, ego excluded.
inline std::vector<int> agents_within(const WorldState& w, std::size_t ego, int radius) {
  std::vector<int> out;
  const Agent& e = w.agent(ego);
  for (std::size_t i = 0; i < w.agents().size(); ++i) {
    if (i == ego) continue;
    if (w.distance(e.pos, w.agents()[i].pos) <= radius) out.push_back(w.agents()[i].id);
  }
  return out;
}

inline std::vector<int> vicinity_entities(const WorldState& w, std::size_t ego,
                                          const ObservationConfig& obs) {
  return agents_within(w, ego, obs.r_vic);
}

inline std::vector<EvidenceItem> observe_fov(const WorldState& w, std::size_t ego,
                                             const ObservationConfig& obs,
                                             const Grounder& grounder) {
  std::vector<EvidenceItem> out;
  for (int id : agents_within(w, ego, obs.r_fov)) {
    out.push_back({id, grounder.ground(w, w.agent(ego), w.agent(static_cast<std::size_t>(id)))});
  }
  return out;
}

}  // namespace semsel

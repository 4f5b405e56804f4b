#pragma once

// Predicate vocabulary, slot map, Q-sentences, hypotheses and pairwise
// grounding. A Q-sentence is the complete truth pattern over every predicate
// slot for one (ego, entity) pair, stored as a T-bit word.

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semsel/errors.hpp"

namespace semsel {

inline constexpr int kMaxSlots = 62;

enum class PredicateCategory {
  kMonadicOnEntity,  // P(x)
  kDyadicEgoEntity,  // P(ego, x)
  kDyadicEntityEgo,  // P(x, ego)
};

inline std::string_view to_string(PredicateCategory c) {
  switch (c) {
    case PredicateCategory::kMonadicOnEntity: return "monadic-on-entity";
    case PredicateCategory::kDyadicEgoEntity: return "dyadic-ego-entity";
    case PredicateCategory::kDyadicEntityEgo: return "dyadic-entity-ego";
  }
  return "?";
}

inline PredicateCategory parse_category(std::string_view s) {
  if (s == "monadic-on-entity") return PredicateCategory::kMonadicOnEntity;
  if (s == "dyadic-ego-entity") return PredicateCategory::kDyadicEgoEntity;
  if (s == "dyadic-entity-ego") return PredicateCategory::kDyadicEntityEgo;
  throw ConfigError("unknown predicate category '" + std::string(s) + "'");
}

struct Predicate {
  std::string name;
  PredicateCategory category = PredicateCategory::kMonadicOnEntity;
};

struct PredicateVocabulary {
  std::vector<Predicate> predicates;

  int width() const { return static_cast<int>(predicates.size()); }
};

using SlotKey = std::pair<PredicateCategory, std::string>;

// Bijection from predicate occurrences onto [0, T), in declaration order.
class SlotMap {
 public:
  SlotMap() = default;

  int width() const { return static_cast<int>(keys_.size()); }

  std::optional<int> find(PredicateCategory c, const std::string& name) const {
    auto it = index_.find(SlotKey{c, name});
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Predicate names are unique across categories, so a bare name resolves.
  std::optional<int> find(std::string_view name) const {
    for (int s = 0; s < width(); ++s) {
      if (keys_[s].second == name) return s;
    }
    return std::nullopt;
  }

  const SlotKey& key(int slot) const { return keys_.at(slot); }
  const std::vector<SlotKey>& keys() const { return keys_; }

 private:
  friend SlotMap build_slot_map(const PredicateVocabulary& vocab);

  std::vector<SlotKey> keys_;
  std::map<SlotKey, int> index_;
};

inline SlotMap build_slot_map(const PredicateVocabulary& vocab) {
  if (vocab.predicates.empty()) {
    throw ConfigError("predicate vocabulary is empty");
  }
  if (vocab.width() > kMaxSlots) {
    throw ConfigError("vocabulary has " + std::to_string(vocab.width()) +
                      " slots; at most " + std::to_string(kMaxSlots) +
                      " are supported");
  }
  SlotMap map;
  std::set<std::string> seen;
  for (const auto& p : vocab.predicates) {
    if (p.name.empty()) throw ConfigError("predicate with empty name");
    if (!seen.insert(p.name).second) {
      throw ConfigError("duplicate predicate name '" + p.name + "'");
    }
    const int slot = static_cast<int>(map.keys_.size());
    map.keys_.emplace_back(p.category, p.name);
    map.index_.emplace(SlotKey{p.category, p.name}, slot);
  }
  return map;
}

class QSentence {
 public:
  QSentence() = default;
  QSentence(std::uint64_t bits, int width) : bits_(bits), width_(width) {
    assert(width >= 0 && width <= kMaxSlots);
    bits_ &= mask_for(width);
  }

  static QSentence zeros(int width) { return QSentence(0, width); }

  int width() const { return width_; }
  std::uint64_t bits() const { return bits_; }

  bool test(int slot) const {
    assert(slot >= 0 && slot < width_);
    return (bits_ >> slot) & 1u;
  }

  QSentence with(int slot, bool value) const {
    assert(slot >= 0 && slot < width_);
    const std::uint64_t b = std::uint64_t{1} << slot;
    return QSentence(value ? (bits_ | b) : (bits_ & ~b), width_);
  }

  // Slot T-1 first, slot 0 last.
  std::string to_string() const {
    std::string s(static_cast<std::size_t>(width_), '0');
    for (int i = 0; i < width_; ++i) {
      if (test(i)) s[static_cast<std::size_t>(width_ - 1 - i)] = '1';
    }
    return s;
  }

  friend bool operator==(const QSentence&, const QSentence&) = default;
  friend auto operator<=>(const QSentence& a, const QSentence& b) {
    if (auto c = a.width_ <=> b.width_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

  static std::uint64_t mask_for(int width) {
    return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
  }

 private:
  std::uint64_t bits_ = 0;
  int width_ = 0;
};

using TruthAssignment = std::map<SlotKey, bool>;

// Writes each grounded predicate into its slot. Observation is assumed
// complete, so a slot with no value is an error rather than a latent bit.
inline QSentence ground_pair(const TruthAssignment& truth, const SlotMap& sigma) {
  QSentence q = QSentence::zeros(sigma.width());
  for (int s = 0; s < sigma.width(); ++s) {
    const auto& key = sigma.key(s);
    auto it = truth.find(key);
    if (it == truth.end()) {
      throw GroundingError("no truth value for " + std::string(to_string(key.first)) +
                           " predicate '" + key.second + "'");
    }
    q = q.with(s, it->second);
  }
  return q;
}

enum class Action { kStop, kSlow, kFast, kNormal };

inline constexpr Action kAllActions[] = {Action::kStop, Action::kSlow, Action::kFast,
                                         Action::kNormal};

inline std::string_view to_string(Action a) {
  switch (a) {
    case Action::kStop: return "Stop";
    case Action::kSlow: return "Slow";
    case Action::kFast: return "Fast";
    case Action::kNormal: return "Normal";
  }
  return "?";
}

inline Action parse_action(std::string_view s) {
  for (Action a : kAllActions) {
    if (to_string(a) == s) return a;
  }
  throw ConfigError("unknown action '" + std::string(s) + "'");
}

struct SlotConstraint {
  int slot = 0;
  bool value = false;

  friend bool operator==(const SlotConstraint&, const SlotConstraint&) = default;
  friend auto operator<=>(const SlotConstraint&, const SlotConstraint&) = default;
};

// A goal-oriented state: a conjunction of fixed slots, existentially
// quantified over the partner entity, tied to an action.
class Hypothesis {
 public:
  Hypothesis(int id, std::vector<SlotConstraint> fixed, Action action, int width)
      : id_(id), fixed_(std::move(fixed)), action_(action), width_(width) {
    if (fixed_.empty()) {
      throw ConfigError("hypothesis " + std::to_string(id) + " fixes no slots");
    }
    if (static_cast<int>(fixed_.size()) > width) {
      throw ConfigError("hypothesis " + std::to_string(id) + " fixes more slots than T");
    }
    std::sort(fixed_.begin(), fixed_.end());
    for (std::size_t i = 0; i < fixed_.size(); ++i) {
      const auto& c = fixed_[i];
      if (c.slot < 0 || c.slot >= width) {
        throw ConfigError("hypothesis " + std::to_string(id) + " slot " +
                          std::to_string(c.slot) + " out of range");
      }
      if (i > 0 && fixed_[i - 1].slot == c.slot) {
        throw ConfigError("hypothesis " + std::to_string(id) + " fixes slot " +
                          std::to_string(c.slot) + " twice");
      }
      mask_ |= std::uint64_t{1} << c.slot;
      if (c.value) pattern_ |= std::uint64_t{1} << c.slot;
    }
  }

  int id() const { return id_; }
  Action action() const { return action_; }
  int width() const { return width_; }
  const std::vector<SlotConstraint>& fixed_slots() const { return fixed_; }
  int z() const { return static_cast<int>(fixed_.size()); }
  // log2 of the number of compatible Q-sentences, T - Z.
  int specificity_exponent() const { return width_ - z(); }

  std::uint64_t mask() const { return mask_; }
  std::uint64_t pattern() const { return pattern_; }

 private:
  int id_;
  std::vector<SlotConstraint> fixed_;
  Action action_;
  int width_;
  std::uint64_t mask_ = 0;
  std::uint64_t pattern_ = 0;
};

inline bool hypothesis_satisfied_by(const QSentence& q, const Hypothesis& h) {
  assert(q.width() == h.width());
  return (q.bits() & h.mask()) == h.pattern();
}

struct EvidenceItem {
  int entity_id = 0;
  QSentence q;

  friend bool operator==(const EvidenceItem&, const EvidenceItem&) = default;
};

// Set of distinct Q-sentences in ascending order; K is its size.
inline std::vector<QSentence> distinct_q(std::span<const EvidenceItem> pool) {
  std::vector<QSentence> out;
  out.reserve(pool.size());
  for (const auto& e : pool) out.push_back(e.q);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace semsel

#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "semsel/errors.hpp"
#include "semsel/logic.hpp"

namespace semsel {

struct RuleSet {
  std::string name;
  std::vector<Hypothesis> hypotheses;
  std::vector<Action> action_priority;  // highest priority first

  void validate() const {
    for (std::size_t i = 0; i < action_priority.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (action_priority[i] == action_priority[j]) {
          throw ConfigError("rule set '" + name + "' lists action " +
                            std::string(to_string(action_priority[i])) + " twice");
        }
      }
    }
    for (const auto& h : hypotheses) {
      if (std::find(action_priority.begin(), action_priority.end(), h.action()) ==
          action_priority.end()) {
        throw ConfigError("rule set '" + name + "': action " +
                          std::string(to_string(h.action())) + " of hypothesis " +
                          std::to_string(h.id()) + " has no priority");
      }
    }
  }
};

inline std::vector<Action> default_action_priority() {
  return {Action::kStop, Action::kSlow, Action::kFast, Action::kNormal};
}

// Hypothesis i holds iff some observed Q-sentence satisfies it.
inline std::vector<bool> evaluate_hypotheses(std::span<const EvidenceItem> evidence,
                                             const RuleSet& rules) {
  std::vector<bool> out(rules.hypotheses.size(), false);
  for (std::size_t i = 0; i < rules.hypotheses.size(); ++i) {
    for (const auto& e : evidence) {
      if (hypothesis_satisfied_by(e.q, rules.hypotheses[i])) {
        out[i] = true;
        break;
      }
    }
  }
  return out;
}

inline Action decide_action(const std::vector<bool>& truth, const RuleSet& rules) {
  if (truth.size() != rules.hypotheses.size()) {
    throw ConfigError("truth vector does not match the rule set");
  }
  for (Action a : rules.action_priority) {
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (truth[i] && rules.hypotheses[i].action() == a) return a;
    }
  }
  return Action::kNormal;
}

}  // namespace semsel

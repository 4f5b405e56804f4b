#pragma once

// Checks a key order against the exact objective on random instances: every
// pair of size-k subsets of a random pool is ranked both ways.

#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "semsel/logic.hpp"
#include "semsel/oracle.hpp"
#include "semsel/selection.hpp"

namespace semsel {

struct RandomInstance {
  int width = 3;
  std::vector<Hypothesis> hypotheses;
  std::vector<EvidenceItem> pool;
};

// Distinct hypotheses (1..max_hypotheses of them, random Z and slots) and a
// pool of n uniformly random Q-sentences.
inline RandomInstance random_instance(std::mt19937_64& rng, int width, int n,
                                      int max_hypotheses = 6) {
  RandomInstance inst;
  inst.width = width;
  std::uniform_int_distribution<int> count(1, max_hypotheses);
  std::uniform_int_distribution<int> zdist(1, width);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<std::uint64_t> qdist(0, (std::uint64_t{1} << width) - 1);
  const int m = count(rng);
  std::set<std::vector<SlotConstraint>> seen;
  int attempts = 0;
  while (static_cast<int>(inst.hypotheses.size()) < m && attempts++ < 1000) {
    std::vector<int> slots(static_cast<std::size_t>(width));
    std::iota(slots.begin(), slots.end(), 0);
    std::shuffle(slots.begin(), slots.end(), rng);
    const int z = zdist(rng);
    std::vector<SlotConstraint> fixed;
    for (int i = 0; i < z; ++i) fixed.push_back({slots[static_cast<std::size_t>(i)], bit(rng) == 1});
    std::sort(fixed.begin(), fixed.end());
    if (!seen.insert(fixed).second) continue;
    inst.hypotheses.emplace_back(static_cast<int>(inst.hypotheses.size()), fixed, Action::kStop,
                                 width);
  }
  for (int i = 0; i < n; ++i) inst.pool.push_back({i, QSentence(qdist(rng), width)});
  return inst;
}

inline std::vector<std::vector<EvidenceItem>> all_subsets(const std::vector<EvidenceItem>& pool,
                                                          int k) {
  std::vector<std::vector<EvidenceItem>> out;
  const std::size_t n = pool.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) return out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<EvidenceItem> s;
    for (auto i : idx) s.push_back(pool[i]);
    out.push_back(std::move(s));
    std::size_t pos = idx.size();
    while (pos > 0 && idx[pos - 1] == n - idx.size() + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Exact F for one subset, comparable across subsets of the same instance.
// Rational F where the exponents fit the budget, otherwise the dyadic route.
class ExactObjective {
 public:
  ExactObjective(std::span<const EvidenceItem> subset, std::span<const Hypothesis> hypotheses,
                 int width) {
    const auto s = distinct_q(subset);
    params_ = oracle::make_params(s, hypotheses, width);
    if (width <= 4) value_ = oracle::closed_form_objective(params_);
  }

  const oracle::ClosedFormParams& params() const { return params_; }
  const std::optional<Rational>& rational() const { return value_; }

  friend std::strong_ordering compare(const ExactObjective& a, const ExactObjective& b) {
    if (a.value_ && b.value_) {
      if (*a.value_ < *b.value_) return std::strong_ordering::less;
      if (*b.value_ < *a.value_) return std::strong_ordering::greater;
      return std::strong_ordering::equal;
    }
    return oracle::compare_objective(a.params_, b.params_);
  }

 private:
  oracle::ClosedFormParams params_;
  std::optional<Rational> value_;
};

struct KeyValidationReport {
  std::uint64_t instances = 0;
  std::uint64_t comparisons = 0;         // unordered subset pairs
  std::uint64_t strict_pairs = 0;        // pairs with unequal exact F
  std::uint64_t agreements = 0;          // strict in both, same direction
  std::uint64_t disagreements = 0;       // strict in both, opposite direction
  std::uint64_t key_ties_unequal_f = 0;  // key tie, F strict
  std::uint64_t f_ties_unequal_key = 0;  // F tie, key strict
  std::uint64_t full_ties = 0;
  std::uint64_t route_mismatches = 0;    // rational vs dyadic comparison, T <= 4

  void merge(const KeyValidationReport& o) {
    instances += o.instances;
    comparisons += o.comparisons;
    strict_pairs += o.strict_pairs;
    agreements += o.agreements;
    disagreements += o.disagreements;
    key_ties_unequal_f += o.key_ties_unequal_f;
    f_ties_unequal_key += o.f_ties_unequal_key;
    full_ties += o.full_ties;
    route_mismatches += o.route_mismatches;
  }
};

inline KeyValidationReport validate_instance(const RandomInstance& inst, int k, KeyOrder order) {
  KeyValidationReport rep;
  rep.instances = 1;
  const auto subsets = all_subsets(inst.pool, k);
  std::vector<SelectionKey> keys;
  std::vector<ExactObjective> exact;
  for (const auto& s : subsets) {
    keys.push_back(comparison_key(s, inst.hypotheses));
    exact.emplace_back(s, inst.hypotheses, inst.width);
  }
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    for (std::size_t b = a + 1; b < subsets.size(); ++b) {
      ++rep.comparisons;
      const auto fo = compare(exact[a], exact[b]);
      if (exact[a].rational() &&
          oracle::compare_objective(exact[a].params(), exact[b].params()) != fo) {
        ++rep.route_mismatches;
      }
      const auto ko = compare_keys(keys[a], keys[b], order);
      if (fo != 0) ++rep.strict_pairs;
      if (fo != 0 && ko != 0) {
        if (fo == ko) {
          ++rep.agreements;
        } else {
          ++rep.disagreements;
        }
      } else if (fo != 0) {
        ++rep.key_ties_unequal_f;
      } else if (ko != 0) {
        ++rep.f_ties_unequal_key;
      } else {
        ++rep.full_ties;
      }
    }
  }
  return rep;
}

inline KeyValidationReport validate_key_ordering(std::uint64_t trials, int width, int n, int k,
                                                 std::uint64_t seed, KeyOrder order) {
  if (width < 1 || width > oracle::kMaxClosedFormWidth) {
    throw FeasibilityError("key validation needs 1 <= T <= 5");
  }
  if (n < 1 || k < 1 || k > n) throw ConfigError("key validation needs 1 <= k <= n");
  std::mt19937_64 rng(seed);
  KeyValidationReport total;
  for (std::uint64_t t = 0; t < trials; ++t) {
    total.merge(validate_instance(random_instance(rng, width, n), k, order));
  }
  return total;
}

}  // namespace semsel

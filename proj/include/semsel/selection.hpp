#pragma once

// Budgeted evidence selection: exhaustive search over size-k subsets of the
// pool, ranked by a symbolic key of small integers instead of the objective
// F itself, whose probabilities underflow at realistic T.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semsel/errors.hpp"
#include "semsel/logic.hpp"

namespace semsel {

struct SelectionKey {
  int n_nonoverlap = 0;            // |I_not_overlapping|
  int k_distinct = 0;              // K
  std::vector<int> h_exponents;    // log2 H_i of the non-overlapping goal states, ascending

  friend bool operator==(const SelectionKey&, const SelectionKey&) = default;
};

// Key order over (|I|, K, -H_(1), -H_(2), ...), compared lexicographically.
inline std::strong_ordering lex_compare(const SelectionKey& a, const SelectionKey& b) {
  if (auto c = a.n_nonoverlap <=> b.n_nonoverlap; c != 0) return c;
  if (auto c = a.k_distinct <=> b.k_distinct; c != 0) return c;
  const std::size_t n = std::min(a.h_exponents.size(), b.h_exponents.size());
  for (std::size_t i = 0; i < n; ++i) {
    // -H ascending is H descending.
    if (auto c = b.h_exponents[i] <=> a.h_exponents[i]; c != 0) return c;
  }
  return a.h_exponents.size() <=> b.h_exponents.size();
}

// The order of the exact objective. F = 0 iff nothing is left unwitnessed;
// otherwise F ~ sum_i 2^-gamma_i and gamma_i = 2^(Q-K-H_i)(2^H_i - 1), so a
// smaller K wins outright, then the ascending H lists are compared with a
// larger H better at the first difference, and a list that is a prefix of
// the other (fewer positive terms) is better.
inline std::strong_ordering objective_compare(const SelectionKey& a, const SelectionKey& b) {
  const bool za = a.n_nonoverlap == 0, zb = b.n_nonoverlap == 0;
  if (za || zb) {
    if (za && zb) return std::strong_ordering::equal;
    return za ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (auto c = a.k_distinct <=> b.k_distinct; c != 0) return c;
  const std::size_t n = std::min(a.h_exponents.size(), b.h_exponents.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = b.h_exponents[i] <=> a.h_exponents[i]; c != 0) return c;
  }
  return a.h_exponents.size() <=> b.h_exponents.size();
}

enum class KeyOrder {
  kTuple,      // lex_compare
  kObjective,  // objective_compare
};

inline std::string_view to_string(KeyOrder o) {
  return o == KeyOrder::kTuple ? "tuple" : "objective";
}

inline KeyOrder parse_key_order(std::string_view s) {
  if (s == "tuple") return KeyOrder::kTuple;
  if (s == "objective") return KeyOrder::kObjective;
  throw ConfigError("unknown key order '" + std::string(s) + "'");
}

inline std::strong_ordering compare_keys(const SelectionKey& a, const SelectionKey& b,
                                         KeyOrder order) {
  return order == KeyOrder::kTuple ? lex_compare(a, b) : objective_compare(a, b);
}

namespace detail {

// Which hypotheses each Q-sentence witnesses, as a bitset over hypotheses.
class WitnessTable {
 public:
  explicit WitnessTable(std::size_t n_hyp) : words_((n_hyp + 63) / 64) {}

  std::vector<std::uint64_t> row(const QSentence& q, std::span<const Hypothesis> hyps) const {
    std::vector<std::uint64_t> r(words_, 0);
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      if (hypothesis_satisfied_by(q, hyps[i])) r[i / 64] |= std::uint64_t{1} << (i % 64);
    }
    return r;
  }

  std::size_t words() const { return words_; }

 private:
  std::size_t words_;
};

inline SelectionKey key_from_witnessed(std::span<const std::uint64_t> witnessed, int k_distinct,
                                       std::span<const Hypothesis> hyps) {
  SelectionKey key;
  key.k_distinct = k_distinct;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    if ((witnessed[i / 64] >> (i % 64)) & 1u) continue;
    key.h_exponents.push_back(hyps[i].specificity_exponent());
  }
  key.n_nonoverlap = static_cast<int>(key.h_exponents.size());
  std::sort(key.h_exponents.begin(), key.h_exponents.end());
  return key;
}

}  // namespace detail

inline SelectionKey comparison_key(std::span<const EvidenceItem> subset,
                                   std::span<const Hypothesis> hypotheses) {
  const std::vector<QSentence> s = distinct_q(subset);
  detail::WitnessTable table(hypotheses.size());
  std::vector<std::uint64_t> witnessed(table.words(), 0);
  for (const auto& q : s) {
    const auto r = table.row(q, hypotheses);
    for (std::size_t w = 0; w < r.size(); ++w) witnessed[w] |= r[w];
  }
  return detail::key_from_witnessed(witnessed, static_cast<int>(s.size()), hypotheses);
}

// C(n, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

struct SelectionOptions {
  std::uint64_t enumeration_cap = 10'000'000;
  KeyOrder order = KeyOrder::kTuple;
};

inline std::vector<EvidenceItem> sorted_by_entity(std::span<const EvidenceItem> pool) {
  std::vector<EvidenceItem> items(pool.begin(), pool.end());
  std::sort(items.begin(), items.end(), [](const EvidenceItem& a, const EvidenceItem& b) {
    return a.entity_id < b.entity_id;
  });
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (items[i - 1].entity_id == items[i].entity_id) {
      throw ConfigError("pool lists entity " + std::to_string(items[i].entity_id) + " twice");
    }
  }
  return items;
}

// Key-minimal subset of size k. Among equal keys the subset whose sorted
// entity ids are lexicographically smallest wins, so the result does not
// depend on pool order.
inline std::vector<EvidenceItem> select_semantic(std::span<const EvidenceItem> pool,
                                                 std::span<const Hypothesis> hypotheses, int k,
                                                 const SelectionOptions& options = {}) {
  if (k < 1) throw ConfigError("selection budget k must be at least 1");
  std::vector<EvidenceItem> items = sorted_by_entity(pool);
  const std::size_t n = items.size();
  if (n <= static_cast<std::size_t>(k)) return items;

  const std::uint64_t subsets = binomial(n, static_cast<std::uint64_t>(k));
  if (subsets > options.enumeration_cap) {
    throw FeasibilityError("C(" + std::to_string(n) + "," + std::to_string(k) +
                           ") = " + std::to_string(subsets) + " subsets exceeds the cap of " +
                           std::to_string(options.enumeration_cap));
  }

  detail::WitnessTable table(hypotheses.size());
  std::vector<std::vector<std::uint64_t>> rows;
  rows.reserve(n);
  for (const auto& it : items) rows.push_back(table.row(it.q, hypotheses));

  std::vector<std::size_t> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::size_t> best_idx;
  SelectionKey best;
  std::vector<std::uint64_t> witnessed(table.words());
  std::vector<QSentence> qs(static_cast<std::size_t>(k));

  while (true) {
    std::fill(witnessed.begin(), witnessed.end(), 0);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const auto& r = rows[idx[j]];
      for (std::size_t w = 0; w < r.size(); ++w) witnessed[w] |= r[w];
      qs[j] = items[idx[j]].q;
    }
    std::sort(qs.begin(), qs.end());
    const int kd = static_cast<int>(std::unique(qs.begin(), qs.end()) - qs.begin());
    SelectionKey key = detail::key_from_witnessed(witnessed, kd, hypotheses);
    if (best_idx.empty() || compare_keys(key, best, options.order) < 0) {
      best = std::move(key);
      best_idx = idx;
    }

    // Next combination in lexicographic order.
    std::size_t pos = idx.size();
    while (pos > 0 && idx[pos - 1] == n - idx.size() + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
  }

  std::vector<EvidenceItem> out;
  out.reserve(best_idx.size());
  for (std::size_t i : best_idx) out.push_back(items[i]);
  return out;
}

// Uniform sample of min(k, |pool|) items without replacement.
inline std::vector<EvidenceItem> select_random(std::span<const EvidenceItem> pool, int k,
                                               std::uint64_t seed) {
  if (k < 1) throw ConfigError("selection budget k must be at least 1");
  std::vector<EvidenceItem> items = sorted_by_entity(pool);
  if (items.size() <= static_cast<std::size_t>(k)) return items;
  std::vector<EvidenceItem> out;
  out.reserve(static_cast<std::size_t>(k));
  std::mt19937_64 rng(seed);
  std::sample(items.begin(), items.end(), std::back_inserter(out), k, rng);
  return out;
}

}  // namespace semsel

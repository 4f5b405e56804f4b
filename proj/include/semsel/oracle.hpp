#pragma once

// Exact inductive probabilities under the indicator likelihood with a uniform
// prior over constituents: every probability is a ratio of constituent counts.
//
// Two independent routes are provided.
//
//  * Enumeration (T <= 2). Q-sentences are indexed by their bit pattern, an
//    attributive constituent is a bit mask over the Q = 2^T Q-sentences, and a
//    constituent is a bit mask over the 2^Q attributive constituents. All
//    2^(2^Q) constituents are visited.
//
//  * Closed forms (T <= 5). With K distinct observed Q-sentences and a
//    hypothesis compatible with H = 2^(T-Z) Q-sentences,
//        c(e)       = 1 - 2^-alpha,          alpha   = 2^(Q-K)
//        c(phi & e) = 1 - 2^-gamma,          gamma   = 2^(Q-K) - 2^(Q-K-H)
//    for a hypothesis no observed Q-sentence satisfies, and c(phi | e) = 1
//    otherwise.
//
// Evidence is read for a single ego: a constituent is compatible with the
// observed set S iff it contains an attributive constituent whose Q-set
// includes S, and it satisfies e & phi iff that attributive constituent also
// meets the hypothesis' compatible set.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "semsel/dyadic.hpp"
#include "semsel/errors.hpp"
#include "semsel/logic.hpp"
#include "semsel/rational.hpp"

namespace semsel::oracle {

inline constexpr int kMaxEnumerationWidth = 2;
inline constexpr int kMaxClosedFormWidth = 5;

struct Tautology {};

// "exists x2 such that Q(ego, x2) is one of `compatible`".
struct ExistentialHypothesis {
  std::vector<QSentence> compatible;
};

using OracleHypothesis = std::variant<Tautology, ExistentialHypothesis>;

// The Q-sentences of width T that satisfy every fixed slot; no slots = tautology.
inline OracleHypothesis hypothesis_from_constraints(std::span<const SlotConstraint> fixed,
                                                    int width) {
  if (fixed.empty()) return Tautology{};
  if (width > kMaxClosedFormWidth) {
    throw FeasibilityError("cannot list the compatible Q-sentences at T=" +
                           std::to_string(width));
  }
  ExistentialHypothesis h;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << width); ++bits) {
    bool ok = true;
    for (const auto& c : fixed) {
      if (c.slot < 0 || c.slot >= width) throw ConfigError("constraint slot out of range");
      if (((bits >> c.slot) & 1u) != static_cast<std::uint64_t>(c.value)) {
        ok = false;
        break;
      }
    }
    if (ok) h.compatible.emplace_back(bits, width);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Enumeration route.

class ConstituentSpace {
 public:
  explicit ConstituentSpace(int width) : width_(width) {
    if (width < 1) throw ConfigError("T must be positive");
    if (width > kMaxEnumerationWidth) {
      throw FeasibilityError("constituent enumeration is limited to T <= " +
                             std::to_string(kMaxEnumerationWidth) + " (T=" +
                             std::to_string(width) + " has 2^(2^" +
                             std::to_string(1 << width) + ") constituents)");
    }
  }

  int width() const { return width_; }
  int q_count() const { return 1 << width_; }
  int attributive_count() const { return 1 << q_count(); }
  std::uint64_t constituent_count() const { return std::uint64_t{1} << attributive_count(); }

  std::uint32_t q_mask(std::span<const QSentence> qs) const {
    std::uint32_t m = 0;
    for (const auto& q : qs) {
      if (q.width() != width_) throw ConfigError("Q-sentence width does not match T");
      m |= std::uint32_t{1} << q.bits();
    }
    return m;
  }

  // Attributive constituents (as a mask over their ids) whose Q-set contains
  // `observed` and, unless `meets` is empty, intersects `meets`.
  std::uint32_t attributives(std::uint32_t observed, std::optional<std::uint32_t> meets) const {
    std::uint32_t out = 0;
    for (std::uint32_t ac = 0; ac < static_cast<std::uint32_t>(attributive_count()); ++ac) {
      if ((ac & observed) != observed) continue;
      if (meets && (ac & *meets) == 0) continue;
      out |= std::uint32_t{1} << ac;
    }
    return out;
  }

  // Number of constituents asserting at least one of `kinds`.
  std::uint64_t count_asserting_any(std::uint32_t kinds) const {
    std::uint64_t n = 0;
    const std::uint64_t total = constituent_count();
    for (std::uint64_t c = 0; c < total; ++c) {
      if ((c & kinds) != 0) ++n;
    }
    return n;
  }

  std::uint64_t count_all() const { return constituent_count(); }

  bool satisfies_evidence(std::uint64_t constituent, std::uint32_t observed) const {
    return (constituent & attributives(observed, std::nullopt)) != 0;
  }

  bool satisfies(std::uint64_t constituent, const OracleHypothesis& h, std::uint32_t observed) const {
    if (std::holds_alternative<Tautology>(h)) return satisfies_evidence(constituent, observed);
    const auto& ex = std::get<ExistentialHypothesis>(h);
    return (constituent & attributives(observed, q_mask(ex.compatible))) != 0;
  }

 private:
  int width_;
};

// |C(e)|: constituents compatible with the observed Q-sentences.
inline std::uint64_t compatible_count(std::span<const QSentence> evidence, int width) {
  ConstituentSpace space(width);
  return space.count_asserting_any(space.attributives(space.q_mask(evidence), std::nullopt));
}

// |C(e & phi)|.
inline std::uint64_t joint_count(const OracleHypothesis& h, std::span<const QSentence> evidence,
                                 int width) {
  ConstituentSpace space(width);
  const std::uint32_t observed = space.q_mask(evidence);
  if (std::holds_alternative<Tautology>(h)) {
    return space.count_asserting_any(space.attributives(observed, std::nullopt));
  }
  const auto& ex = std::get<ExistentialHypothesis>(h);
  return space.count_asserting_any(space.attributives(observed, space.q_mask(ex.compatible)));
}

// c(e) = |C(e)| / |C|.
inline Rational evidence_probability(std::span<const QSentence> evidence, int width) {
  ConstituentSpace space(width);
  return Rational(Integer(compatible_count(evidence, width)), Integer(space.count_all()));
}

// c(phi) = |C(phi)| / |C|. The tautology holds in every constituent.
inline Rational hypothesis_probability(const OracleHypothesis& h, int width) {
  ConstituentSpace space(width);
  if (std::holds_alternative<Tautology>(h)) return Rational(1);
  return Rational(Integer(joint_count(h, {}, width)), Integer(space.count_all()));
}

inline Rational joint_probability(const OracleHypothesis& h, std::span<const QSentence> evidence,
                                  int width) {
  ConstituentSpace space(width);
  if (std::holds_alternative<Tautology>(h)) return evidence_probability(evidence, width);
  return Rational(Integer(joint_count(h, evidence, width)), Integer(space.count_all()));
}

// c(phi | e) = |C(e & phi)| / |C(e)|.
inline Rational degree_of_confirmation(const OracleHypothesis& h,
                                       std::span<const QSentence> evidence, int width) {
  if (std::holds_alternative<Tautology>(h)) {
    ConstituentSpace space(width);  // validates width
    return Rational(1);
  }
  const std::uint64_t denom = compatible_count(evidence, width);
  if (denom == 0) throw ContradictionError("no constituent is compatible with the evidence");
  return Rational(Integer(joint_count(h, evidence, width)), Integer(denom));
}

inline Rational degree_of_confirmation(std::span<const QSentence> hypothesis_compatible,
                                       std::span<const QSentence> evidence, int width) {
  ExistentialHypothesis h{{hypothesis_compatible.begin(), hypothesis_compatible.end()}};
  return degree_of_confirmation(OracleHypothesis{std::move(h)}, evidence, width);
}

// c(C | e) for one constituent id.
inline Rational posterior(std::uint64_t constituent, std::span<const QSentence> evidence,
                          int width) {
  ConstituentSpace space(width);
  if (!space.satisfies_evidence(constituent, space.q_mask(evidence))) return Rational(0);
  return Rational(Integer(1), Integer(compatible_count(evidence, width)));
}

inline Rational content(const Rational& c) { return Rational(1) - c; }

// H_s(Phi) = sum_i c(phi_i) cont(phi_i).
inline Rational semantic_entropy(std::span<const OracleHypothesis> phi, int width) {
  Rational h = 0;
  for (const auto& p : phi) {
    const Rational c = hypothesis_probability(p, width);
    h += c * content(c);
  }
  return h;
}

// H_s(Phi | e) = sum_i c(phi_i & e) cont(phi_i | e).
inline Rational conditional_semantic_entropy(std::span<const OracleHypothesis> phi,
                                             std::span<const QSentence> evidence, int width) {
  Rational h = 0;
  for (const auto& p : phi) {
    h += joint_probability(p, evidence, width) *
         content(degree_of_confirmation(p, evidence, width));
  }
  return h;
}

// I_s(Phi; e), accumulated hypothesis by hypothesis as the drop in weighted
// content, each probability obtained by visiting every constituent.
inline Rational semantic_mutual_information(std::span<const OracleHypothesis> phi,
                                            std::span<const QSentence> evidence, int width) {
  ConstituentSpace space(width);
  const std::uint32_t observed = space.q_mask(evidence);
  const std::uint64_t total = space.count_all();
  const std::uint32_t e_kinds = space.attributives(observed, std::nullopt);
  Rational info = 0;
  for (const auto& p : phi) {
    const bool taut = std::holds_alternative<Tautology>(p);
    std::uint32_t phi_kinds = 0, joint_kinds = e_kinds;
    if (!taut) {
      const std::uint32_t a = space.q_mask(std::get<ExistentialHypothesis>(p).compatible);
      phi_kinds = space.attributives(0, a);
      joint_kinds = space.attributives(observed, a);
    }
    std::uint64_t n_phi = 0, n_e = 0, n_joint = 0;
    for (std::uint64_t c = 0; c < total; ++c) {
      const bool sat_phi = taut || (c & phi_kinds) != 0;
      const bool sat_e = (c & e_kinds) != 0;
      const bool sat_joint = (c & joint_kinds) != 0;
      n_phi += sat_phi;
      n_e += sat_e;
      n_joint += sat_joint;
    }
    if (n_e == 0) throw ContradictionError("no constituent is compatible with the evidence");
    const Rational c_phi{Integer(n_phi), Integer(total)};
    const Rational c_joint{Integer(n_joint), Integer(total)};
    const Rational c_cond{Integer(n_joint), Integer(n_e)};
    info += c_phi * content(c_phi) - c_joint * content(c_cond);
  }
  return info;
}

// ---------------------------------------------------------------------------
// Closed-form route.

struct HypothesisTerm {
  int z = 1;             // fixed slots
  bool overlap = false;  // some observed Q-sentence satisfies every fixed slot
};

struct ClosedFormParams {
  int width = 1;  // T
  int k_distinct = 0;  // K
  std::vector<HypothesisTerm> terms;

  int q_count() const { return 1 << width; }
  int h_exponent(const HypothesisTerm& t) const { return width - t.z; }
  std::uint64_t h_value(const HypothesisTerm& t) const { return std::uint64_t{1} << h_exponent(t); }

  // alpha = 2^(Q-K)
  std::uint64_t alpha() const { return std::uint64_t{1} << (q_count() - k_distinct); }
  // gamma = 2^(Q-K) - 2^(Q-K-H)
  std::uint64_t gamma(const HypothesisTerm& t) const {
    return alpha() - (std::uint64_t{1} << (q_count() - k_distinct - h_value(t)));
  }

  void validate() const {
    if (width < 1 || width > kMaxClosedFormWidth) {
      throw FeasibilityError("closed forms are evaluated for 1 <= T <= " +
                             std::to_string(kMaxClosedFormWidth) + ", got T=" +
                             std::to_string(width));
    }
    if (k_distinct < 0 || k_distinct > q_count()) {
      throw ConfigError("K=" + std::to_string(k_distinct) + " outside [0, " +
                        std::to_string(q_count()) + "]");
    }
    for (const auto& t : terms) {
      if (t.z < 1 || t.z > width) throw ConfigError("Z outside [1, T]");
      if (!t.overlap && static_cast<std::uint64_t>(k_distinct) + h_value(t) >
                            static_cast<std::uint64_t>(q_count())) {
        throw ConfigError("K + H exceeds Q, so the hypothesis must overlap the evidence");
      }
    }
  }
};

// Build the parameters for a concrete evidence set and hypothesis list.
inline ClosedFormParams make_params(std::span<const QSentence> distinct_evidence,
                                    std::span<const Hypothesis> hypotheses, int width) {
  ClosedFormParams p;
  p.width = width;
  p.k_distinct = static_cast<int>(distinct_evidence.size());
  for (const auto& h : hypotheses) {
    bool overlap = false;
    for (const auto& q : distinct_evidence) {
      if (hypothesis_satisfied_by(q, h)) {
        overlap = true;
        break;
      }
    }
    p.terms.push_back({h.z(), overlap});
  }
  return p;
}

inline Rational closed_form_evidence_probability(
    const ClosedFormParams& p, std::uint64_t budget_bits = kDefaultExponentBudgetBits) {
  p.validate();
  return Rational(1) - pow2_neg(p.alpha(), budget_bits);
}

inline Rational closed_form_joint_probability(
    const ClosedFormParams& p, const HypothesisTerm& t,
    std::uint64_t budget_bits = kDefaultExponentBudgetBits) {
  p.validate();
  if (t.overlap) return closed_form_evidence_probability(p, budget_bits);
  return Rational(1) - pow2_neg(p.gamma(t), budget_bits);
}

inline Rational closed_form_confirmation(const ClosedFormParams& p, const HypothesisTerm& t,
                                         std::uint64_t budget_bits = kDefaultExponentBudgetBits) {
  if (t.overlap) {
    p.validate();
    return Rational(1);
  }
  return closed_form_joint_probability(p, t, budget_bits) /
         closed_form_evidence_probability(p, budget_bits);
}

// c(phi) with no evidence at all: the K = 0 joint form.
inline Rational closed_form_hypothesis_probability(
    int width, int z, std::uint64_t budget_bits = kDefaultExponentBudgetBits) {
  ClosedFormParams p{width, 0, {{z, false}}};
  return closed_form_joint_probability(p, p.terms.front(), budget_bits);
}

// F = sum over non-overlapping i of (1 - u_i)(u_i - v)/(1 - v).
inline Rational closed_form_objective(const ClosedFormParams& p,
                                      std::uint64_t budget_bits = kDefaultExponentBudgetBits) {
  p.validate();
  Rational f = 0;
  bool any = false;
  for (const auto& t : p.terms) any = any || !t.overlap;
  if (!any) return f;
  const Rational v = pow2_neg(p.alpha(), budget_bits);
  for (const auto& t : p.terms) {
    if (t.overlap) continue;
    const Rational u = pow2_neg(p.gamma(t), budget_bits);
    f += (Rational(1) - u) * (u - v) / (Rational(1) - v);
  }
  return f;
}

// F (1 - v) as an exact dyadic sum: sum_i (u_i - v - u_i^2 + u_i v).
inline DyadicSum objective_numerator(const ClosedFormParams& p) {
  p.validate();
  DyadicSum n;
  const auto a = static_cast<std::int64_t>(p.alpha());
  for (const auto& t : p.terms) {
    if (t.overlap) continue;
    const auto g = static_cast<std::int64_t>(p.gamma(t));
    n.add(-g, 1);
    n.add(-a, -1);
    n.add(-2 * g, -1);
    n.add(-(g + a), 1);
  }
  return n;
}

// Exact three-way comparison of F between two evidence sets, for any T the
// closed forms accept. Uses F_a < F_b  <=>  N_a (1 - v_b) < N_b (1 - v_a).
inline std::strong_ordering compare_objective(const ClosedFormParams& a,
                                              const ClosedFormParams& b) {
  const DyadicSum na = objective_numerator(a);
  const DyadicSum nb = objective_numerator(b);
  DyadicSum da = DyadicSum::power(0);
  da.add(-static_cast<std::int64_t>(a.alpha()), -1);
  DyadicSum db = DyadicSum::power(0);
  db.add(-static_cast<std::int64_t>(b.alpha()), -1);
  const int s = (na * db - nb * da).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

// gamma_min described by (K, log2 H_min). gamma = 2^(Q-K-H)(2^H - 1) is
// strictly decreasing in K and strictly increasing in H, and the K effect
// dominates every H effect, so the pair orders gamma exactly.
struct GammaDescriptor {
  int width = 1;
  int k_distinct = 0;
  int h_exponent = 0;

  // Larger gamma compares greater.
  friend std::strong_ordering operator<=>(const GammaDescriptor& a, const GammaDescriptor& b) {
    if (a.k_distinct != b.k_distinct) return b.k_distinct <=> a.k_distinct;
    return a.h_exponent <=> b.h_exponent;
  }
  friend bool operator==(const GammaDescriptor&, const GammaDescriptor&) = default;

  // Exact value; only for sizes whose Q - K fits the budget.
  Integer exact(std::uint64_t budget_bits = kDefaultExponentBudgetBits) const {
    const std::uint64_t q = std::uint64_t{1} << width;
    const std::uint64_t h = std::uint64_t{1} << h_exponent;
    const std::uint64_t hi = q - static_cast<std::uint64_t>(k_distinct);
    return pow2(hi - h, budget_bits) * (pow2(h, budget_bits) - 1);
  }
};

// F ~ 2^-gamma_min. nullopt means every hypothesis overlaps and F = 0.
inline std::optional<GammaDescriptor> asymptotic_objective(const ClosedFormParams& p) {
  std::optional<int> h_min;
  for (const auto& t : p.terms) {
    if (t.overlap) continue;
    const int e = p.h_exponent(t);
    h_min = h_min ? std::min(*h_min, e) : e;
  }
  if (!h_min) return std::nullopt;
  return GammaDescriptor{p.width, p.k_distinct, *h_min};
}

}  // namespace semsel::oracle

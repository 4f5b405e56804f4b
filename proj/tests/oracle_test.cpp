#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "semsel/oracle.hpp"

namespace semsel::oracle {
namespace {

// Reference counter written from the definitions with explicit sets: an
// attributive constituent is the set of Q-sentence ids it realises, a
// constituent the set of attributive constituents it asserts.
struct BruteForce {
  int width;
  std::vector<std::set<int>> attributives;

  explicit BruteForce(int t) : width(t) {
    const int q = 1 << t;
    for (int m = 0; m < (1 << q); ++m) {
      std::set<int> s;
      for (int i = 0; i < q; ++i) {
        if (m & (1 << i)) s.insert(i);
      }
      attributives.push_back(s);
    }
  }

  static bool includes(const std::set<int>& big, const std::set<int>& small) {
    for (int x : small) {
      if (!big.count(x)) return false;
    }
    return true;
  }

  static bool meets(const std::set<int>& a, const std::set<int>& b) {
    for (int x : a) {
      if (b.count(x)) return true;
    }
    return false;
  }

  // (|C(e)|, |C(e & phi)|); phi = nullopt counts e alone.
  std::pair<std::uint64_t, std::uint64_t> counts(const std::set<int>& observed,
                                                 const std::set<int>& compatible) const {
    std::uint64_t ne = 0, nj = 0;
    const std::uint64_t total = std::uint64_t{1} << attributives.size();
    for (std::uint64_t c = 0; c < total; ++c) {
      bool e = false, j = false;
      for (std::size_t a = 0; a < attributives.size(); ++a) {
        if (!((c >> a) & 1u)) continue;
        if (includes(attributives[a], observed)) {
          e = true;
          if (meets(attributives[a], compatible)) j = true;
        }
      }
      ne += e;
      nj += j;
    }
    return {ne, nj};
  }
};

std::vector<QSentence> qs(std::initializer_list<int> ids, int width) {
  std::vector<QSentence> out;
  for (int i : ids) out.emplace_back(static_cast<std::uint64_t>(i), width);
  return out;
}

std::set<int> ids_of(const std::vector<QSentence>& q) {
  std::set<int> s;
  for (const auto& x : q) s.insert(static_cast<int>(x.bits()));
  return s;
}

TEST(CompatibleCount, NoEvidenceAtTwoSlots) {
  EXPECT_EQ(compatible_count({}, 2), 65535u);
}

TEST(CompatibleCount, EveryQSentenceObserved) {
  const auto e = qs({0, 1, 2, 3}, 2);
  EXPECT_EQ(compatible_count(e, 2), 32768u);
  EXPECT_EQ(evidence_probability(e, 2), Rational(1, 2));
  ClosedFormParams p{2, 4, {}};
  EXPECT_EQ(closed_form_evidence_probability(p), Rational(1, 2));
}

TEST(CompatibleCount, OneSlotOneObservation) {
  // ACs {}, {Q0}, {Q1}, {Q0,Q1}; those containing Q0 are 2 of 4, so 16 - 4 = 12.
  EXPECT_EQ(compatible_count(qs({0}, 1), 1), 12u);
  EXPECT_EQ(evidence_probability(qs({0}, 1), 1), Rational(3, 4));
  EXPECT_EQ(closed_form_evidence_probability(ClosedFormParams{1, 1, {}}), Rational(3, 4));
}

TEST(CompatibleCount, RefusesLargeWidths) {
  EXPECT_THROW(compatible_count({}, 3), FeasibilityError);
  EXPECT_THROW(ConstituentSpace(0), ConfigError);
}

TEST(CompatibleCount, AgreesWithSetBasedCounter) {
  const BruteForce bf(2);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<QSentence> e;
    for (int i = 0; i < 4; ++i) {
      if (rng() & 1) e.emplace_back(static_cast<std::uint64_t>(i), 2);
    }
    std::vector<QSentence> a;
    for (int i = 0; i < 4; ++i) {
      if (rng() & 1) a.emplace_back(static_cast<std::uint64_t>(i), 2);
    }
    if (a.empty()) a.emplace_back(0, 2);
    const auto [ne, nj] = bf.counts(ids_of(e), ids_of(a));
    EXPECT_EQ(compatible_count(e, 2), ne);
    EXPECT_EQ(joint_count(ExistentialHypothesis{a}, e, 2), nj);
  }
}

TEST(DegreeOfConfirmation, WitnessedHypothesisIsCertain) {
  // Hypothesis "slot 0 = 1" is satisfied by Q-sentence 01.
  const auto h = hypothesis_from_constraints(std::vector<SlotConstraint>{{0, true}}, 2);
  EXPECT_EQ(degree_of_confirmation(h, qs({1}, 2), 2), Rational(1));
  EXPECT_EQ(degree_of_confirmation(h, qs({1, 2}, 2), 2), Rational(1));
}

TEST(DegreeOfConfirmation, OneObservationOneFixedSlot) {
  const auto h = hypothesis_from_constraints(std::vector<SlotConstraint>{{0, true}}, 2);
  const auto c = degree_of_confirmation(h, qs({0}, 2), 2);
  EXPECT_EQ(c, Rational(252, 255));
  ClosedFormParams p{2, 1, {{1, false}}};
  EXPECT_EQ(p.gamma(p.terms[0]), 6u);
  EXPECT_EQ(closed_form_confirmation(p, p.terms[0]), Rational(252, 255));
}

TEST(DegreeOfConfirmation, TautologyIsCertain) {
  EXPECT_EQ(degree_of_confirmation(Tautology{}, qs({0, 3}, 2), 2), Rational(1));
  EXPECT_EQ(hypothesis_probability(Tautology{}, 2), Rational(1));
  EXPECT_TRUE(std::holds_alternative<Tautology>(hypothesis_from_constraints({}, 2)));
}

TEST(ClosedFormObjective, AllOverlappingIsZero) {
  ClosedFormParams p{3, 2, {{1, true}, {2, true}, {3, true}}};
  EXPECT_EQ(closed_form_objective(p), Rational(0));
  EXPECT_FALSE(asymptotic_objective(p).has_value());
}

TEST(ClosedFormObjective, OneObservationOneFixedSlot) {
  ClosedFormParams p{2, 1, {{1, false}}};
  EXPECT_EQ(closed_form_objective(p), Rational(189, 16320));
  EXPECT_EQ(closed_form_objective(p),
            Rational(63, 64) * Rational(3, 256) / Rational(255, 256));
  // Enumeration: F_i = c(phi & e) cont(phi | e).
  const auto h = hypothesis_from_constraints(std::vector<SlotConstraint>{{0, true}}, 2);
  EXPECT_EQ(conditional_semantic_entropy(std::span<const OracleHypothesis>(&h, 1), qs({0}, 2), 2),
            Rational(189, 16320));
}

TEST(ClosedFormObjective, DuplicatedHypothesisDoubles) {
  ClosedFormParams one{3, 2, {{2, false}}};
  ClosedFormParams two{3, 2, {{2, false}, {2, false}}};
  EXPECT_EQ(closed_form_objective(two), 2 * closed_form_objective(one));
}

TEST(ClosedFormObjective, ExponentBudget) {
  ClosedFormParams p{5, 1, {{1, false}}};
  EXPECT_THROW(closed_form_objective(p), FeasibilityError);
  EXPECT_NO_THROW(objective_numerator(p));
  EXPECT_THROW((ClosedFormParams{6, 1, {}}.validate()), FeasibilityError);
}

TEST(Content, Basics) {
  EXPECT_EQ(content(Rational(1)), Rational(0));
  EXPECT_EQ(content(Rational(1, 3)), Rational(2, 3));
  // A hypothesis certain under the evidence contributes nothing to H_s(. | e).
  const auto h = hypothesis_from_constraints(std::vector<SlotConstraint>{{1, true}}, 2);
  EXPECT_EQ(conditional_semantic_entropy(std::span<const OracleHypothesis>(&h, 1), qs({2}, 2), 2),
            Rational(0));
}

TEST(MutualInformation, IdentityOnOneHypothesis) {
  const std::vector<OracleHypothesis> phi{
      hypothesis_from_constraints(std::vector<SlotConstraint>{{0, true}}, 2)};
  const auto e = qs({0}, 2);
  const Rational direct = semantic_mutual_information(phi, e, 2);
  const Rational identity = semantic_entropy(phi, 2) - conditional_semantic_entropy(phi, e, 2);
  EXPECT_EQ(direct, identity);
  EXPECT_NE(direct, Rational(0));
}

TEST(EnumerationInvariants, PosteriorsSumToOne) {
  ConstituentSpace space(2);
  for (const auto& e : {qs({}, 2), qs({1}, 2), qs({0, 2, 3}, 2)}) {
    const std::uint32_t observed = space.q_mask(e);
    std::uint64_t support = 0;
    for (std::uint64_t c = 0; c < space.constituent_count(); ++c) {
      support += space.satisfies_evidence(c, observed);
    }
    const Rational each = posterior(space.constituent_count() - 1, e, 2);
    EXPECT_EQ(each * Rational(Integer(support)), Rational(1));
    EXPECT_EQ(posterior(0, e, 2), Rational(0));  // the empty constituent
  }
}

TEST(EnumerationInvariants, MoreEvidenceNeverRaisesProbability) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<QSentence> e, more;
    for (int i = 0; i < 4; ++i) {
      const bool in_e = rng() & 1;
      if (in_e) e.emplace_back(static_cast<std::uint64_t>(i), 2);
      if (in_e || (rng() & 1)) more.emplace_back(static_cast<std::uint64_t>(i), 2);
    }
    EXPECT_LE(evidence_probability(more, 2), evidence_probability(e, 2));
  }
}

TEST(ClosedForms, MatchEnumerationAtTwoSlots) {
  for (int k = 0; k <= 4; ++k) {
    for (int z = 1; z <= 2; ++z) {
      std::vector<SlotConstraint> fixed;
      for (int s = 0; s < z; ++s) fixed.push_back({s, true});
      const Hypothesis h(0, fixed, Action::kStop, 2);
      // Observe the rejected Q-sentences first.
      std::vector<QSentence> order;
      for (int pass = 0; pass < 2; ++pass) {
        for (int b = 0; b < 4; ++b) {
          QSentence q(static_cast<std::uint64_t>(b), 2);
          if (hypothesis_satisfied_by(q, h) == (pass == 1)) order.push_back(q);
        }
      }
      const std::vector<QSentence> e(order.begin(), order.begin() + k);
      const auto p = make_params(e, std::span<const Hypothesis>(&h, 1), 2);
      const auto oh = hypothesis_from_constraints(fixed, 2);
      EXPECT_EQ(evidence_probability(e, 2), closed_form_evidence_probability(p));
      EXPECT_EQ(joint_probability(oh, e, 2), closed_form_joint_probability(p, p.terms[0]));
      EXPECT_EQ(degree_of_confirmation(oh, e, 2), closed_form_confirmation(p, p.terms[0]));
      EXPECT_EQ(hypothesis_probability(oh, 2), closed_form_hypothesis_probability(2, z));
    }
  }
}

TEST(ClosedForms, FactorBounds) {
  for (int t = 1; t <= 4; ++t) {
    const int q = 1 << t;
    for (int k = 0; k < q; ++k) {
      for (int z = 1; z <= t; ++z) {
        ClosedFormParams p{t, k, {{z, false}}};
        if (k + static_cast<int>(p.h_value(p.terms[0])) > q) continue;
        const Rational v = pow2_neg(p.alpha());
        const Rational u = pow2_neg(p.gamma(p.terms[0]));
        EXPECT_LT(Rational(0), v);
        EXPECT_LT(v, u);
        EXPECT_LT(u, Rational(1));
        EXPECT_LT(p.gamma(p.terms[0]), p.alpha());
      }
    }
  }
}

TEST(CompareObjective, MatchesRationalsUpToFourSlots) {
  std::mt19937_64 rng(21);
  auto random_params = [&](int t) {
    ClosedFormParams p;
    p.width = t;
    const int q = 1 << t;
    p.k_distinct = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(q));
    const int m = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < m; ++i) {
      HypothesisTerm term{1 + static_cast<int>(rng() % static_cast<std::uint64_t>(t)), false};
      term.overlap = (rng() % 3 == 0) || p.k_distinct + (1 << (t - term.z)) > q;
      p.terms.push_back(term);
    }
    return p;
  };
  for (int trial = 0; trial < 3000; ++trial) {
    const int t = 1 + static_cast<int>(rng() % 4);
    const auto a = random_params(t), b = random_params(t);
    const Rational fa = closed_form_objective(a), fb = closed_form_objective(b);
    const auto expected = fa < fb ? std::strong_ordering::less
                                  : (fb < fa ? std::strong_ordering::greater
                                             : std::strong_ordering::equal);
    EXPECT_EQ(compare_objective(a, b), expected);
    EXPECT_EQ(objective_numerator(a).to_rational(), fa * (Rational(1) - pow2_neg(a.alpha())));
  }
}

TEST(AsymptoticObjective, FewerDistinctObservationsGiveLargerGamma) {
  ClosedFormParams a{4, 2, {{2, false}, {3, false}}};
  ClosedFormParams b{4, 3, {{2, false}, {3, false}}};
  EXPECT_GT(*asymptotic_objective(a), *asymptotic_objective(b));
  EXPECT_GT(asymptotic_objective(a)->exact(), asymptotic_objective(b)->exact());
}

TEST(AsymptoticObjective, LargerMinimumSpecificityGivesLargerGamma) {
  ClosedFormParams a{4, 3, {{1, false}}};  // H_min = 8
  ClosedFormParams b{4, 3, {{2, false}}};  // H_min = 4
  EXPECT_GT(*asymptotic_objective(a), *asymptotic_objective(b));
  EXPECT_GT(asymptotic_objective(a)->exact(), asymptotic_objective(b)->exact());
}

TEST(AsymptoticObjective, SymbolicOrderMatchesBigIntegersAtThreeSlots) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    auto draw = [&] {
      for (;;) {
        const int k = 1 + static_cast<int>(rng() % 8);
        const int z = 1 + static_cast<int>(rng() % 3);
        if (k + (1 << (3 - z)) <= 8) return GammaDescriptor{3, k, 3 - z};
      }
    };
    const auto a = draw(), b = draw();
    const Integer ga = a.exact(), gb = b.exact();
    const auto expected = ga < gb ? std::strong_ordering::less
                                  : (gb < ga ? std::strong_ordering::greater
                                             : std::strong_ordering::equal);
    EXPECT_EQ(a <=> b, expected);
  }
}

}  // namespace
}  // namespace semsel::oracle

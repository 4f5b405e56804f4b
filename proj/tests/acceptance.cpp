// Acceptance checks, one per criterion. `acceptance N` runs criterion N only;
// without arguments all eight run. Each prints a single PASS/FAIL line plus
// indented detail lines; the exit status is non-zero if any check failed.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "semsel/config.hpp"
#include "semsel/metrics.hpp"
#include "semsel/oracle.hpp"
#include "semsel/validate.hpp"

namespace {

using namespace semsel;
using Clock = std::chrono::steady_clock;

const fs::path kData = SEMSEL_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// --- 1 ---------------------------------------------------------------------

Outcome closed_form_agreement() {
  const auto t0 = Clock::now();
  const int width = 2;
  std::uint64_t checks = 0, mismatches = 0;
  std::vector<QSentence> all;
  for (std::uint64_t b = 0; b < 4; ++b) all.emplace_back(b, width);

  for (int k = 0; k <= 4; ++k) {
    const auto evidences = k == 0 ? std::vector<std::vector<EvidenceItem>>{{}}
                                  : [&] {
                                      std::vector<EvidenceItem> pool;
                                      for (int i = 0; i < 4; ++i) pool.push_back({i, all[static_cast<std::size_t>(i)]});
                                      return all_subsets(pool, k);
                                    }();
    for (const auto& items : evidences) {
      const auto e = distinct_q(items);
      for (int mask = 1; mask < 4; ++mask) {
        for (int vals = 0; vals < 4; ++vals) {
          if ((vals & ~mask) != 0) continue;
          std::vector<SlotConstraint> fixed;
          for (int s = 0; s < width; ++s) {
            if ((mask >> s) & 1) fixed.push_back({s, ((vals >> s) & 1) == 1});
          }
          const Hypothesis h(0, fixed, Action::kStop, width);
          const auto p = oracle::make_params(e, std::span<const Hypothesis>(&h, 1), width);
          const auto& term = p.terms.front();
          const auto oh = oracle::hypothesis_from_constraints(fixed, width);
          const std::vector<oracle::OracleHypothesis> phi{oh};

          const bool ok =
              oracle::evidence_probability(e, width) == oracle::closed_form_evidence_probability(p) &&
              oracle::joint_probability(oh, e, width) == oracle::closed_form_joint_probability(p, term) &&
              oracle::degree_of_confirmation(oh, e, width) == oracle::closed_form_confirmation(p, term) &&
              oracle::hypothesis_probability(oh, width) ==
                  oracle::closed_form_hypothesis_probability(width, h.z()) &&
              oracle::conditional_semantic_entropy(phi, e, width) == oracle::closed_form_objective(p) &&
              oracle::evidence_probability(e, width) ==
                  Rational(1) - pow2_neg(std::uint64_t{1} << (4 - k));
          ++checks;
          mismatches += !ok;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = mismatches == 0 && secs < 10.0;
  o.summary = "closed forms vs enumeration at T=2: " + std::to_string(checks) + " (evidence, hypothesis) cases, " +
              std::to_string(mismatches) + " mismatches, " + fmt("%.2f s", secs);
  o.details.push_back("every evidence set with K in 0..4 and every hypothesis with Z in {1,2}; "
                      "c(e), c(phi & e), c(phi | e), c(phi) and F compared as exact rationals");
  return o;
}

// --- 2 ---------------------------------------------------------------------

KeyValidationReport key_sweep(KeyOrder order, std::uint64_t& instances_out) {
  KeyValidationReport total;
  for (int width : {3, 4, 5}) {
    for (int n = 5; n <= 8; ++n) {
      for (int k = 1; k <= 3; ++k) {
        total.merge(validate_key_ordering(30, width, n, k,
                                          mix_seed({static_cast<std::uint64_t>(width),
                                                    static_cast<std::uint64_t>(n),
                                                    static_cast<std::uint64_t>(k)}),
                                          order));
      }
    }
  }
  instances_out = total.instances;
  return total;
}

std::string describe(const KeyValidationReport& r) {
  std::ostringstream os;
  os << r.instances << " instances, " << r.comparisons << " pairs, " << r.strict_pairs
     << " strictly ordered by F, disagreements " << r.disagreements << ", key ties with unequal F "
     << r.key_ties_unequal_f << ", rational/dyadic mismatches " << r.route_mismatches;
  return os.str();
}

Outcome key_ordering() {
  const auto t0 = Clock::now();
  std::uint64_t instances = 0;
  const auto tuple = key_sweep(KeyOrder::kTuple, instances);
  const double secs = seconds_since(t0);
  const double tie_rate = tuple.comparisons
                              ? static_cast<double>(tuple.key_ties_unequal_f) / static_cast<double>(tuple.comparisons)
                              : 0.0;
  Outcome o;
  o.pass = instances >= 1000 && tuple.disagreements == 0 && tie_rate < 0.01 &&
           tuple.route_mismatches == 0 && secs < 120.0;
  o.summary = "tuple key (n_nonoverlap, K, -H...) vs exact F, T in {3,4,5}, n 5..8, k 1..3: " +
              describe(tuple) + ", " + fmt("%.1f s", secs);
  if (tuple.strict_pairs) {
    o.details.push_back("disagreement rate " +
                        fmt("%.4f", static_cast<double>(tuple.disagreements) /
                                        static_cast<double>(tuple.strict_pairs)) +
                        " of strictly ordered pairs; key-tie rate " + fmt("%.4f", tie_rate));
  }
  std::uint64_t unused = 0;
  const auto objective = key_sweep(KeyOrder::kObjective, unused);
  o.details.push_back("info: same instances under the objective-derived order (F=0 first, then K, "
                      "then H list): " + describe(objective));
  return o;
}

// --- 3 ---------------------------------------------------------------------

Outcome overlap_semantics() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(303);
  const int cases = 10000;
  int failures = 0, enumerated = 0;
  for (int c = 0; c < cases; ++c) {
    const int width = 1 + static_cast<int>(rng() % 5);
    const auto inst = random_instance(rng, width, 1 + static_cast<int>(rng() % 6));
    const std::size_t target = rng() % inst.hypotheses.size();
    const Hypothesis& h = inst.hypotheses[target];
    // A Q-sentence that satisfies every fixed slot of h, the rest random.
    std::uint64_t bits = rng() & QSentence::mask_for(width);
    bits = (bits & ~h.mask()) | h.pattern();
    std::vector<EvidenceItem> evidence = inst.pool;
    evidence.insert(evidence.begin() + static_cast<std::ptrdiff_t>(rng() % (evidence.size() + 1)),
                    EvidenceItem{99, QSentence(bits, width)});

    const auto e = distinct_q(evidence);
    const auto p = oracle::make_params(e, inst.hypotheses, width);
    bool ok = p.terms[target].overlap &&
              oracle::closed_form_confirmation(p, p.terms[target]) == Rational(1);

    // Dropping the witnessed hypothesis leaves F unchanged.
    std::vector<Hypothesis> rest;
    for (std::size_t i = 0; i < inst.hypotheses.size(); ++i) {
      if (i != target) rest.push_back(inst.hypotheses[i]);
    }
    auto without = oracle::make_params(e, rest, width);
    ok = ok && oracle::compare_objective(p, without) == 0;
    if (width <= 4) ok = ok && oracle::closed_form_objective(p) == oracle::closed_form_objective(without);
    oracle::ClosedFormParams alone = p;
    alone.terms = {p.terms[target]};
    if (width <= 4) ok = ok && oracle::closed_form_objective(alone) == Rational(0);

    if (width <= oracle::kMaxEnumerationWidth) {
      ++enumerated;
      const auto oh = oracle::hypothesis_from_constraints(h.fixed_slots(), width);
      const std::vector<oracle::OracleHypothesis> phi{oh};
      ok = ok && oracle::degree_of_confirmation(oh, e, width) == Rational(1) &&
           oracle::conditional_semantic_entropy(phi, e, width) == Rational(0);
    }
    failures += !ok;
  }
  Outcome o;
  o.pass = failures == 0;
  o.summary = "overlap forces c(phi|e)=1 and a zero F term: " + std::to_string(cases) + " random cases (" +
              std::to_string(enumerated) + " also by enumeration), " + std::to_string(failures) +
              " failures, " + fmt("%.1f s", seconds_since(t0));
  return o;
}

// --- 4 ---------------------------------------------------------------------

Outcome mutual_information() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(404);
  const int width = 2, cases = 100;
  int failures = 0, nonzero = 0;
  for (int c = 0; c < cases; ++c) {
    std::vector<oracle::OracleHypothesis> phi;
    const int m = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < m; ++i) {
      std::vector<SlotConstraint> fixed;
      for (int s = 0; s < width; ++s) {
        if (rng() % 3 != 0) fixed.push_back({s, (rng() & 1) == 1});
      }
      phi.push_back(oracle::hypothesis_from_constraints(fixed, width));
    }
    std::vector<QSentence> e;
    for (std::uint64_t b = 0; b < 4; ++b) {
      if (rng() & 1) e.emplace_back(b, width);
    }
    const Rational direct = oracle::semantic_mutual_information(phi, e, width);
    const Rational identity =
        oracle::semantic_entropy(phi, width) - oracle::conditional_semantic_entropy(phi, e, width);
    failures += direct != identity;
    nonzero += direct != 0;
  }
  Outcome o;
  o.pass = failures == 0;
  o.summary = "I_s(Phi;e) = H_s(Phi) - H_s(Phi|e) at T=2: " + std::to_string(cases) + " random cases, " +
              std::to_string(failures) + " failures (" + std::to_string(nonzero) + " with non-zero I_s), " +
              fmt("%.1f s", seconds_since(t0));
  return o;
}

// --- 5 ---------------------------------------------------------------------

const SummaryRow* find(const std::vector<SummaryRow>& rows, ArchitectureKind a, const std::string& rs,
                       Strategy s, int k) {
  for (const auto& r : rows) {
    if (r.architecture == a && r.rule_set == rs && r.strategy == s && r.k == k) return &r;
  }
  return nullptr;
}

Outcome dominance() {
  const auto t0 = Clock::now();
  const SweepPlan plan = load_run_config(kData / "desk_sweep.json");
  const auto summary = summarize(sweep(plan));
  const double eps = 0.02;
  int cells = 0, violations = 0, exact_drops = 0;
  double worst = 1.0;
  Outcome o;
  for (auto a : kAllArchitectures) {
    for (const auto& rs : plan.rule_sets) {
      for (int k = 1; k <= 5; ++k) {
        const auto* sem = find(summary, a, rs.name, Strategy::kSemantic, k);
        const auto* rnd = find(summary, a, rs.name, Strategy::kRandom, k);
        if (!sem || !rnd) {
          ++violations;
          continue;
        }
        ++cells;
        const double d = sem->adsr_mean - rnd->adsr_mean;
        worst = std::min(worst, d);
        exact_drops += d < 0;
        if (d < -eps) ++violations;
      }
    }
  }
  int k1k3_fail = 0;
  for (const auto& rs : plan.rule_sets) {
    const auto* s1 = find(summary, ArchitectureKind::kSensorGna, rs.name, Strategy::kSemantic, 1);
    const auto* r3 = find(summary, ArchitectureKind::kSensorGna, rs.name, Strategy::kRandom, 3);
    const auto* base = find(summary, ArchitectureKind::kSensorGna, rs.name, Strategy::kRandom, 0);
    if (!s1 || !r3 || !base) {
      ++k1k3_fail;
      continue;
    }
    k1k3_fail += s1->adsr_mean < r3->adsr_mean;
    o.details.push_back("sensor-gna " + rs.name + ": k=0 " + fmt("%.4f", base->adsr_mean) +
                        ", semantic k=1 " + fmt("%.4f", s1->adsr_mean) + ", random k=3 " +
                        fmt("%.4f", r3->adsr_mean));
  }
  const double secs = seconds_since(t0);
  o.pass = violations == 0 && k1k3_fail == 0 && plan.seeds.size() >= 20 && secs < 600.0;
  o.summary = "semantic >= random A-DSR on the desk scenario, " + std::to_string(plan.seeds.size()) +
              " seeds: " + std::to_string(cells) + " (architecture, rule set, k) cells, " +
              std::to_string(violations) + " below -" + fmt("%.2f", eps) + " (" + std::to_string(exact_drops) +
              " below 0, worst difference " + fmt("%+.4f", worst) + "); semantic k=1 < random k=3 in " +
              std::to_string(k1k3_fail) + " rule sets; " + fmt("%.1f s", secs);
  return o;
}

// --- 6 ---------------------------------------------------------------------

Outcome correlation() {
  const auto t0 = Clock::now();
  const SweepPlan plan = load_run_config(kData / "correlation_sweep.json");
  const auto summary = summarize(sweep(plan));
  const auto points = advantage_points(summary, 3);
  const double r = advantage_correlation(summary, 3);
  Outcome o;
  o.pass = plan.scenarios.size() >= 8 && r < -0.3;
  o.summary = "correlation of k=0 A-DSR with the semantic advantage at k=3: r = " + fmt("%.3f", r) + " over " +
              std::to_string(points.size()) + " configurations (" + std::to_string(plan.scenarios.size()) +
              " density/FOV scenarios x " + std::to_string(plan.rule_sets.size()) + " rule sets), " +
              fmt("%.1f s", seconds_since(t0));
  return o;
}

// --- 7 ---------------------------------------------------------------------

Outcome full_coverage() {
  const auto t0 = Clock::now();
  const SweepPlan plan = load_run_config(kData / "desk_sweep.json");
  const Scenario& sc = plan.scenarios.front();
  const Grounder grounder(plan.vocabulary, sc.predicates);
  // Nobody can have more neighbours than there are other agents.
  const int k = sc.sim.cars + sc.sim.pedestrians - 1;
  const std::vector<Condition> conds{{{ArchitectureKind::kSensorGna, 2, 2, k}, Strategy::kSemantic},
                                     {{ArchitectureKind::kSensorGna, 2, 2, k}, Strategy::kRandom}};
  int episodes = 0, imperfect = 0;
  for (const auto& rs : plan.rule_sets) {
    for (auto seed : plan.seeds) {
      const EpisodeSetup setup{sc.sim, sc.obs, sc.steps, seed, plan.selection};
      for (const auto& tr : run_episode(setup, grounder, rs, conds)) {
        ++episodes;
        imperfect += hdsr(tr) != 1.0 || adsr(tr) != 1.0;
      }
    }
  }
  Outcome o;
  o.pass = imperfect == 0;
  o.summary = "sensor-gna with k=" + std::to_string(k) + " >= vicinity occupancy: " + std::to_string(episodes) +
              " episodes, " + std::to_string(imperfect) + " with H-DSR or A-DSR below 1, " +
              fmt("%.1f s", seconds_since(t0));
  return o;
}

// --- 8 ---------------------------------------------------------------------

std::string sweep_csv(SweepPlan plan, unsigned jobs) {
  plan.jobs = jobs;
  std::string text = csv_header() + "\n";
  for (const auto& r : summarize(sweep(plan))) text += csv_line(r) + "\n";
  return text;
}

Outcome determinism() {
  const auto t0 = Clock::now();
  const SweepPlan plan = load_run_config(kData / "desk_sweep.json");
  const std::string a = sweep_csv(plan, 1);
  const std::string b = sweep_csv(plan, 4);
  Outcome o;
  o.pass = a == b && a.size() > csv_header().size() + 1;
  o.summary = "two desk sweeps (1 and 4 worker threads) give " +
              std::string(a == b ? "byte-identical" : "different") + " CSVs (" + std::to_string(a.size()) +
              " bytes), " + fmt("%.1f s", seconds_since(t0));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{
      closed_form_agreement, key_ordering, overlap_semantics, mutual_information,
      dominance,             correlation,  full_coverage,     determinism};
  std::vector<int> which;
  if (argc > 1) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::cerr << "usage: acceptance [1-" << criteria.size() << "]\n";
      return 2;
    }
    which.push_back(n);
  } else {
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) which.push_back(i);
  }
  bool all = true;
  for (int n : which) {
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(n - 1)]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("error: ") + e.what();
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << o.summary << "\n";
    for (const auto& d : o.details) std::cout << "    " << d << "\n";
    std::cout.flush();
    all = all && o.pass;
  }
  return all ? 0 : 1;
}

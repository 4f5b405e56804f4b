#pragma once

// Episode runner and decision-success metrics. Every car is an ego. The world
// is driven by the full-information (FI) decisions; each communication
// condition is evaluated against the same trajectory, so conditions differ
// only in the evidence they hand the ego.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "semsel/comms.hpp"
#include "semsel/errors.hpp"
#include "semsel/observation.hpp"
#include "semsel/rules.hpp"
#include "semsel/world.hpp"

namespace semsel {

struct Condition {
  Architecture arch;  // arch.k is the budget
  Strategy strategy = Strategy::kSemantic;
};

struct TraceRecord {
  int step = 0;
  int agent = 0;
  std::vector<bool> fi_truth;
  Action fi_action = Action::kNormal;
  std::vector<bool> truth;
  Action action = Action::kNormal;
  std::vector<int> downlink_ids;
};

struct EpisodeTrace {
  Condition condition;
  std::vector<TraceRecord> records;
};

struct EpisodeSetup {
  SimConfig sim;
  ObservationConfig obs;
  int steps = 50;
  std::uint64_t seed = 0;
  SelectionOptions selection;
};

inline std::vector<EvidenceItem> merge_evidence(std::span<const EvidenceItem> a,
                                                std::span<const EvidenceItem> b) {
  std::vector<EvidenceItem> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Runs one episode and returns one trace per condition, in order.
inline std::vector<EpisodeTrace> run_episode(const EpisodeSetup& setup, const Grounder& grounder,
                                             const RuleSet& rules,
                                             std::span<const Condition> conditions) {
  setup.obs.validate();
  rules.validate();
  if (setup.steps < 1) throw ConfigError("an episode needs at least one step");
  for (const auto& h : rules.hypotheses) {
    if (h.width() != grounder.width()) {
      throw ConfigError("rule set width does not match the vocabulary");
    }
  }
  WorldState world = init_world(setup.sim, setup.seed);
  for (const auto& c : conditions) c.arch.validate(world.grid_size());

  std::vector<EpisodeTrace> traces;
  for (const auto& c : conditions) traces.push_back({c, {}});

  for (int t = 0; t < setup.steps; ++t) {
    std::vector<Action> actions(world.agents().size(), Action::kSlow);
    for (std::size_t ego = 0; ego < world.agents().size(); ++ego) {
      if (world.agent(ego).kind != AgentKind::kCar) continue;
      const Agent& e = world.agent(ego);
      const auto fov = observe_fov(world, ego, setup.obs, grounder);

      std::vector<EvidenceItem> fi = fov;
      for (int id : vicinity_entities(world, ego, setup.obs)) {
        const Agent& x = world.agent(static_cast<std::size_t>(id));
        if (world.distance(e.pos, x.pos) > setup.obs.r_fov) {
          fi.push_back({id, grounder.ground(world, e, x)});
        }
      }
      const auto fi_truth = evaluate_hypotheses(fi, rules);
      const Action fi_action = decide_action(fi_truth, rules);
      actions[ego] = fi_action;

      // Pools depend on the architecture only; semantic picks also ignore the seed.
      std::map<std::tuple<int, int, int>, std::vector<EvidenceItem>> pools;
      std::map<std::tuple<int, int, int, int>, std::vector<EvidenceItem>> semantic_picks;
      for (std::size_t ci = 0; ci < conditions.size(); ++ci) {
        const Condition& c = conditions[ci];
        const auto pool_key = std::make_tuple(static_cast<int>(c.arch.kind), c.arch.zones_x,
                                              c.arch.zones_y);
        auto pit = pools.find(pool_key);
        if (pit == pools.end()) {
          pit = pools.emplace(pool_key, build_pool(world, ego, c.arch, setup.obs, grounder)).first;
        }
        std::vector<EvidenceItem> dl;
        if (c.strategy == Strategy::kSemantic && c.arch.k > 0) {
          const auto sk = std::tuple_cat(pool_key, std::make_tuple(c.arch.k));
          auto sit = semantic_picks.find(sk);
          if (sit == semantic_picks.end()) {
            sit = semantic_picks
                      .emplace(sk, downlink(pit->second, rules.hypotheses, c.arch.k,
                                            Strategy::kSemantic, 0, setup.selection))
                      .first;
          }
          dl = sit->second;
        } else {
          const std::uint64_t s =
              mix_seed({setup.seed, static_cast<std::uint64_t>(t),
                        static_cast<std::uint64_t>(e.id), static_cast<std::uint64_t>(c.arch.kind),
                        static_cast<std::uint64_t>(c.arch.k)});
          dl = downlink(pit->second, rules.hypotheses, c.arch.k, c.strategy, s, setup.selection);
        }
        const auto evidence = merge_evidence(fov, dl);
        TraceRecord r;
        r.step = t;
        r.agent = e.id;
        r.fi_truth = fi_truth;
        r.fi_action = fi_action;
        r.truth = evaluate_hypotheses(evidence, rules);
        r.action = decide_action(r.truth, rules);
        for (const auto& d : dl) r.downlink_ids.push_back(d.entity_id);
        traces[ci].records.push_back(std::move(r));
      }
    }
    world = step(world, actions);
  }
  return traces;
}

inline double hdsr(const EpisodeTrace& trace) {
  std::uint64_t match = 0, total = 0;
  for (const auto& r : trace.records) {
    for (std::size_t i = 0; i < r.truth.size(); ++i) {
      match += r.truth[i] == r.fi_truth[i];
      ++total;
    }
  }
  if (total == 0) throw UndefinedMetricError("H-DSR of a trace with no hypothesis evaluations");
  return static_cast<double>(match) / static_cast<double>(total);
}

inline double adsr(const EpisodeTrace& trace) {
  if (trace.records.empty()) throw UndefinedMetricError("A-DSR of an empty trace");
  std::uint64_t match = 0;
  for (const auto& r : trace.records) match += r.action == r.fi_action;
  return static_cast<double>(match) / static_cast<double>(trace.records.size());
}

// One (architecture, rule set, strategy, k, seed) measurement.
struct MetricsRow {
  std::string scenario;
  ArchitectureKind architecture = ArchitectureKind::kSensorGna;
  std::string rule_set;
  Strategy strategy = Strategy::kSemantic;
  int k = 0;
  std::uint64_t seed = 0;
  double hdsr = 0;
  double adsr = 0;
};

// Seed-averaged cell, one CSV line.
struct SummaryRow {
  std::string scenario;
  ArchitectureKind architecture = ArchitectureKind::kSensorGna;
  std::string rule_set;
  Strategy strategy = Strategy::kSemantic;
  int k = 0;
  int seeds = 0;
  double hdsr_mean = 0, hdsr_std = 0;
  double adsr_mean = 0, adsr_std = 0;
};

struct Scenario {
  std::string name;
  SimConfig sim;
  ObservationConfig obs;
  PredicateParams predicates;
  int steps = 50;
};

struct SweepPlan {
  std::vector<Scenario> scenarios;
  PredicateVocabulary vocabulary;
  std::vector<RuleSet> rule_sets;
  std::vector<Architecture> architectures;  // k ignored
  std::vector<Strategy> strategies{Strategy::kSemantic, Strategy::kRandom};
  std::vector<int> ks{0, 1, 2, 3, 4, 5};
  std::vector<std::uint64_t> seeds;
  SelectionOptions selection;
  unsigned jobs = 0;  // 0: hardware concurrency
};

inline std::vector<Condition> expand_conditions(const SweepPlan& plan) {
  std::vector<Condition> out;
  for (const auto& a : plan.architectures) {
    for (int k : plan.ks) {
      if (k < 0) throw ConfigError("k values must be non-negative");
      if (k == 0) {
        // No downlink: one condition serves every strategy.
        Architecture arch = a;
        arch.k = 0;
        out.push_back({arch, Strategy::kRandom});
        continue;
      }
      for (Strategy s : plan.strategies) {
        Architecture arch = a;
        arch.k = k;
        out.push_back({arch, s});
      }
    }
  }
  return out;
}

// Per-seed rows for every (scenario, rule set, seed, architecture, strategy, k).
// Jobs are (scenario, rule set, seed) episodes; the result order is fixed by
// the plan, not by scheduling.
inline std::vector<MetricsRow> sweep(const SweepPlan& plan) {
  if (plan.scenarios.empty() || plan.rule_sets.empty() || plan.architectures.empty() ||
      plan.seeds.empty() || plan.strategies.empty()) {
    throw ConfigError("sweep needs scenarios, rule sets, architectures, strategies and seeds");
  }
  const auto conditions = expand_conditions(plan);
  struct Job {
    std::size_t scenario, rule_set;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < plan.scenarios.size(); ++s) {
    for (std::size_t r = 0; r < plan.rule_sets.size(); ++r) {
      for (auto seed : plan.seeds) jobs.push_back({s, r, seed});
    }
  }
  std::vector<Grounder> grounders;
  for (const auto& sc : plan.scenarios) grounders.emplace_back(plan.vocabulary, sc.predicates);

  std::vector<std::vector<MetricsRow>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  auto run = [&](std::size_t j) {
    try {
      const Job& job = jobs[j];
      const Scenario& sc = plan.scenarios[job.scenario];
      const RuleSet& rules = plan.rule_sets[job.rule_set];
      EpisodeSetup setup{sc.sim, sc.obs, sc.steps, job.seed, plan.selection};
      const auto traces = run_episode(setup, grounders[job.scenario], rules, conditions);
      for (const auto& tr : traces) {
        const double h = hdsr(tr), a = adsr(tr);
        const auto& c = tr.condition;
        if (c.arch.k == 0) {
          for (Strategy s : plan.strategies) {
            results[j].push_back({sc.name, c.arch.kind, rules.name, s, 0, job.seed, h, a});
          }
        } else {
          results[j].push_back(
              {sc.name, c.arch.kind, rules.name, c.strategy, c.arch.k, job.seed, h, a});
        }
      }
    } catch (...) {
      errors[j] = std::current_exception();
    }
  };

  unsigned workers = plan.jobs ? plan.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs.size()));
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) run(j);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<MetricsRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

namespace detail {

inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
  double m = 0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {m, 0.0};
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

}  // namespace detail

// Averages per-seed rows into cells, keeping first-appearance order.
inline std::vector<SummaryRow> summarize(std::span<const MetricsRow> rows) {
  using Key = std::tuple<std::string, int, std::string, int, int>;
  std::vector<Key> order;
  std::map<Key, std::pair<std::vector<double>, std::vector<double>>> cells;
  for (const auto& r : rows) {
    Key key{r.scenario, static_cast<int>(r.architecture), r.rule_set,
            static_cast<int>(r.strategy), r.k};
    auto [it, inserted] = cells.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.first.push_back(r.hdsr);
    it->second.second.push_back(r.adsr);
  }
  std::vector<SummaryRow> out;
  for (const auto& key : order) {
    const auto& [h, a] = cells.at(key);
    SummaryRow s;
    s.scenario = std::get<0>(key);
    s.architecture = static_cast<ArchitectureKind>(std::get<1>(key));
    s.rule_set = std::get<2>(key);
    s.strategy = static_cast<Strategy>(std::get<3>(key));
    s.k = std::get<4>(key);
    s.seeds = static_cast<int>(h.size());
    std::tie(s.hdsr_mean, s.hdsr_std) = detail::mean_std(h);
    std::tie(s.adsr_mean, s.adsr_std) = detail::mean_std(a);
    out.push_back(s);
  }
  return out;
}

inline std::string csv_header() {
  return "architecture,rule_set,strategy,k,seeds,hdsr_mean,hdsr_std,adsr_mean,adsr_std";
}

inline std::string csv_line(const SummaryRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%s,%s,%d,%d,%.6f,%.6f,%.6f,%.6f",
                std::string(to_string(r.architecture)).c_str(), r.rule_set.c_str(),
                std::string(to_string(r.strategy)).c_str(), r.k, r.seeds, r.hdsr_mean, r.hdsr_std,
                r.adsr_mean, r.adsr_std);
  return buf;
}

struct AdvantagePoint {
  std::string scenario;
  ArchitectureKind architecture;
  std::string rule_set;
  double baseline_adsr;  // k = 0
  double advantage;      // semantic - random at k
};

// One point per (scenario, architecture, rule set) that has k = 0 and both
// strategies at budget k.
inline std::vector<AdvantagePoint> advantage_points(std::span<const SummaryRow> rows, int k) {
  using Key = std::tuple<std::string, int, std::string>;
  std::vector<Key> order;
  std::map<Key, std::tuple<std::optional<double>, std::optional<double>, std::optional<double>>>
      acc;
  for (const auto& r : rows) {
    Key key{r.scenario, static_cast<int>(r.architecture), r.rule_set};
    auto [it, inserted] = acc.try_emplace(key);
    if (inserted) order.push_back(key);
    auto& [base, sem, rnd] = it->second;
    if (r.k == 0) base = r.adsr_mean;
    if (r.k == k && r.strategy == Strategy::kSemantic) sem = r.adsr_mean;
    if (r.k == k && r.strategy == Strategy::kRandom) rnd = r.adsr_mean;
  }
  std::vector<AdvantagePoint> out;
  for (const auto& key : order) {
    const auto& [base, sem, rnd] = acc.at(key);
    if (!base || !sem || !rnd) continue;
    out.push_back({std::get<0>(key), static_cast<ArchitectureKind>(std::get<1>(key)),
                   std::get<2>(key), *base, *sem - *rnd});
  }
  return out;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw UndefinedMetricError("correlation needs at least 3 paired values");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) throw UndefinedMetricError("correlation of a constant series");
  return sxy / std::sqrt(sxx * syy);
}

// Pearson correlation between baseline A-DSR and the semantic advantage at k,
// across configurations.
inline double advantage_correlation(std::span<const SummaryRow> rows, int k) {
  const auto pts = advantage_points(rows, k);
  if (pts.size() < 3) throw UndefinedMetricError("correlation needs at least 3 configurations");
  std::vector<double> x, y;
  for (const auto& p : pts) {
    x.push_back(p.baseline_adsr);
    y.push_back(p.advantage);
  }
  return pearson(x, y);
}

}  // namespace semsel

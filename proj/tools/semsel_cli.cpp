// semsel: oracle tables, single runs, sweeps and key-order validation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "semsel/config.hpp"
#include "semsel/metrics.hpp"
#include "semsel/oracle.hpp"
#include "semsel/validate.hpp"

namespace fs = std::filesystem;
using namespace semsel;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Relative output paths land under $SEMSEL_OUT_DIR when it is set.
fs::path resolve_out(const std::string& out) {
  fs::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("SEMSEL_OUT_DIR"); dir && *dir) p = fs::path(dir) / p;
  }
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
  int width = 2;
  std::vector<int> ks;
  std::vector<int> zs{1};
  std::string out;
};

std::string unreduced_confirmation(const oracle::ClosedFormParams& p,
                                   const oracle::HypothesisTerm& t) {
  if (t.overlap) return "1/1";
  const std::uint64_t a = p.alpha(), g = p.gamma(t);
  const Integer num = pow2(a) - pow2(a - g);
  const Integer den = pow2(a) - 1;
  return num.str() + "/" + den.str();
}

int cmd_oracle(const OracleArgs& args) {
  const int width = args.width;
  if (width < 1 || width > oracle::kMaxClosedFormWidth) {
    throw FeasibilityError("oracle tables are available for 1 <= T <= 5");
  }
  const int q = 1 << width;
  std::vector<int> ks = args.ks;
  if (ks.empty()) {
    for (int k = 0; k <= q; ++k) ks.push_back(k);
  }
  std::ostringstream os;
  os << "T,K,Z,overlap,route,c_e,c_phi_given_e,c_phi_given_e_unreduced,F\n";
  bool ok = true;
  for (int z : args.zs) {
    if (z < 1 || z > width) throw ConfigError("Z must lie in [1, T]");
    std::vector<SlotConstraint> fixed;
    for (int s = 0; s < z; ++s) fixed.push_back({s, true});
    const Hypothesis h(0, fixed, Action::kStop, width);
    // Q-sentences the hypothesis rejects come first, so small K avoids overlap.
    std::vector<QSentence> order;
    for (int pass = 0; pass < 2; ++pass) {
      for (int b = 0; b < q; ++b) {
        QSentence s(static_cast<std::uint64_t>(b), width);
        if (hypothesis_satisfied_by(s, h) == (pass == 1)) order.push_back(s);
      }
    }
    for (int k : ks) {
      if (k < 0 || k > q) throw ConfigError("K must lie in [0, 2^T]");
      std::vector<QSentence> ev(order.begin(), order.begin() + k);
      std::sort(ev.begin(), ev.end());
      const auto p = oracle::make_params(ev, std::span<const Hypothesis>(&h, 1), width);
      const auto& term = p.terms.front();
      const Rational ce = oracle::closed_form_evidence_probability(p);
      const Rational cc = oracle::closed_form_confirmation(p, term);
      const Rational f = oracle::closed_form_objective(p);
      const std::string unreduced = unreduced_confirmation(p, term);
      os << width << ',' << k << ',' << z << ',' << term.overlap << ",closed-form,"
         << to_string(ce) << ',' << to_string(cc) << ',' << unreduced << ',' << to_string(f)
         << '\n';
      if (width <= oracle::kMaxEnumerationWidth) {
        const auto oh = oracle::hypothesis_from_constraints(h.fixed_slots(), width);
        const Rational ee = oracle::evidence_probability(ev, width);
        const Rational ec = oracle::degree_of_confirmation(oh, ev, width);
        const Rational ef = oracle::conditional_semantic_entropy(
            std::span<const oracle::OracleHypothesis>(&oh, 1), ev, width);
        os << width << ',' << k << ',' << z << ',' << term.overlap << ",enumeration,"
           << to_string(ee) << ',' << to_string(ec) << ',' << unreduced << ',' << to_string(ef)
           << '\n';
        if (ee != ce || ec != cc || ef != f) {
          std::cerr << "mismatch between routes at T=" << width << " K=" << k << " Z=" << z
                    << '\n';
          ok = false;
        }
      }
    }
  }
  if (args.out.empty()) {
    std::cout << os.str();
  } else {
    write_text(resolve_out(args.out), os.str());
  }
  return ok ? 0 : kExitValidation;
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string config;
  std::string seeds;
  std::string out;
  std::string trace;
  unsigned jobs = 0;
};

std::string bits(const std::vector<bool>& v) {
  std::string s;
  for (bool b : v) s += b ? '1' : '0';
  return s;
}

int cmd_run(const RunArgs& args) {
  SweepPlan plan = load_run_config(args.config);
  if (!args.seeds.empty()) plan.seeds = parse_seed_list(args.seeds);
  if (plan.seeds.empty()) throw ConfigError("no seeds given");
  const auto conditions = expand_conditions(plan);

  std::ostringstream csv;
  csv << "scenario,architecture,rule_set,strategy,k,seed,hdsr,adsr\n";
  std::ofstream trace;
  if (!args.trace.empty()) {
    trace.open(resolve_out(args.trace), std::ios::binary);
    if (!trace) throw ConfigError("cannot write trace file");
  }
  for (const auto& sc : plan.scenarios) {
    const Grounder grounder(plan.vocabulary, sc.predicates);
    for (const auto& rules : plan.rule_sets) {
      for (auto seed : plan.seeds) {
        const EpisodeSetup setup{sc.sim, sc.obs, sc.steps, seed, plan.selection};
        const auto traces = run_episode(setup, grounder, rules, conditions);
        for (const auto& tr : traces) {
          const auto& c = tr.condition;
          const std::string strategy =
              c.arch.k == 0 ? "none" : std::string(to_string(c.strategy));
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.6f,%.6f", hdsr(tr), adsr(tr));
          csv << sc.name << ',' << to_string(c.arch.kind) << ',' << rules.name << ','
              << strategy << ',' << c.arch.k << ',' << seed << ',' << buf << '\n';
          if (!trace.is_open()) continue;
          for (const auto& r : tr.records) {
            nlohmann::ordered_json j;
            j["scenario"] = sc.name;
            j["rule_set"] = rules.name;
            j["seed"] = seed;
            j["architecture"] = to_string(c.arch.kind);
            j["strategy"] = strategy;
            j["k"] = c.arch.k;
            j["step"] = r.step;
            j["agent"] = r.agent;
            j["fi_truth"] = bits(r.fi_truth);
            j["fi_action"] = to_string(r.fi_action);
            j["truth"] = bits(r.truth);
            j["action"] = to_string(r.action);
            j["evidence_ids"] = r.downlink_ids;
            trace << j.dump() << '\n';
          }
        }
      }
    }
  }
  if (args.out.empty()) {
    std::cout << csv.str();
  } else {
    write_text(resolve_out(args.out), csv.str());
  }
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string config;
  std::string seeds;
  std::string out = "sweep.csv";
  unsigned jobs = 0;
  int correlation_k = 3;
};

int cmd_sweep(const SweepArgs& args) {
  SweepPlan plan = load_run_config(args.config);
  if (!args.seeds.empty()) plan.seeds = parse_seed_list(args.seeds);
  plan.jobs = args.jobs;
  const auto rows = sweep(plan);
  const auto summary = summarize(rows);

  const fs::path out = resolve_out(args.out);
  const bool single = plan.scenarios.size() == 1;
  fs::path summary_path;
  if (single) {
    std::string text = csv_header() + "\n";
    for (const auto& r : summary) text += csv_line(r) + "\n";
    write_text(out, text);
    std::cout << "wrote " << out.string() << " (" << summary.size() << " rows)\n";
    summary_path = out;
    summary_path.replace_extension(".summary.json");
  } else {
    // One CSV per scenario inside the output directory.
    fs::create_directories(out);
    for (const auto& sc : plan.scenarios) {
      std::string text = csv_header() + "\n";
      std::size_t n = 0;
      for (const auto& r : summary) {
        if (r.scenario != sc.name) continue;
        text += csv_line(r) + "\n";
        ++n;
      }
      write_text(out / (sc.name + ".csv"), text);
      std::cout << "wrote " << (out / (sc.name + ".csv")).string() << " (" << n << " rows)\n";
    }
    summary_path = out / "summary.json";
  }

  nlohmann::ordered_json j;
  j["k"] = args.correlation_k;
  const auto points = advantage_points(summary, args.correlation_k);
  j["configurations"] = points.size();
  try {
    const double r = advantage_correlation(summary, args.correlation_k);
    j["advantage_correlation"] = r;
    std::cout << "advantage_correlation(k=" << args.correlation_k << ", n=" << points.size()
              << ") = " << r << '\n';
  } catch (const UndefinedMetricError& e) {
    j["advantage_correlation"] = nullptr;
    j["note"] = e.what();
    std::cout << "advantage_correlation undefined: " << e.what() << '\n';
  }
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    pts.push_back({{"scenario", p.scenario},
                   {"architecture", to_string(p.architecture)},
                   {"rule_set", p.rule_set},
                   {"baseline_adsr", p.baseline_adsr},
                   {"advantage", p.advantage}});
  }
  write_text(summary_path, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------- validate-key

struct ValidateArgs {
  std::uint64_t trials = 1000;
  int width = 4;
  int n = 7;
  int k = 2;
  std::uint64_t seed = 1;
  std::string order = "tuple";
};

int cmd_validate_key(const ValidateArgs& args) {
  const auto order = parse_key_order(args.order);
  const auto r = validate_key_ordering(args.trials, args.width, args.n, args.k, args.seed, order);
  std::cout << "order: " << to_string(order) << '\n'
            << "instances: " << r.instances << '\n'
            << "comparisons: " << r.comparisons << '\n'
            << "strictly ordered by F: " << r.strict_pairs << '\n'
            << "agreements: " << r.agreements << '\n'
            << "disagreements: " << r.disagreements << '\n'
            << "key ties with unequal F: " << r.key_ties_unequal_f << '\n'
            << "F ties with unequal keys: " << r.f_ties_unequal_key << '\n'
            << "ties: " << r.full_ties << '\n'
            << "rational/dyadic mismatches: " << r.route_mismatches << '\n';
  return r.disagreements == 0 && r.route_mismatches == 0 ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goal-oriented evidence selection: exact oracle, selection and traffic simulation"};
  app.require_subcommand(1);

  OracleArgs oa;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact c(e), c(phi|e) and F for tiny T as CSV");
  oracle_cmd->add_option("--T", oa.width, "number of predicate slots (1-5)");
  oracle_cmd->add_option("--K", oa.ks, "distinct observed Q-sentences (default: all)");
  oracle_cmd->add_option("--Z", oa.zs, "fixed slots of the hypothesis");
  oracle_cmd->add_option("--out", oa.out, "CSV path (default: stdout)");

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Run episodes and print per-seed metrics");
  run_cmd->add_option("--config", ra.config, "run config (JSON)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seeds", ra.seeds, "seed list, e.g. 1,2,5-9 (overrides config)");
  run_cmd->add_option("--out", ra.out, "per-seed CSV path (default: stdout)");
  run_cmd->add_option("--trace", ra.trace, "JSONL trace path");
  run_cmd->add_option("--jobs", ra.jobs, "accepted for symmetry; runs are sequential");

  SweepArgs sa;
  auto* sweep_cmd = app.add_subcommand("sweep", "Seed-averaged sweep to CSV plus correlation summary");
  sweep_cmd->add_option("--config", sa.config, "run config (JSON)")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--seeds", sa.seeds, "seed list (overrides config)");
  sweep_cmd->add_option("--out", sa.out, "CSV path, or a directory when the config has several scenarios");
  sweep_cmd->add_option("--jobs", sa.jobs, "worker threads (default: all cores)");
  sweep_cmd->add_option("--correlation-k", sa.correlation_k, "budget for the advantage correlation");

  ValidateArgs va;
  auto* vk_cmd = app.add_subcommand("validate-key", "Compare a key order with the exact objective");
  vk_cmd->add_option("--trials", va.trials, "random instances");
  vk_cmd->add_option("--T", va.width, "predicate slots (1-5)");
  vk_cmd->add_option("--n", va.n, "pool size");
  vk_cmd->add_option("--k", va.k, "budget");
  vk_cmd->add_option("--seed", va.seed, "RNG seed");
  vk_cmd->add_option("--order", va.order, "tuple | objective");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*oracle_cmd) return cmd_oracle(oa);
    if (*run_cmd) return cmd_run(ra);
    if (*sweep_cmd) return cmd_sweep(sa);
    if (*vk_cmd) return cmd_validate_key(va);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

#pragma once

// Communication architectures. Each builds, for one ego, the pool of evidence
// the assistant could send (entities the ego cannot already see), and the
// downlink picks at most k items from it.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semsel/errors.hpp"
#include "semsel/logic.hpp"
#include "semsel/observation.hpp"
#include "semsel/selection.hpp"
#include "semsel/world.hpp"

namespace semsel {

enum class ArchitectureKind { kSensorGna, kSingleZoneGna, kMultiZoneLna };

inline constexpr ArchitectureKind kAllArchitectures[] = {
    ArchitectureKind::kSensorGna, ArchitectureKind::kSingleZoneGna,
    ArchitectureKind::kMultiZoneLna};

inline std::string_view to_string(ArchitectureKind k) {
  switch (k) {
    case ArchitectureKind::kSensorGna: return "sensor-gna";
    case ArchitectureKind::kSingleZoneGna: return "single-zone-gna";
    case ArchitectureKind::kMultiZoneLna: return "multi-zone-lna";
  }
  return "?";
}

inline ArchitectureKind parse_architecture(std::string_view s) {
  for (auto k : kAllArchitectures) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown architecture '" + std::string(s) + "'");
}

enum class Strategy { kSemantic, kRandom };

inline std::string_view to_string(Strategy s) {
  return s == Strategy::kSemantic ? "semantic" : "random";
}

inline Strategy parse_strategy(std::string_view s) {
  if (s == "semantic") return Strategy::kSemantic;
  if (s == "random") return Strategy::kRandom;
  throw ConfigError("unknown strategy '" + std::string(s) + "'");
}

struct Architecture {
  ArchitectureKind kind = ArchitectureKind::kSensorGna;
  int zones_x = 2;  // multi-zone only: zone columns
  int zones_y = 2;  // multi-zone only: zone rows
  int k = 1;

  void validate(int grid_size) const {
    if (k < 0) throw ConfigError("downlink budget k must be non-negative");
    if (kind == ArchitectureKind::kMultiZoneLna) {
      if (zones_x < 1 || zones_y < 1 || zones_x > grid_size || zones_y > grid_size) {
        throw ConfigError("zone grid must be between 1x1 and the cell grid");
      }
    }
  }

  // Zone index of a cell. Zone boundaries are floor(i * N / zones), so the
  // zones are half-open rectangles that tile the grid.
  int zone_of(const Cell& c, int grid_size) const {
    const int zx = static_cast<int>(static_cast<long long>(c.x) * zones_x / grid_size);
    const int zy = static_cast<int>(static_cast<long long>(c.y) * zones_y / grid_size);
    return zy * zones_x + zx;
  }
};

// Entity ids the assistant knows about for `ego`, before grounding.
inline std::vector<int> pool_entities(const WorldState& w, std::size_t ego,
                                      const Architecture& arch, const ObservationConfig& obs) {
  const Agent& e = w.agent(ego);
  const int n = static_cast<int>(w.agents().size());
  auto relevant = [&](int id) {
    if (id == e.id) return false;
    const int d = w.distance(e.pos, w.agent(static_cast<std::size_t>(id)).pos);
    return d <= obs.r_vic && d > obs.r_fov;
  };

  std::vector<bool> known(static_cast<std::size_t>(n), false);
  if (arch.kind == ArchitectureKind::kSensorGna) {
    for (int id = 0; id < n; ++id) known[static_cast<std::size_t>(id)] = true;
  } else {
    const int ego_zone = arch.zone_of(e.pos, w.grid_size());
    for (std::size_t v = 0; v < w.agents().size(); ++v) {
      const Agent& up = w.agents()[v];
      if (up.kind != AgentKind::kCar) continue;  // only vehicles upload
      if (arch.kind == ArchitectureKind::kMultiZoneLna &&
          arch.zone_of(up.pos, w.grid_size()) != ego_zone) {
        continue;
      }
      for (int id : agents_within(w, v, obs.r_fov)) known[static_cast<std::size_t>(id)] = true;
    }
  }
  std::vector<int> out;
  for (int id = 0; id < n; ++id) {
    if (known[static_cast<std::size_t>(id)] && relevant(id)) out.push_back(id);
  }
  return out;
}

inline std::vector<EvidenceItem> build_pool(const WorldState& w, std::size_t ego,
                                            const Architecture& arch,
                                            const ObservationConfig& obs,
                                            const Grounder& grounder) {
  std::vector<EvidenceItem> out;
  for (int id : pool_entities(w, ego, arch, obs)) {
    out.push_back({id, grounder.ground(w, w.agent(ego), w.agent(static_cast<std::size_t>(id)))});
  }
  return out;
}

inline std::vector<EvidenceItem> downlink(std::span<const EvidenceItem> pool,
                                          std::span<const Hypothesis> hypotheses, int k,
                                          Strategy strategy, std::uint64_t rng_seed,
                                          const SelectionOptions& options = {}) {
  if (k < 0) throw ConfigError("downlink budget k must be non-negative");
  if (k == 0 || pool.empty()) return {};
  if (strategy == Strategy::kSemantic) return select_semantic(pool, hypotheses, k, options);
  return select_random(pool, k, rng_seed);
}

// SplitMix64 finaliser, used to derive independent per-call seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0;
  for (auto p : parts) h = mix_seed(h ^ p);
  return h;
}

}  // namespace semsel

#pragma once

// Grid-world traffic on a torus. Roads run along every row and column whose
// index is a multiple of `block`; their crossings are the intersections. When
// the grid size is not a multiple of `block` the last and first roads sit
// closer together across the seam.
// Agents follow the road they are on and consume one turn from their route
// at every crossing they enter.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semsel/errors.hpp"
#include "semsel/logic.hpp"

namespace semsel {

enum class AgentKind { kCar, kPedestrian };
enum class Heading { kNorth, kEast, kSouth, kWest };
enum class Turn { kLeft, kStraight, kRight };

inline std::string_view to_string(AgentKind k) {
  return k == AgentKind::kCar ? "car" : "pedestrian";
}

struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline Cell heading_delta(Heading h) {
  switch (h) {
    case Heading::kNorth: return {0, -1};
    case Heading::kEast: return {1, 0};
    case Heading::kSouth: return {0, 1};
    case Heading::kWest: return {-1, 0};
  }
  return {0, 0};
}

inline Heading apply_turn(Heading h, Turn t) {
  const int i = static_cast<int>(h);
  switch (t) {
    case Turn::kLeft: return static_cast<Heading>((i + 3) % 4);
    case Turn::kRight: return static_cast<Heading>((i + 1) % 4);
    case Turn::kStraight: return h;
  }
  return h;
}

// Cells advanced per step.
inline int speed_of(Action a) {
  switch (a) {
    case Action::kStop: return 0;
    case Action::kSlow: return 1;
    case Action::kNormal: return 2;
    case Action::kFast: return 3;
  }
  return 0;
}

struct Agent {
  int id = 0;
  AgentKind kind = AgentKind::kCar;
  Cell pos;
  Heading heading = Heading::kEast;
  std::vector<Turn> route;
  std::size_t route_cursor = 0;
  int last_speed = 2;

  friend bool operator==(const Agent&, const Agent&) = default;
};

struct SimConfig {
  int grid_size = 60;
  int block = 10;
  int cars = 10;
  int pedestrians = 4;
  int route_length = 8;

  void validate() const {
    if (grid_size < 2) throw ConfigError("grid_size must be at least 2");
    if (block < 3 || block > grid_size) throw ConfigError("block must be in [3, grid_size]");
    if (cars < 0 || pedestrians < 0) throw ConfigError("agent counts must be non-negative");
    if (route_length < 1) throw ConfigError("route_length must be positive");
  }
};

struct ObservationConfig {
  int r_fov = 5;
  int r_vic = 15;

  void validate() const {
    if (r_fov <= 0 || r_fov > r_vic) throw ConfigError("need 0 < r_fov <= r_vic");
  }
};

class WorldState {
 public:
  WorldState(int grid_size, int block, std::vector<Agent> agents, int step = 0)
      : grid_size_(grid_size), block_(block), agents_(std::move(agents)), step_(step) {
    // Agent ids double as indices.
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      if (agents_[i].id != static_cast<int>(i)) throw ConfigError("agent ids must be 0..n-1 in order");
      const Cell& c = agents_[i].pos;
      if (c.x < 0 || c.y < 0 || c.x >= grid_size_ || c.y >= grid_size_) {
        throw ConfigError("agent " + std::to_string(i) + " is off the grid");
      }
    }
  }

  int grid_size() const { return grid_size_; }
  int block() const { return block_; }
  int step() const { return step_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const Agent& agent(std::size_t index) const { return agents_.at(index); }

  int wrap(int v) const {
    v %= grid_size_;
    return v < 0 ? v + grid_size_ : v;
  }

  // Shortest signed displacement from a to b along one axis.
  int signed_offset(int a, int b) const {
    int d = wrap(b - a);
    if (d > grid_size_ / 2) d -= grid_size_;
    return d;
  }

  int distance(const Cell& a, const Cell& b) const {
    return std::max(std::abs(signed_offset(a.x, b.x)), std::abs(signed_offset(a.y, b.y)));
  }

  bool is_road(const Cell& c) const { return c.x % block_ == 0 || c.y % block_ == 0; }
  bool is_crossing(const Cell& c) const { return c.x % block_ == 0 && c.y % block_ == 0; }

  // Cells within Chebyshev distance 1 of a crossing.
  bool in_intersection(const Cell& c) const {
    auto near0 = [&](int v) {
      const int m = v % block_;
      return m == 0 || m == 1 || m == block_ - 1;
    };
    return near0(c.x) && near0(c.y);
  }

  std::vector<Cell> crossings() const {
    std::vector<Cell> out;
    for (int y = 0; y < grid_size_; y += block_) {
      for (int x = 0; x < grid_size_; x += block_) out.push_back({x, y});
    }
    return out;
  }

  // The crossing an agent reaches next along its heading; its own cell when
  // it stands on one.
  Cell next_crossing(const Agent& a) const {
    const Cell d = heading_delta(a.heading);
    Cell c = a.pos;
    for (int i = 0; i < block_; ++i) {
      if (is_crossing(c)) return c;
      c = {wrap(c.x + d.x), wrap(c.y + d.y)};
    }
    return c;
  }

  // Offset of `target` in `a`'s frame: forward distance along the heading and
  // absolute lateral distance.
  std::pair<int, int> frame_offset(const Agent& a, const Cell& target) const {
    const int dx = signed_offset(a.pos.x, target.x);
    const int dy = signed_offset(a.pos.y, target.y);
    switch (a.heading) {
      case Heading::kEast: return {dx, std::abs(dy)};
      case Heading::kWest: return {-dx, std::abs(dy)};
      case Heading::kSouth: return {dy, std::abs(dx)};
      case Heading::kNorth: return {-dy, std::abs(dx)};
    }
    return {0, 0};
  }

  friend bool operator==(const WorldState&, const WorldState&) = default;

 private:
  int grid_size_;
  int block_;
  std::vector<Agent> agents_;
  int step_;
};

inline WorldState init_world(const SimConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const int n = cfg.grid_size;
  // Road cells that are not crossings, each with the axis it runs along.
  std::vector<std::pair<Cell, bool>> slots;  // bool: horizontal road
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const bool h = y % cfg.block == 0, v = x % cfg.block == 0;
      if (h != v) slots.push_back({{x, y}, h});
    }
  }
  const int total = cfg.cars + cfg.pedestrians;
  if (total > static_cast<int>(slots.size())) {
    throw ConfigError(std::to_string(total) + " agents do not fit on " +
                      std::to_string(slots.size()) + " road cells");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(slots.begin(), slots.end(), rng);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> turn(0, 2);

  std::vector<Agent> agents;
  agents.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    Agent a;
    a.id = i;
    a.kind = i < cfg.cars ? AgentKind::kCar : AgentKind::kPedestrian;
    a.pos = slots[static_cast<std::size_t>(i)].first;
    const bool horizontal = slots[static_cast<std::size_t>(i)].second;
    const bool forward = coin(rng) == 1;
    a.heading = horizontal ? (forward ? Heading::kEast : Heading::kWest)
                           : (forward ? Heading::kSouth : Heading::kNorth);
    for (int r = 0; r < cfg.route_length; ++r) a.route.push_back(static_cast<Turn>(turn(rng)));
    a.last_speed = a.kind == AgentKind::kCar ? speed_of(Action::kNormal)
                                             : speed_of(Action::kSlow);
    agents.push_back(std::move(a));
  }
  return WorldState(n, cfg.block, std::move(agents), 0);
}

// Moves every agent by its action's speed, one cell at a time, turning at
// crossings. `actions` is indexed like world.agents().
inline WorldState step(const WorldState& world, const std::vector<Action>& actions) {
  if (actions.size() != world.agents().size()) {
    throw ConfigError("step needs one action per agent");
  }
  std::vector<Agent> next = world.agents();
  for (std::size_t i = 0; i < next.size(); ++i) {
    Agent& a = next[i];
    const int speed = speed_of(actions[i]);
    for (int s = 0; s < speed; ++s) {
      const Cell d = heading_delta(a.heading);
      a.pos = {world.wrap(a.pos.x + d.x), world.wrap(a.pos.y + d.y)};
      if (world.is_crossing(a.pos)) {
        a.heading = apply_turn(a.heading, a.route[a.route_cursor % a.route.size()]);
        ++a.route_cursor;
      }
    }
    a.last_speed = speed;
  }
  return WorldState(world.grid_size(), world.block(), std::move(next), world.step() + 1);
}

}  // namespace semsel

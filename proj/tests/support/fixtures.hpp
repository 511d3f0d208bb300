#pragma once
// Builders and random generators shared by the test suites.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "nbsim/architecture.hpp"
#include "nbsim/engine.hpp"

namespace nbsim::test {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin() { return integer(0, 1) == 1; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))];
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline Cell make_macro(int id, Position at = {}) {
  Cell c;
  c.id = id;
  c.cell_identity = id;
  c.position = at;
  return c;
}

inline Cell make_small(int id, Position at, BaseStationClass cls = BaseStationClass::local_area()) {
  Cell c;
  c.id = id;
  c.cell_identity = id;
  c.cls = cls;
  c.position = at;
  c.nrs_power_dbm = cls.kind() == BsClassKind::Home ? 11.0 : 24.0;
  c.antenna_gain_dbi = 5.0;
  c.propagation = PropagationModel::small_cell();
  return c;
}

/// Macro 1 plus small cells 2..n+1, each with its own S1 link.
inline Topology arch1_topology(std::vector<Position> small_positions = {{200.0, 0.0}}) {
  Topology t;
  t.kind = ArchitectureKind::Arch1;
  t.cells.push_back(make_macro(1));
  t.s1_links.insert(1);
  int id = 2;
  for (auto p : small_positions) {
    t.cells.push_back(make_small(id, p));
    t.s1_links.insert(id);
    ++id;
  }
  return t;
}

/// Macro anchor 1 with X2-attached non-anchor small cells 2..n+1.
inline Topology arch2_topology(std::vector<Position> small_positions = {{200.0, 0.0}, {-200.0, 0.0}}) {
  Topology t;
  t.kind = ArchitectureKind::Arch2;
  t.cells.push_back(make_macro(1));
  t.s1_links.insert(1);
  int id = 2;
  for (auto p : small_positions) {
    Cell c = make_small(id, p);
    c.role = CellRole::NonAnchor;
    c.anchor_prb.reset();
    c.non_anchor_prbs = {1, 2};
    c.system_info = false;
    c.selection_threshold_dbm = -120.0;
    t.cells.push_back(c);
    t.add_x2(1, id);
    ++id;
  }
  return t;
}

/// Macro 1 sharing its cell identity with small cells 2..n+1.
inline Topology arch3_topology(std::vector<Position> small_positions = {{200.0, 0.0}, {-200.0, 0.0}}) {
  Topology t;
  t.kind = ArchitectureKind::Arch3;
  t.cells.push_back(make_macro(1));
  t.s1_links.insert(1);
  int id = 2;
  for (auto p : small_positions) {
    Cell c = make_small(id, p);
    c.cell_identity = 1;
    c.role = CellRole::NonAnchor;
    c.anchor_prb.reset();
    c.system_info = false;
    c.prach_paging = false;
    t.cells.push_back(c);
    t.add_x2(1, id);
    ++id;
  }
  return t;
}

inline ScenarioConfig scenario(Topology t, std::uint64_t seed = 7, int ue_count = 20, int drops = 2) {
  ScenarioConfig c;
  c.seed = seed;
  c.topology = std::move(t);
  c.ue_count = ue_count;
  c.drops = drops;
  c.drop.radius_m = 400.0;
  return c;
}

}  // namespace nbsim::test

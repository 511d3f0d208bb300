#include <string>

#include "nbsim/config.hpp"
#include "nbsim/engine.hpp"
#include "nbsim/errors.hpp"

namespace nbsim {
namespace {

Cell macro_cell(int id, Position at) {
  Cell c;
  c.id = id;
  c.cell_identity = id;
  c.position = at;
  return c;  // wide-area defaults
}

Cell small_cell(int id, BaseStationClass cls, Position at, double nrs_dbm, double gain_dbi) {
  Cell c;
  c.id = id;
  c.cell_identity = id;
  c.cls = cls;
  c.position = at;
  c.nrs_power_dbm = nrs_dbm;
  c.antenna_gain_dbi = gain_dbi;
  c.propagation = PropagationModel::small_cell();
  return c;
}

// Small cell 200 m from the macro, co-channel, UEs dropped in the band between
// the two. A class offset keeps the UEs nearer the small cell camped on it.
ScenarioConfig fig3a() {
  ScenarioConfig c;
  c.seed = 1;
  c.topology.kind = ArchitectureKind::Arch1;
  c.topology.cells = {macro_cell(1, {0.0, 0.0}),
                      small_cell(2, BaseStationClass::local_area(), {200.0, 0.0}, 24.0, 5.0)};
  c.topology.s1_links = {1, 2};
  c.ue_count = 50;
  c.drops = 10;
  c.drop = {DropDistribution::UniformDisc, {100.0, 0.0}, 100.0, 0};
  c.policy.kind = SelectionKind::ClassThresholds;
  c.policy.class_offset_db[static_cast<std::size_t>(BsClassKind::LocalArea)] = 30.0;
  return c;
}

// CSG femto at 800 m inside a 1000 m macro, members clustered around it, and a
// macro-camped UE at the macro edge transmitting toward the macro.
ScenarioConfig fig3b() {
  ScenarioConfig c;
  c.seed = 1;
  c.topology.kind = ArchitectureKind::Arch1;
  c.topology.cells = {macro_cell(1, {0.0, 0.0}),
                      small_cell(2, BaseStationClass::home(1), {800.0, 0.0}, 14.0, 0.0)};
  c.topology.s1_links = {1, 2};
  c.ue_count = 10;
  c.drops = 10;
  c.drop = {DropDistribution::Hotspot, {0.0, 0.0}, 30.0, 2};
  c.fixed_ues = {{1000.0, 0.0}};
  c.flags.csg_mode = true;
  c.csg_radius_m = 30.0;
  return c;
}

// Single macro, UEs over its 1000 m disc.
ScenarioConfig homogeneous() {
  ScenarioConfig c;
  c.seed = 1;
  c.topology.kind = ArchitectureKind::Arch1;
  c.topology.cells = {macro_cell(1, {0.0, 0.0})};
  c.topology.s1_links = {1};
  c.ue_count = 100;
  c.drops = 10;
  c.drop = {DropDistribution::UniformDisc, {0.0, 0.0}, 1000.0, 0};
  return c;
}

// Macro with two co-channel pico cells; DL from the strongest cell, UL from
// the least path loss.
ScenarioConfig decoupled_demo() {
  ScenarioConfig c;
  c.seed = 1;
  c.topology.kind = ArchitectureKind::Arch1;
  c.topology.cells = {macro_cell(1, {0.0, 0.0}),
                      small_cell(2, BaseStationClass::local_area(), {300.0, 0.0}, 24.0, 5.0),
                      small_cell(3, BaseStationClass::local_area(), {-300.0, 0.0}, 24.0, 5.0)};
  c.topology.s1_links = {1, 2, 3};
  c.ue_count = 50;
  c.drops = 10;
  c.drop = {DropDistribution::UniformDisc, {0.0, 0.0}, 500.0, 0};
  c.policy.kind = SelectionKind::Decoupled;
  c.flags.decoupled = true;
  return c;
}

}  // namespace

std::string_view to_string(PresetScenario p) {
  switch (p) {
    case PresetScenario::Fig3a: return "fig3a";
    case PresetScenario::Fig3b: return "fig3b";
    case PresetScenario::Homogeneous: return "homogeneous";
    case PresetScenario::DecoupledDemo: return "decoupled-demo";
  }
  return "?";
}

PresetScenario parse_preset(std::string_view name) {
  for (auto p : {PresetScenario::Fig3a, PresetScenario::Fig3b, PresetScenario::Homogeneous,
                 PresetScenario::DecoupledDemo}) {
    if (to_string(p) == name) return p;
  }
  throw ConfigError("preset", "unknown preset '" + std::string(name) +
                                  "' (expected fig3a, fig3b, homogeneous or decoupled-demo)");
}

ScenarioConfig expand_preset(PresetScenario p, const std::map<std::string, std::string>& overrides) {
  ScenarioConfig c;
  switch (p) {
    case PresetScenario::Fig3a: c = fig3a(); break;
    case PresetScenario::Fig3b: c = fig3b(); break;
    case PresetScenario::Homogeneous: c = homogeneous(); break;
    case PresetScenario::DecoupledDemo: c = decoupled_demo(); break;
  }
  std::vector<FieldError> errors;
  for (const auto& [key, value] : overrides) {
    try {
      apply_override(c, key, value);
    } catch (const ConfigError& e) {
      errors.insert(errors.end(), e.errors().begin(), e.errors().end());
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  validate_config(c);
  return c;
}

}  // namespace nbsim

#include <algorithm>
#include <string>

#include <gtest/gtest.h>

#include "nbsim/config.hpp"
#include "nbsim/errors.hpp"
#include "support/fixtures.hpp"

namespace nbsim {
namespace {

constexpr const char* kMinimal = R"(
seed = 5
[[cell]]
id = 1
)";

bool mentions(const ConfigError& e, const std::string& field, const std::string& reason_part = "") {
  return std::any_of(e.errors().begin(), e.errors().end(), [&](const FieldError& f) {
    return f.field == field && f.reason.find(reason_part) != std::string::npos;
  });
}

ConfigError parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ConfigError for:\n" << text;
  return ConfigError("", "");
}

ScenarioConfig random_config(test::Gen& g) {
  Topology t;
  switch (g.integer(0, 2)) {
    case 0: t = test::arch1_topology({{g.real(-500, 500), g.real(-500, 500)}}); break;
    case 1: t = test::arch2_topology({{g.real(-500, 500), g.real(-500, 500)}, {g.real(-500, 500), 0.0}}); break;
    default: t = test::arch3_topology({{g.real(-500, 500), g.real(-500, 500)}}); break;
  }
  for (auto& c : t.cells) {
    c.position.x += g.real(-1, 1);
    c.nrs_power_dbm = c.cls.is_small_cell() ? g.real(0, 24) : g.real(20, 46);
    c.antenna_gain_dbi = g.real(0, 18);
    c.frequency_index = g.integer(0, 2);
    c.nrs_config = g.integer(0, 3);
    c.selection_threshold_dbm = g.real(-140, -60);
    c.propagation.intercept_db += g.real(-3, 3);
    if (c.cls.is_small_cell() && g.coin()) c.ul_p_cmax_dbm = g.real(0, 20);
    if (!c.cls.is_small_cell() && g.coin()) {
      c.mode = CarrierMode::InBand;
      c.dl_boost_db = 6.0;
    }
  }
  ScenarioConfig c = test::scenario(std::move(t), g.engine()(), g.integer(1, 500), g.integer(1, 20));
  c.drop.distribution = g.coin() ? DropDistribution::UniformDisc : DropDistribution::Hotspot;
  c.drop.hotspot_cell = c.topology.cells.back().id;
  c.drop.center = {g.real(-100, 100), g.real(-100, 100)};
  c.drop.radius_m = g.real(0, 2000);
  c.policy.kind = static_cast<SelectionKind>(g.integer(0, 4));
  c.policy.normal_coverage_rsrp_threshold_dbm = g.real(-120, -50);
  for (auto& o : c.policy.class_offset_db) o = g.real(-20, 20);
  c.power.ue_max_dbm = g.real(20, 26);
  c.power.p_o_npusch_dbm = {g.real(-126, -60), g.real(-126, -60)};
  c.power.alpha_j1 = g.real(0, 1);
  c.power.j = g.integer(1, 2);
  c.power.allocation = g.coin() ? SubcarrierAllocation{SubcarrierSpacing::k3p75kHz, 1}
                                : SubcarrierAllocation{SubcarrierSpacing::k15kHz, g.pick(std::vector<int>{1, 3, 6, 12})};
  c.power.pcmax_policy = g.coin() ? PcmaxPolicy::InterferenceSafe : PcmaxPolicy::CoverageFirst;
  c.power.nprach_target_dbm = g.real(-130, -90);
  c.power.csg_uplift_cap_db = g.real(0, 10);
  c.coverage.max_coupling_loss_db = {g.real(130, 145), g.real(146, 155), g.real(156, 170)};
  c.coverage.repetitions = {1, g.integer(2, 16), g.integer(16, 128)};
  c.rach = {g.integer(1, 5), g.real(-10, 10), g.real(-10, 10)};
  c.shadowing_sigma_db = g.coin() ? 0.0 : g.real(0, 10);
  c.ue_antenna_gain_dbi = g.real(-3, 3);
  c.flags = {g.coin(), g.coin(), g.coin()};
  c.csg_radius_m = g.real(0, 100);
  c.x2_latency_ms = g.real(0, 10000);
  for (int i = 0; i < g.integer(0, 3); ++i) c.fixed_ues.push_back({g.real(-2000, 2000), g.real(-2000, 2000)});
  return c;
}

TEST(ParseConfig, MinimalIsValid) {
  const auto c = parse_config(kMinimal);
  EXPECT_EQ(c.seed, 5u);
  ASSERT_EQ(c.topology.cells.size(), 1u);
  EXPECT_EQ(c.topology.cells[0].cls.kind(), BsClassKind::WideArea);
  EXPECT_TRUE(c.topology.has_s1(1));
  EXPECT_EQ(c.topology.cells[0].cell_identity, 1);
}

TEST(ParseConfig, MissingSeedNamesField) {
  const auto e = parse_error("[[cell]]\nid = 1\n");
  EXPECT_TRUE(mentions(e, "seed", "missing"));
}

TEST(ParseConfig, ReportsEveryErrorNotJustTheFirst) {
  const auto e = parse_error(R"(
ue_count = 0
bogus = 1
[power]
alpha_j1 = banana
[warp]
[[cell]]
class = "home"
antenna_ports = 3
colour = "red"
)");
  EXPECT_TRUE(mentions(e, "seed"));
  EXPECT_TRUE(mentions(e, "bogus", "unknown key"));
  EXPECT_TRUE(mentions(e, "power.alpha_j1", "number"));
  EXPECT_TRUE(mentions(e, "warp", "unknown section"));
  EXPECT_TRUE(mentions(e, "cell[0].id", "missing"));
  EXPECT_TRUE(mentions(e, "cell[0].antenna_ports"));
  EXPECT_TRUE(mentions(e, "cell[0].colour", "unknown key"));
  EXPECT_TRUE(mentions(e, "ue_count"));
}

TEST(ParseConfig, Arch2NonAnchorS1SurfacesConstraint) {
  const auto e = parse_error(R"(
seed = 1
kind = arch2
[[cell]]
id = 1
x2 = [2]
[[cell]]
id = 2
class = local-area
role = non-anchor
system_info = false
s1 = true
)");
  EXPECT_TRUE(mentions(e, "topology", "arch2.only-anchor-s1: non-anchor must not have S1 (cells 2)"));
}

TEST(ParseConfig, DuplicateKeysRejected) {
  const auto e = parse_error("seed = 1\nseed = 2\n[[cell]]\nid = 1\nx = 0\nx = 1\n");
  EXPECT_TRUE(mentions(e, "seed", "duplicate"));
  EXPECT_TRUE(mentions(e, "cell[0].x", "duplicate"));
}

TEST(ParseConfig, ClassDefaults) {
  const auto c = parse_config(R"(
seed = 1
[[cell]]
id = 1
[[cell]]
id = 2
class = "home"
antenna_ports = 8
x = 300
[[cell]]
id = 3
class = local-area
nrs_power_dbm = 20   # explicit value wins
)");
  const Cell& home = c.topology.at(2);
  EXPECT_EQ(home.cls, BaseStationClass::home(8));
  EXPECT_DOUBLE_EQ(home.nrs_power_dbm, 11.0);
  EXPECT_DOUBLE_EQ(home.antenna_gain_dbi, 0.0);
  EXPECT_EQ(home.propagation, PropagationModel::small_cell());
  EXPECT_DOUBLE_EQ(c.topology.at(3).nrs_power_dbm, 20.0);
  EXPECT_DOUBLE_EQ(c.topology.at(3).antenna_gain_dbi, 5.0);
}

TEST(ParseConfig, CellAbovePowerCapRejected) {
  const auto e = parse_error("seed = 1\n[[cell]]\nid = 1\n[[cell]]\nid = 2\nclass = local-area\nnrs_power_dbm = 30\n");
  EXPECT_TRUE(mentions(e, "topology", "cell.invariants"));
}

TEST(ParseConfig, FixedUesAndLists) {
  const auto c = parse_config(std::string(kMinimal) + "[[ue]]\nx = 1000\ny = -5.5\n");
  ASSERT_EQ(c.fixed_ues.size(), 1u);
  EXPECT_EQ(c.fixed_ues[0], (Position{1000.0, -5.5}));
  EXPECT_TRUE(mentions(parse_error(std::string(kMinimal) + "non_anchor_prbs = [1,]\n"), "cell[0].non_anchor_prbs"));
}

TEST(Serialize, RoundTripFuzz) {
  test::Gen g(61);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const auto c = random_config(g);
    try {
      validate_config(c);
    } catch (const ConfigError&) {
      continue;
    }
    const std::string text = serialize_config(c);
    const auto back = parse_config(text);
    ASSERT_EQ(back, c) << text;
    EXPECT_EQ(serialize_config(back), text);
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(Serialize, PresetsRoundTrip) {
  for (auto p : {PresetScenario::Fig3a, PresetScenario::Fig3b, PresetScenario::Homogeneous,
                 PresetScenario::DecoupledDemo}) {
    const auto c = expand_preset(p);
    EXPECT_EQ(parse_config(serialize_config(c)), c) << to_string(p);
  }
}

TEST(ApplyOverride, Keys) {
  auto c = parse_config(kMinimal);
  apply_override(c, "policy.kind", "hybrid");
  apply_override(c, "power.subcarrier_spacing_khz", "3.75");
  apply_override(c, "cell.1.nrs_power_dbm", " 30 ");
  apply_override(c, "flags.protect_macro_ul", "true");
  EXPECT_EQ(c.policy.kind, SelectionKind::Hybrid);
  EXPECT_EQ(c.power.allocation.spacing, SubcarrierSpacing::k3p75kHz);
  EXPECT_DOUBLE_EQ(c.topology.at(1).nrs_power_dbm, 30.0);
  EXPECT_TRUE(c.flags.protect_macro_ul);

  EXPECT_THROW(apply_override(c, "policy.nope", "1"), ConfigError);
  EXPECT_THROW(apply_override(c, "cell.9.x", "1"), ConfigError);
  EXPECT_THROW(apply_override(c, "cell.1.bogus", "1"), ConfigError);
  EXPECT_THROW(apply_override(c, "ue.0.x", "1"), ConfigError);
  EXPECT_THROW(apply_override(c, "seed", "-1"), ConfigError);
  EXPECT_THROW(apply_override(c, "power.subcarrier_spacing_khz", "7"), ConfigError);
}

TEST(LoadConfig, UnreadablePathIsConfigError) {
  EXPECT_THROW(load_config("/nonexistent/dir/scenario.conf"), ConfigError);
}

TEST(LoadConfig, ShippedExamplesParse) {
  for (const char* name : {"arch1_hetnet.conf", "arch2_example.conf", "arch3_example.conf"}) {
    EXPECT_NO_THROW(load_config(std::string(NBSIM_CONFIG_DIR) + "/" + name)) << name;
  }
}

}  // namespace
}  // namespace nbsim

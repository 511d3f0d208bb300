#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "nbsim/errors.hpp"
#include "nbsim/radio.hpp"
#include "support/fixtures.hpp"

namespace nbsim {
namespace {

TEST(PathLoss, MacroAtOneKilometer) {
  EXPECT_NEAR(path_loss_at_distance_db(PropagationModel::macro(), 1000.0), 128.1, 1e-9);
}

TEST(PathLoss, MacroAtHundredMeters) {
  EXPECT_NEAR(path_loss_at_distance_db(PropagationModel::macro(), 100.0), 90.5, 1e-9);
}

TEST(PathLoss, SmallCellAtFiftyMeters) {
  EXPECT_NEAR(path_loss_at_distance_db(PropagationModel::small_cell(), 50.0), 92.95, 0.005);
}

TEST(PathLoss, DistanceBelowClampIsClamped) {
  const auto m = PropagationModel::macro();
  EXPECT_DOUBLE_EQ(path_loss_db(m, {0, 0}, {0, 0}), path_loss_at_distance_db(m, 10.0));
  EXPECT_DOUBLE_EQ(path_loss_db(m, {0, 0}, {3, 4}), path_loss_at_distance_db(m, 10.0));
}

TEST(PathLoss, MonotoneInDistanceForBothModels) {
  test::Gen g(11);
  for (const auto& model : {PropagationModel::macro(), PropagationModel::small_cell()}) {
    for (int i = 0; i < 2000; ++i) {
      const Position tx{g.real(-2000, 2000), g.real(-2000, 2000)};
      const Position a{g.real(-2000, 2000), g.real(-2000, 2000)};
      const Position b{g.real(-2000, 2000), g.real(-2000, 2000)};
      const auto [near, far] = distance_m(tx, a) <= distance_m(tx, b) ? std::pair{a, b} : std::pair{b, a};
      EXPECT_LE(path_loss_db(model, tx, near), path_loss_db(model, tx, far));
    }
  }
}

TEST(Rsrp, MacroAtOneKilometer) {
  Cell c = test::make_macro(1);
  EXPECT_NEAR(rsrp_from_path_loss_dbm(c, 128.1), -81.1, 1e-9);
  EXPECT_NEAR(rsrp_dbm(c, {1000.0, 0.0}), -81.1, 1e-9);
}

TEST(Rsrp, ZeroPathLoss) { EXPECT_DOUBLE_EQ(rsrp_from_path_loss_dbm(test::make_macro(1), 0.0), 47.0); }

TEST(Rsrp, PicoAtHundredDb) {
  Cell c = test::make_small(2, {});
  EXPECT_NEAR(rsrp_from_path_loss_dbm(c, 100.0), -71.0, 1e-9);
}

TEST(Rsrp, RoundTripReconstructsNrsPower) {
  test::Gen g(12);
  for (int i = 0; i < 1000; ++i) {
    Cell c = test::make_macro(1, {g.real(-1000, 1000), g.real(-1000, 1000)});
    c.nrs_power_dbm = g.real(0, 40);
    c.antenna_gain_dbi = g.real(0, 18);
    const Position ue{g.real(-3000, 3000), g.real(-3000, 3000)};
    const double pl = path_loss_db(c.propagation, c.position, ue);
    EXPECT_NEAR(rsrp_dbm(c, ue) + pl - c.antenna_gain_dbi, c.nrs_power_dbm, 1e-9);
  }
}

TEST(CouplingLoss, WideAreaFloor) {
  EXPECT_DOUBLE_EQ(clamp_coupling_loss_db(BaseStationClass::wide_area(), 65.0), 70.0);
}

TEST(CouplingLoss, LocalAreaAtFloor) {
  EXPECT_DOUBLE_EQ(clamp_coupling_loss_db(BaseStationClass::local_area(), 45.0), 45.0);
}

TEST(CouplingLoss, MediumRangeAboveFloor) {
  EXPECT_DOUBLE_EQ(clamp_coupling_loss_db(BaseStationClass::medium_range(), 120.0), 120.0);
}

TEST(CouplingLoss, HomeHasNoFloor) {
  EXPECT_DOUBLE_EQ(clamp_coupling_loss_db(BaseStationClass::home(2), 12.0), 12.0);
}

TEST(CouplingLoss, SubtractsBothAntennaGains) {
  Cell c = test::make_macro(1);
  EXPECT_DOUBLE_EQ(coupling_loss_from_path_loss_db(c, 130.0, 2.0), 113.0);
}

TEST(CouplingLoss, NeverBelowClassFloor) {
  test::Gen g(13);
  const std::vector<BaseStationClass> classes{BaseStationClass::wide_area(), BaseStationClass::medium_range(),
                                              BaseStationClass::local_area()};
  for (int i = 0; i < 5000; ++i) {
    Cell c = test::make_macro(1);
    c.cls = g.pick(classes);
    c.antenna_gain_dbi = g.real(0, 20);
    const Position ue{g.real(-50, 50), g.real(-50, 50)};
    const double cl = coupling_loss_db(c, ue, g.real(0, 5), g.coin() ? PropagationModel::macro()
                                                                       : PropagationModel::small_cell());
    EXPECT_GE(cl, *c.cls.min_coupling_loss_db());
  }
}

TEST(ThermalNoise, At180kHz) { EXPECT_NEAR(thermal_noise_dbm(180e3), -121.45, 0.01); }
TEST(ThermalNoise, At15kHz) { EXPECT_NEAR(thermal_noise_dbm(15e3), -132.24, 0.01); }
TEST(ThermalNoise, At20MHz) { EXPECT_NEAR(thermal_noise_dbm(20e6), -100.99, 0.01); }

TEST(ThermalNoise, NarrowbandAdvantageOver20MHz) {
  EXPECT_NEAR(thermal_noise_dbm(20e6) - thermal_noise_dbm(kCarrierBandwidthHz), 20.46, 0.05);
}

TEST(ThermalNoise, RejectsNonPositiveBandwidth) {
  EXPECT_THROW(thermal_noise_dbm(0.0), InputError);
  EXPECT_THROW(thermal_noise_dbm(-1.0), InputError);
}

TEST(UlSinr, NoInterferers) {
  EXPECT_NEAR(ul_sinr_db(-100.0, std::vector<double>{}), 21.45, 0.05);
}

TEST(UlSinr, OneEqualInterferer) {
  const double sinr = ul_sinr_db(-100.0, std::vector<double>{-100.0});
  // Noise adds 10log10(1 + 10^(-2.145)) on top of the interferer.
  EXPECT_NEAR(sinr, -10.0 * std::log10(1.0 + std::pow(10.0, -2.145)), 1e-3);
  EXPECT_NEAR(sinr, -0.03, 0.005);
}

TEST(UlSinr, InterferenceDominated) {
  EXPECT_NEAR(ul_sinr_db(-130.0, std::vector<double>{-90.0}), -40.0, 0.01);
}

TEST(UlSinr, ZeroInterferersIsExactlySignalMinusNoise) {
  test::Gen g(14);
  for (int i = 0; i < 500; ++i) {
    const double s = g.real(-150, -50);
    const double b = g.real(1e3, 1e7);
    EXPECT_EQ(ul_sinr_db(s, std::vector<double>{}, b), s - thermal_noise_dbm(b));
  }
}

TEST(UlSinr, OnlyCoChannelInterferenceCounts) {
  Cell serving = test::make_macro(1);
  serving.frequency_index = 3;
  const std::vector<ReceivedPower> mixed{{-90.0, 3}, {-60.0, 4}};
  const std::vector<ReceivedPower> same{{-90.0, 3}};
  EXPECT_DOUBLE_EQ(ul_sinr_db(serving, -100.0, mixed), ul_sinr_db(serving, -100.0, same));
  EXPECT_DOUBLE_EQ(ul_sinr_db(serving, -100.0, same), ul_sinr_db(-100.0, std::vector<double>{-90.0}));
}

TEST(PowerSum, MatchesLinearOracle) {
  const std::vector<double> p{-100.0, -100.0};
  EXPECT_NEAR(sum_dbm(p), -100.0 + 10.0 * std::log10(2.0), 1e-12);
  EXPECT_EQ(sum_dbm(std::vector<double>{}), -std::numeric_limits<double>::infinity());
}

TEST(BaseStationClass, Caps) {
  EXPECT_FALSE(BaseStationClass::wide_area().max_output_power_dbm());
  EXPECT_EQ(*BaseStationClass::medium_range().max_output_power_dbm(), 38.0);
  EXPECT_EQ(*BaseStationClass::local_area().max_output_power_dbm(), 24.0);
  EXPECT_EQ(*BaseStationClass::home(1).max_output_power_dbm(), 20.0);
  EXPECT_EQ(*BaseStationClass::home(2).max_output_power_dbm(), 17.0);
  EXPECT_EQ(*BaseStationClass::home(4).max_output_power_dbm(), 14.0);
  EXPECT_EQ(*BaseStationClass::home(8).max_output_power_dbm(), 11.0);
  EXPECT_THROW(BaseStationClass::home(3), InputError);
}

TEST(BaseStationClass, Floors) {
  EXPECT_EQ(*BaseStationClass::wide_area().min_coupling_loss_db(), 70.0);
  EXPECT_EQ(*BaseStationClass::medium_range().min_coupling_loss_db(), 53.0);
  EXPECT_EQ(*BaseStationClass::local_area().min_coupling_loss_db(), 45.0);
  EXPECT_FALSE(BaseStationClass::home(1).min_coupling_loss_db());
}

TEST(ValidateCell, RejectsPowerAboveClassCap) {
  Cell c = test::make_small(2, {}, BaseStationClass::local_area());
  c.nrs_power_dbm = 24.5;
  EXPECT_THROW(validate_cell(c), ConfigError);
  c.nrs_power_dbm = 24.0;
  EXPECT_NO_THROW(validate_cell(c));
}

TEST(ValidateCell, BoostCountsOnlyWhereItApplies) {
  Cell macro = test::make_macro(1);
  macro.mode = CarrierMode::InBand;
  macro.dl_boost_db = 6.0;
  EXPECT_NO_THROW(validate_cell(macro));
  EXPECT_DOUBLE_EQ(effective_dl_boost_db(macro.cls, macro.mode, 6.0), 6.0);
  EXPECT_DOUBLE_EQ(effective_dl_boost_db(BaseStationClass::local_area(), CarrierMode::InBand, 6.0), 0.0);
  EXPECT_DOUBLE_EQ(effective_dl_boost_db(macro.cls, CarrierMode::Standalone, 6.0), 0.0);
}

TEST(ValidateCell, AnchorRoleAndPrb) {
  Cell c = test::make_macro(1);
  c.anchor_prb.reset();
  EXPECT_THROW(validate_cell(c), ConfigError);
  c.role = CellRole::NonAnchor;
  EXPECT_NO_THROW(validate_cell(c));
  c.anchor_prb = 4;
  EXPECT_THROW(validate_cell(c), ConfigError);
}

TEST(ValidateCell, ReportsEveryBreach) {
  Cell c = test::make_small(2, {}, BaseStationClass::home(8));
  c.position.x = std::nan("");
  c.dl_boost_db = 3.0;
  c.anchor_prb.reset();
  try {
    validate_cell(c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_GE(e.errors().size(), 3u);
  }
}

}  // namespace
}  // namespace nbsim

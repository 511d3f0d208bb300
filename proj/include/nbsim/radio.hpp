#pragma once

// Geometry, propagation and link-level power bookkeeping shared by every
// other part of the simulator. Everything here is a pure function.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace nbsim {

/// NB-IoT carrier bandwidth, identical for every operation mode.
inline constexpr double kCarrierBandwidthHz = 180e3;
/// Thermal noise density at 290 K.
inline constexpr double kThermalNoiseDensityDbmHz = -174.0;
/// Distances below this are clamped before evaluating a log-distance model.
inline constexpr double kMinDistanceM = 10.0;

struct Position {
  double x = 0.0;  // meters
  double y = 0.0;

  bool operator==(const Position&) const = default;
};

double distance_m(Position a, Position b);

enum class BsClassKind { WideArea, MediumRange, LocalArea, Home };

/// Base-station class with its minimum coupling loss and output power cap.
class BaseStationClass {
 public:
  static BaseStationClass wide_area() { return BaseStationClass(BsClassKind::WideArea, 0); }
  static BaseStationClass medium_range() { return BaseStationClass(BsClassKind::MediumRange, 0); }
  static BaseStationClass local_area() { return BaseStationClass(BsClassKind::LocalArea, 0); }
  /// Throws InputError unless ports is 1, 2, 4 or 8.
  static BaseStationClass home(int antenna_ports);

  BsClassKind kind() const noexcept { return kind_; }
  /// Zero for every class but Home.
  int antenna_ports() const noexcept { return ports_; }
  bool is_small_cell() const noexcept { return kind_ != BsClassKind::WideArea; }

  /// Empty when the class has no floor (Home).
  std::optional<double> min_coupling_loss_db() const noexcept;
  /// Empty when output power is unbounded (WideArea).
  std::optional<double> max_output_power_dbm() const noexcept;

  bool operator==(const BaseStationClass&) const = default;

 private:
  BaseStationClass(BsClassKind kind, int ports) : kind_(kind), ports_(ports) {}

  BsClassKind kind_;
  int ports_;
};

std::string_view to_string(BsClassKind kind);

enum class CarrierMode { Standalone, InBand, GuardBand };
enum class CellRole { Anchor, NonAnchor };

std::string_view to_string(CarrierMode mode);
std::string_view to_string(CellRole role);

/// Log-distance model PL = intercept + slope * log10(d_km).
struct PropagationModel {
  double intercept_db = 128.1;
  double slope_db = 37.6;

  static PropagationModel macro() { return {128.1, 37.6}; }
  static PropagationModel small_cell() { return {140.7, 36.7}; }

  bool operator==(const PropagationModel&) const = default;
};

struct Cell {
  int id = 0;
  BaseStationClass cls = BaseStationClass::wide_area();
  Position position;
  double nrs_power_dbm = 32.0;  // per RE
  double dl_boost_db = 0.0;     // requested boost, 0 or 6
  double antenna_gain_dbi = 15.0;
  CarrierMode mode = CarrierMode::Standalone;
  int frequency_index = 0;
  CellRole role = CellRole::Anchor;
  int cell_identity = 0;
  std::optional<int> anchor_prb = 0;
  std::vector<int> non_anchor_prbs;
  PropagationModel propagation = PropagationModel::macro();

  // Broadcast and access resources carried by the cell.
  bool system_info = true;
  bool prach_paging = true;
  int nrs_config = 0;
  double selection_threshold_dbm = -140.0;
  /// Uplink P_CMAX this cell configures for its UEs; empty means the UE maximum.
  std::optional<double> ul_p_cmax_dbm;

  bool operator==(const Cell&) const = default;
};

/// Boost actually applied: the request is honored only for wide-area cells in
/// in-band or guard-band mode and suppressed otherwise.
double effective_dl_boost_db(const BaseStationClass& cls, CarrierMode mode, double requested_db);

/// Checks the per-cell invariants (power cap, anchor PRB vs role, boost value).
/// Throws ConfigError listing every breach; field paths are prefixed with `path`.
void validate_cell(const Cell& cell, std::string_view path = "cell");

struct LinkMeasure {
  double path_loss_db = 0.0;
  double coupling_loss_db = 0.0;
  double rsrp_dbm = 0.0;

  bool operator==(const LinkMeasure&) const = default;
};

double path_loss_at_distance_db(const PropagationModel& model, double distance_m);
double path_loss_db(const PropagationModel& model, Position tx, Position rx);

double rsrp_from_path_loss_dbm(const Cell& cell, double path_loss_db);
double rsrp_dbm(const Cell& cell, Position ue, const PropagationModel& model);
inline double rsrp_dbm(const Cell& cell, Position ue) { return rsrp_dbm(cell, ue, cell.propagation); }

/// Applies the class floor (when the class has one) to a raw coupling loss.
double clamp_coupling_loss_db(const BaseStationClass& cls, double raw_db);
double coupling_loss_from_path_loss_db(const Cell& cell, double path_loss_db, double ue_antenna_gain_dbi);
double coupling_loss_db(const Cell& cell, Position ue, double ue_antenna_gain_dbi,
                        const PropagationModel& model);

/// Measure with an explicit path loss (shadowing already folded in).
LinkMeasure link_from_path_loss(const Cell& cell, double path_loss_db, double ue_antenna_gain_dbi);

double thermal_noise_dbm(double bandwidth_hz);

double db_to_linear(double db);
double linear_to_db(double linear);
/// Power sum of dBm values; -inf for an empty range.
double sum_dbm(std::span<const double> powers_dbm);

struct ReceivedPower {
  double power_dbm = 0.0;
  int frequency_index = 0;
};

/// Uplink SINR at `serving`; only interferers on the serving frequency count.
double ul_sinr_db(const Cell& serving, double signal_dbm, std::span<const ReceivedPower> interferers,
                  double bandwidth_hz = kCarrierBandwidthHz);
/// Same, with every interferer assumed co-channel.
double ul_sinr_db(double signal_dbm, std::span<const double> interferers_dbm,
                  double bandwidth_hz = kCarrierBandwidthHz);

}  // namespace nbsim

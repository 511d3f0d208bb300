#include "nbsim/radio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nbsim/errors.hpp"

namespace nbsim {

double distance_m(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

BaseStationClass BaseStationClass::home(int antenna_ports) {
  if (antenna_ports != 1 && antenna_ports != 2 && antenna_ports != 4 && antenna_ports != 8) {
    throw InputError("home base station antenna ports must be 1, 2, 4 or 8, got " +
                     std::to_string(antenna_ports));
  }
  return BaseStationClass(BsClassKind::Home, antenna_ports);
}

std::optional<double> BaseStationClass::min_coupling_loss_db() const noexcept {
  switch (kind_) {
    case BsClassKind::WideArea: return 70.0;
    case BsClassKind::MediumRange: return 53.0;
    case BsClassKind::LocalArea: return 45.0;
    case BsClassKind::Home: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> BaseStationClass::max_output_power_dbm() const noexcept {
  switch (kind_) {
    case BsClassKind::WideArea: return std::nullopt;
    case BsClassKind::MediumRange: return 38.0;
    case BsClassKind::LocalArea: return 24.0;
    case BsClassKind::Home:
      // 20 dBm on one port, 3 dB less per doubling.
      switch (ports_) {
        case 1: return 20.0;
        case 2: return 17.0;
        case 4: return 14.0;
        case 8: return 11.0;
      }
  }
  return std::nullopt;
}

std::string_view to_string(BsClassKind kind) {
  switch (kind) {
    case BsClassKind::WideArea: return "wide-area";
    case BsClassKind::MediumRange: return "medium-range";
    case BsClassKind::LocalArea: return "local-area";
    case BsClassKind::Home: return "home";
  }
  return "?";
}

std::string_view to_string(CarrierMode mode) {
  switch (mode) {
    case CarrierMode::Standalone: return "standalone";
    case CarrierMode::InBand: return "in-band";
    case CarrierMode::GuardBand: return "guard-band";
  }
  return "?";
}

std::string_view to_string(CellRole role) {
  return role == CellRole::Anchor ? "anchor" : "non-anchor";
}

double effective_dl_boost_db(const BaseStationClass& cls, CarrierMode mode, double requested_db) {
  const bool boost_allowed =
      cls.kind() == BsClassKind::WideArea && (mode == CarrierMode::InBand || mode == CarrierMode::GuardBand);
  return boost_allowed ? requested_db : 0.0;
}

void validate_cell(const Cell& cell, std::string_view path) {
  const std::string p(path);
  std::vector<FieldError> errors;
  auto finite = [&](double v, const char* field) {
    if (!std::isfinite(v)) errors.push_back({p + "." + field, "must be finite"});
  };
  finite(cell.position.x, "x");
  finite(cell.position.y, "y");
  finite(cell.nrs_power_dbm, "nrs_power_dbm");
  finite(cell.antenna_gain_dbi, "antenna_gain_dbi");
  finite(cell.selection_threshold_dbm, "selection_threshold_dbm");
  finite(cell.propagation.intercept_db, "pl_intercept_db");
  finite(cell.propagation.slope_db, "pl_slope_db");

  if (cell.dl_boost_db != 0.0 && cell.dl_boost_db != 6.0) {
    errors.push_back({p + ".dl_boost_db", "must be 0 or 6 dB"});
  } else if (const auto cap = cell.cls.max_output_power_dbm()) {
    const double dl = cell.nrs_power_dbm + effective_dl_boost_db(cell.cls, cell.mode, cell.dl_boost_db);
    if (dl > *cap) {
      errors.push_back({p + ".nrs_power_dbm", "DL per-RE power " + std::to_string(dl) + " dBm exceeds the " +
                                                  std::string(to_string(cell.cls.kind())) + " class cap of " +
                                                  std::to_string(*cap) + " dBm"});
    }
  }
  if (cell.role == CellRole::Anchor && !cell.anchor_prb) {
    errors.push_back({p + ".anchor_prb", "anchor cell requires an anchor PRB"});
  }
  if (cell.role == CellRole::NonAnchor && cell.anchor_prb) {
    errors.push_back({p + ".anchor_prb", "non-anchor cell must not carry an anchor PRB"});
  }
  if (cell.ul_p_cmax_dbm && !std::isfinite(*cell.ul_p_cmax_dbm)) {
    errors.push_back({p + ".ul_p_cmax_dbm", "must be finite"});
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

double path_loss_at_distance_db(const PropagationModel& model, double distance_m) {
  const double d_km = std::max(distance_m, kMinDistanceM) / 1000.0;
  return model.intercept_db + model.slope_db * std::log10(d_km);
}

double path_loss_db(const PropagationModel& model, Position tx, Position rx) {
  return path_loss_at_distance_db(model, distance_m(tx, rx));
}

double rsrp_from_path_loss_dbm(const Cell& cell, double path_loss_db) {
  return cell.nrs_power_dbm + cell.antenna_gain_dbi - path_loss_db;
}

double rsrp_dbm(const Cell& cell, Position ue, const PropagationModel& model) {
  return rsrp_from_path_loss_dbm(cell, path_loss_db(model, cell.position, ue));
}

double clamp_coupling_loss_db(const BaseStationClass& cls, double raw_db) {
  if (const auto floor = cls.min_coupling_loss_db()) return std::max(raw_db, *floor);
  return raw_db;
}

double coupling_loss_from_path_loss_db(const Cell& cell, double path_loss_db, double ue_antenna_gain_dbi) {
  return clamp_coupling_loss_db(cell.cls, path_loss_db - cell.antenna_gain_dbi - ue_antenna_gain_dbi);
}

double coupling_loss_db(const Cell& cell, Position ue, double ue_antenna_gain_dbi, const PropagationModel& model) {
  return coupling_loss_from_path_loss_db(cell, path_loss_db(model, cell.position, ue), ue_antenna_gain_dbi);
}

LinkMeasure link_from_path_loss(const Cell& cell, double path_loss_db, double ue_antenna_gain_dbi) {
  return {path_loss_db, coupling_loss_from_path_loss_db(cell, path_loss_db, ue_antenna_gain_dbi),
          rsrp_from_path_loss_dbm(cell, path_loss_db)};
}

double thermal_noise_dbm(double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw InputError("bandwidth must be positive");
  return kThermalNoiseDensityDbmHz + 10.0 * std::log10(bandwidth_hz);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double sum_dbm(std::span<const double> powers_dbm) {
  if (powers_dbm.empty()) return -std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (double p : powers_dbm) total += db_to_linear(p);
  return linear_to_db(total);
}

double ul_sinr_db(const Cell& serving, double signal_dbm, std::span<const ReceivedPower> interferers,
                  double bandwidth_hz) {
  const double noise_dbm = thermal_noise_dbm(bandwidth_hz);
  double interference = 0.0;
  for (const auto& i : interferers) {
    if (i.frequency_index == serving.frequency_index) interference += db_to_linear(i.power_dbm);
  }
  if (interference == 0.0) return signal_dbm - noise_dbm;
  return signal_dbm - linear_to_db(interference + db_to_linear(noise_dbm));
}

double ul_sinr_db(double signal_dbm, std::span<const double> interferers_dbm, double bandwidth_hz) {
  const double noise_dbm = thermal_noise_dbm(bandwidth_hz);
  double interference = 0.0;
  for (double p : interferers_dbm) interference += db_to_linear(p);
  if (interference == 0.0) return signal_dbm - noise_dbm;
  return signal_dbm - linear_to_db(interference + db_to_linear(noise_dbm));
}

}  // namespace nbsim

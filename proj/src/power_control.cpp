#include "nbsim/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nbsim/errors.hpp"

namespace nbsim {

std::string_view to_string(CeLevel level) {
  switch (level) {
    case CeLevel::CE0: return "CE0";
    case CeLevel::CE1: return "CE1";
    case CeLevel::CE2: return "CE2";
    case CeLevel::OutOfCoverage: return "OOC";
  }
  return "?";
}

std::string_view to_string(PcmaxPolicy policy) {
  return policy == PcmaxPolicy::InterferenceSafe ? "interference-safe" : "coverage-first";
}

double m_factor(const SubcarrierAllocation& alloc) {
  if (alloc.spacing == SubcarrierSpacing::k3p75kHz) {
    if (alloc.num_subcarriers != 1) throw InputError("3.75 kHz spacing supports single-tone only");
    return 0.25;
  }
  switch (alloc.num_subcarriers) {
    case 1:
    case 3:
    case 6:
    case 12: return static_cast<double>(alloc.num_subcarriers);
    default: throw InputError("15 kHz allocation must use 1, 3, 6 or 12 subcarriers");
  }
}

void validate(const NpuschPowerParams& p) {
  constexpr std::array<double, 5> kAllowedM{0.25, 1.0, 3.0, 6.0, 12.0};
  if (std::find(kAllowedM.begin(), kAllowedM.end(), p.m_npusch) == kAllowedM.end()) {
    throw InputError("M_NPUSCH must be one of {1/4, 1, 3, 6, 12}");
  }
  if (p.j != 1 && p.j != 2) throw InputError("j must be 1 or 2");
  if (!(p.alpha_j1 >= 0.0 && p.alpha_j1 <= 1.0)) throw InputError("alpha for j=1 must lie in [0, 1]");
  if (p.repetitions < 1) throw InputError("repetitions must be at least 1");
}

double npusch_tx_power_dbm(const NpuschPowerParams& p) {
  validate(p);
  if (p.repetitions >= 2) return p.p_cmax_dbm;
  const double open_loop = 10.0 * std::log10(p.m_npusch) + p.p_o() + p.alpha() * p.path_loss_db;
  return std::min(p.p_cmax_dbm, open_loop);
}

double nprach_tx_power_dbm(double p_cmax_dbm, double preamble_rx_target_dbm, double path_loss_db,
                           CeLevel level) {
  switch (level) {
    case CeLevel::CE0: return std::min(p_cmax_dbm, preamble_rx_target_dbm + path_loss_db);
    case CeLevel::CE1:
    case CeLevel::CE2: return p_cmax_dbm;
    case CeLevel::OutOfCoverage: break;
  }
  throw InputError("no NPRACH transmission outside coverage");
}

double small_cell_p_cmax_dbm(double ue_max_dbm, double cell_configured_dbm, PcmaxPolicy policy) {
  if (cell_configured_dbm > ue_max_dbm) {
    throw ConfigError("ul_p_cmax_dbm", "cell-configured P_CMAX " + std::to_string(cell_configured_dbm) +
                                           " dBm exceeds the UE maximum " + std::to_string(ue_max_dbm) + " dBm");
  }
  return policy == PcmaxPolicy::InterferenceSafe ? cell_configured_dbm : ue_max_dbm;
}

double dl_re_power_dbm(const Cell& cell, const DlPowerPolicy& policy) {
  if (policy.boost_db != 0.0 && policy.boost_db != 6.0) throw InputError("DL boost must be 0 or 6 dB");
  const double power = policy.per_re_power_dbm + effective_dl_boost_db(cell.cls, cell.mode, policy.boost_db);
  if (const auto cap = cell.cls.max_output_power_dbm(); cap && power > *cap) {
    throw ConfigError("nrs_power_dbm", "DL per-RE power " + std::to_string(power) + " dBm exceeds class cap " +
                                           std::to_string(*cap) + " dBm");
  }
  return power;
}

double csg_power_uplift_db(double iot_db, double cap_db) {
  if (!(cap_db >= 0.0)) throw InputError("CSG uplift cap must be nonnegative");
  if (!(iot_db > 0.0)) return 0.0;
  return std::min(iot_db, cap_db);
}

}  // namespace nbsim

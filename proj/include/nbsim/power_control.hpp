#pragma once

#include <array>

#include "nbsim/radio.hpp"

namespace nbsim {

/// Coverage-enhancement level. Also selects the NPRACH power rule.
enum class CeLevel { CE0, CE1, CE2, OutOfCoverage };

std::string_view to_string(CeLevel level);

enum class SubcarrierSpacing { k3p75kHz, k15kHz };

struct SubcarrierAllocation {
  SubcarrierSpacing spacing = SubcarrierSpacing::k15kHz;
  int num_subcarriers = 1;

  bool operator==(const SubcarrierAllocation&) const = default;
};

/// Bandwidth factor M of the open-loop NPUSCH rule: single-tone 3.75 kHz maps
/// to 1/4, n tones at 15 kHz map to n. Throws InputError for any other allocation.
double m_factor(const SubcarrierAllocation& alloc);

/// Inputs to the NPUSCH transmit power rule. The slot and serving-cell
/// indices are implicit in the call site.
struct NpuschPowerParams {
  double p_cmax_dbm = 23.0;
  /// P_O_NPUSCH for j = 1 and j = 2.
  std::array<double, 2> p_o_npusch_dbm{-100.0, -100.0};
  /// Fractional path-loss compensation for j = 1. j = 2 always uses 1.
  double alpha_j1 = 1.0;
  double m_npusch = 1.0;
  double path_loss_db = 0.0;
  int repetitions = 1;
  int j = 1;

  double p_o() const { return p_o_npusch_dbm.at(static_cast<std::size_t>(j - 1)); }
  double alpha() const { return j == 2 ? 1.0 : alpha_j1; }

  bool operator==(const NpuschPowerParams&) const = default;
};

/// Throws InputError when M, alpha, j or the repetition count is out of range.
void validate(const NpuschPowerParams& p);

/// Fewer than two repetitions: min(P_CMAX, 10 log10(M) + P_O(j) + alpha(j) PL).
/// Two or more: P_CMAX exactly.
double npusch_tx_power_dbm(const NpuschPowerParams& p);

/// CE0 follows the open loop toward a preamble receive target; CE1 and CE2
/// transmit at P_CMAX and rely on repetition.
double nprach_tx_power_dbm(double p_cmax_dbm, double preamble_rx_target_dbm, double path_loss_db,
                           CeLevel level);

enum class PcmaxPolicy { InterferenceSafe, CoverageFirst };

std::string_view to_string(PcmaxPolicy policy);

/// P_CMAX a UE applies when served by a small cell that configures a lower
/// cap than the UE supports. Throws ConfigError if the cell value exceeds the UE maximum.
double small_cell_p_cmax_dbm(double ue_max_dbm, double cell_configured_dbm, PcmaxPolicy policy);

struct DlPowerPolicy {
  double per_re_power_dbm = 0.0;
  double boost_db = 0.0;  // 0 or 6
};

/// Per-RE DL transmit power. The boost is dropped for anything other than a
/// wide-area cell in in-band or guard-band mode. Throws ConfigError if the
/// result exceeds the class output cap, InputError for a boost outside {0, 6}.
double dl_re_power_dbm(const Cell& cell, const DlPowerPolicy& policy);

/// Uplift for CSG members: measured interference-over-thermal clamped to [0, cap].
double csg_power_uplift_db(double iot_db, double cap_db);

}  // namespace nbsim

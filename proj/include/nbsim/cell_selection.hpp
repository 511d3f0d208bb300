#pragma once

#include <array>
#include <span>
#include <vector>

#include "nbsim/power_control.hpp"
#include "nbsim/radio.hpp"

namespace nbsim {

enum class SelectionKind {
  RsrpOnly,
  PathLossBased,    // least path loss, recovered from RSRP
  Hybrid,           // path loss in normal coverage, RSRP otherwise
  ClassThresholds,  // RSRP plus a per-class offset
  Decoupled,
};

std::string_view to_string(SelectionKind kind);

struct SelectionPolicy {
  SelectionKind kind = SelectionKind::RsrpOnly;
  /// Hybrid: at or above this best-RSRP the UE is in normal coverage and
  /// path loss decides.
  double normal_coverage_rsrp_threshold_dbm = -80.0;
  /// ClassThresholds: additive RSRP offset per BsClassKind, indexed by enum value.
  std::array<double, 4> class_offset_db{0.0, 0.0, 0.0, 0.0};

  double offset_for(BsClassKind kind) const { return class_offset_db[static_cast<std::size_t>(kind)]; }

  bool operator==(const SelectionPolicy&) const = default;
};

struct CellMeasure {
  int cell_id = 0;
  BsClassKind cls = BsClassKind::WideArea;
  LinkMeasure link;

  bool operator==(const CellMeasure&) const = default;
};

/// One measure per cell. `shadowing_db`, when nonempty, must match `cells` in
/// size and is added to each path loss. Throws InputError on an empty cell list.
std::vector<CellMeasure> measure_links(Position ue, std::span<const Cell> cells, double ue_antenna_gain_dbi = 0.0,
                                       std::span<const double> shadowing_db = {});

/// Path loss recovered from a measured RSRP and the broadcast NRS power and gain.
double path_loss_from_rsrp_db(const Cell& cell, double rsrp_dbm);

/// Applies the policy; ties go to the lowest cell id. Decoupled camps on the
/// strongest RSRP. Throws InputError on empty input.
int select_cell(std::span<const CellMeasure> measures, const SelectionPolicy& policy);

struct Association {
  int dl_cell_id = 0;
  int ul_cell_id = 0;

  bool operator==(const Association&) const = default;
};

/// DL on the strongest RSRP, UL on the least path loss.
Association decoupled_association(std::span<const CellMeasure> measures);

struct CoverageThresholds {
  /// Upper coupling-loss bound of CE0, CE1 and CE2; the last one is the MCL.
  std::array<double, 3> max_coupling_loss_db{144.0, 154.0, 164.0};
  std::array<int, 3> repetitions{1, 8, 32};

  double mcl_db() const { return max_coupling_loss_db[2]; }

  bool operator==(const CoverageThresholds&) const = default;
};

/// Throws InputError unless bounds are strictly increasing and repetitions
/// positive and nondecreasing.
void validate(const CoverageThresholds& t);

struct CoverageLevel {
  CeLevel level = CeLevel::CE0;
  int repetitions = 1;  // 0 when out of coverage

  bool operator==(const CoverageLevel&) const = default;
};

CoverageLevel assign_coverage_level(double coupling_loss_db, const CoverageThresholds& thresholds = {});
/// Level after `level`, saturating at CE2. Repetitions taken from `thresholds`.
CoverageLevel next_coverage_level(CeLevel level, const CoverageThresholds& thresholds = {});

}  // namespace nbsim

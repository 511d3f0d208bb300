#pragma once

// Small-cell deployment architectures and the per-UE attach procedure.
//
// Arch1: every cell is a complete cell with its own S1 link and broadcast.
// Arch2: macro anchors carry S1 and broadcast a neighbor list; small cells are
//        non-anchor eNBs reached over X2 and carry no MIB/SIB.
// Arch3: macro and small cells share one cell identity; all access happens on
//        the macro, which may redirect a UE to a small cell in Msg4 based on
//        preamble reports the small cells relay over X2.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nbsim/cell_selection.hpp"
#include "nbsim/power_control.hpp"
#include "nbsim/radio.hpp"

namespace nbsim {

enum class ArchitectureKind { Arch1, Arch2, Arch3 };

std::string_view to_string(ArchitectureKind kind);

struct Topology {
  ArchitectureKind kind = ArchitectureKind::Arch1;
  std::vector<Cell> cells;
  std::set<int> s1_links;
  /// Undirected; stored with the smaller id first.
  std::set<std::pair<int, int>> x2_links;

  const Cell* find(int cell_id) const;
  const Cell& at(int cell_id) const;
  bool has_s1(int cell_id) const { return s1_links.contains(cell_id); }
  bool has_x2(int a, int b) const;
  void add_x2(int a, int b);

  bool operator==(const Topology&) const = default;
};

struct Violation {
  std::string constraint;  // stable identifier, e.g. "arch2.only-anchor-s1"
  std::vector<int> cell_ids;
  std::string message;
};

/// Every violated architecture constraint, with the offending cells. Empty means valid.
std::vector<Violation> validate_topology(const Topology& t);

struct NonAnchorEntry {
  int cell_id = 0;
  int frequency_index = 0;
  int nrs_config = 0;
  double nrs_power_dbm = 0.0;
  double selection_threshold_dbm = 0.0;

  bool operator==(const NonAnchorEntry&) const = default;
};

/// System information an Arch2 anchor broadcasts for cell selection.
struct BroadcastInfo {
  int anchor_id = 0;
  std::vector<int> anchor_list;
  std::vector<NonAnchorEntry> non_anchors;
};

/// Throws UsageError unless `t` is Arch2 and `anchor` has the anchor role.
BroadcastInfo build_broadcast(const Cell& anchor, const Topology& t);

namespace attach_state {
struct Idle {
  bool operator==(const Idle&) const = default;
};
struct Synchronized {
  int cell_id = 0;
  bool operator==(const Synchronized&) const = default;
};
struct BroadcastAcquired {
  int cell_id = 0;
  bool operator==(const BroadcastAcquired&) const = default;
};
struct RachInProgress {
  int attempt = 1;
  int target = 0;
  bool operator==(const RachInProgress&) const = default;
};
struct Granted {
  int cell_id = 0;
  bool operator==(const Granted&) const = default;
};
struct Connected {
  Association association;
  bool operator==(const Connected&) const = default;
};
enum class FailureReason { OutOfCoverage, RachFailure };
struct Failed {
  FailureReason reason = FailureReason::OutOfCoverage;
  bool operator==(const Failed&) const = default;
};
}  // namespace attach_state

using UeAttachState =
    std::variant<attach_state::Idle, attach_state::Synchronized, attach_state::BroadcastAcquired,
                 attach_state::RachInProgress, attach_state::Granted, attach_state::Connected, attach_state::Failed>;

std::string_view state_name(const UeAttachState& s);
bool is_terminal(const UeAttachState& s);
/// Legal moves: one step forward, RACH re-attempt, or Failed from any non-terminal state.
bool can_transition(const UeAttachState& from, const UeAttachState& to);

/// One line of an attach trace. Absent fields print as "-".
struct TraceEvent {
  int step = 0;
  int ue_id = 0;
  std::string label;
  std::optional<int> cell_id;
  std::optional<double> rsrp_dbm;
  std::optional<double> path_loss_db;

  bool operator==(const TraceEvent&) const = default;
};

/// `t=<step> ue=<id> <LABEL> cell=<id> rsrp=<dBm> pl=<dB>`, no trailing newline.
std::string format_trace_line(const TraceEvent& e);

struct UeDevice {
  int id = 0;
  Position position;
  double max_output_power_dbm = 23.0;
  double antenna_gain_dbi = 0.0;
};

struct AttachParams {
  CoverageThresholds coverage;
  double preamble_rx_target_dbm = -110.0;
  double detection_threshold_db = 0.0;
  double redirect_snr_threshold_db = 0.0;
  int max_attempts = 3;
  PcmaxPolicy pcmax_policy = PcmaxPolicy::InterferenceSafe;
  /// Serve DL and UL from separate cells even when the policy is not Decoupled.
  bool decoupled = false;
  /// Cells that refuse this UE (closed subscriber groups it is not part of).
  std::set<int> barred_cells;
  /// Stream seed for random-access resource choice.
  std::uint64_t seed = 0;
};

struct RaResource {
  int prb = 0;
  int subcarrier = 0;  // 0..47
  int time_offset = 0;  // 0..3
};

struct PreambleReport {
  int small_cell_id = 0;
  int ue_id = 0;
  bool received = false;
  /// Present only when received.
  std::optional<double> measured_ul_snr_db;
};

enum class Msg4Decision { Stay, RedirectToSmallCell };

struct AttachResult {
  UeAttachState state;
  std::vector<TraceEvent> trace;
  std::optional<Association> association;
  CoverageLevel coverage{CeLevel::OutOfCoverage, 0};
  int rach_attempts = 0;
  double nprach_tx_power_dbm = 0.0;
  std::optional<RaResource> ra_resource;
  std::vector<PreambleReport> preamble_reports;
  bool redirected = false;
};

/// P_CMAX for a UE served by `cell`: a small cell's configured cap filtered by
/// the policy, otherwise the UE maximum.
double serving_p_cmax_dbm(const Cell& cell, double ue_max_dbm, PcmaxPolicy policy);

/// Runs the attach procedure for `ue`. `measures` must list every topology
/// cell in topology order; it carries shadowing when the caller models it.
/// The topology must already be valid.
AttachResult attach(const UeDevice& ue, const Topology& t, std::span<const CellMeasure> measures,
                    const SelectionPolicy& policy, const AttachParams& params);
/// Same, measuring the links without shadowing.
AttachResult attach(const UeDevice& ue, const Topology& t, const SelectionPolicy& policy,
                    const AttachParams& params);

/// Small-cell reception of an Arch3 preamble sent to the macro. Throws
/// UsageError for other architectures or a non-small cell.
PreambleReport preamble_report(const Topology& t, const Cell& small_cell, const UeDevice& ue,
                               const LinkMeasure& link, double nprach_tx_power_dbm,
                               double detection_threshold_db = 0.0);
PreambleReport preamble_report(const Topology& t, const Cell& small_cell, const UeDevice& ue,
                               double nprach_tx_power_dbm, double detection_threshold_db = 0.0);

Msg4Decision msg4_redirect(const PreambleReport& report, double redirect_snr_threshold_db);

}  // namespace nbsim

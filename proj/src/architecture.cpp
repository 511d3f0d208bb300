#include "nbsim/architecture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "nbsim/errors.hpp"
#include "nbsim/rng.hpp"

namespace nbsim {

std::string_view to_string(ArchitectureKind kind) {
  switch (kind) {
    case ArchitectureKind::Arch1: return "arch1";
    case ArchitectureKind::Arch2: return "arch2";
    case ArchitectureKind::Arch3: return "arch3";
  }
  return "?";
}

const Cell* Topology::find(int cell_id) const {
  const auto it = std::find_if(cells.begin(), cells.end(), [&](const Cell& c) { return c.id == cell_id; });
  return it == cells.end() ? nullptr : &*it;
}

const Cell& Topology::at(int cell_id) const {
  if (const Cell* c = find(cell_id)) return *c;
  throw InputError("unknown cell id " + std::to_string(cell_id));
}

bool Topology::has_x2(int a, int b) const { return x2_links.contains({std::min(a, b), std::max(a, b)}); }

void Topology::add_x2(int a, int b) { x2_links.insert({std::min(a, b), std::max(a, b)}); }

// ---------------------------------------------------------------------------
// Topology validation

namespace {

class ViolationSink {
 public:
  void add(std::string constraint, std::vector<int> ids, std::string message) {
    out_.push_back({std::move(constraint), std::move(ids), std::move(message)});
  }
  // Groups offenders of one constraint into a single violation.
  void add_if_any(const std::string& constraint, const std::vector<int>& ids, const std::string& message) {
    if (!ids.empty()) add(constraint, ids, message);
  }
  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

bool is_macro(const Cell& c) { return c.cls.kind() == BsClassKind::WideArea; }

// Macros X2-linked to `small`.
std::vector<int> x2_macros(const Topology& t, const Cell& small) {
  std::vector<int> out;
  for (const Cell& c : t.cells) {
    if (is_macro(c) && t.has_x2(c.id, small.id)) out.push_back(c.id);
  }
  return out;
}

void check_arch1(const Topology& t, ViolationSink& sink) {
  std::vector<int> no_s1, no_sysinfo, incomplete;
  for (const Cell& c : t.cells) {
    if (!t.has_s1(c.id)) no_s1.push_back(c.id);
    if (!c.system_info) no_sysinfo.push_back(c.id);
    if (c.role != CellRole::Anchor || !c.prach_paging) incomplete.push_back(c.id);
  }
  sink.add_if_any("arch1.own-s1", no_s1, "every cell must connect to the core network through its own S1");
  sink.add_if_any("arch1.own-mib-sib", no_sysinfo, "every cell must broadcast its own MIB/SIB");
  sink.add_if_any("arch1.complete-cell", incomplete,
                  "every cell must be a complete cell with an anchor PRB and its own access resources");
}

void check_arch2(const Topology& t, ViolationSink& sink) {
  std::vector<int> role_mismatch, non_anchor_s1, anchor_no_s1, no_x2, non_anchor_sysinfo, anchor_no_sysinfo;
  for (const Cell& c : t.cells) {
    const bool anchor = c.role == CellRole::Anchor;
    if (anchor != is_macro(c)) role_mismatch.push_back(c.id);
    if (anchor) {
      if (!t.has_s1(c.id)) anchor_no_s1.push_back(c.id);
      if (!c.system_info) anchor_no_sysinfo.push_back(c.id);
      continue;
    }
    if (t.has_s1(c.id)) non_anchor_s1.push_back(c.id);
    if (c.system_info) non_anchor_sysinfo.push_back(c.id);
    const bool linked = std::any_of(t.cells.begin(), t.cells.end(), [&](const Cell& a) {
      return a.role == CellRole::Anchor && t.has_x2(a.id, c.id);
    });
    if (!linked) no_x2.push_back(c.id);
  }
  sink.add_if_any("arch2.anchor-is-macro", role_mismatch,
                  "the macro cell must be the anchor eNB and small cells non-anchor eNBs");
  sink.add_if_any("arch2.only-anchor-s1", non_anchor_s1, "non-anchor must not have S1");
  sink.add_if_any("arch2.anchor-s1", anchor_no_s1, "anchor eNB must have an S1 connection");
  sink.add_if_any("arch2.non-anchor-x2", no_x2, "non-anchor eNB must be X2-linked to an anchor eNB");
  sink.add_if_any("arch2.non-anchor-no-mib-sib", non_anchor_sysinfo, "non-anchor eNB must not broadcast MIB/SIB");
  sink.add_if_any("arch2.anchor-mib-sib", anchor_no_sysinfo, "anchor eNB must broadcast MIB/SIB");
}

void check_arch3(const Topology& t, ViolationSink& sink) {
  std::vector<int> small_s1, macro_no_s1, identity, no_macro_link, prach, sysinfo, small_anchor, macro_role;
  for (const Cell& c : t.cells) {
    if (is_macro(c)) {
      if (!t.has_s1(c.id)) macro_no_s1.push_back(c.id);
      if (c.role != CellRole::Anchor || !c.system_info || !c.prach_paging) macro_role.push_back(c.id);
      continue;
    }
    if (t.has_s1(c.id)) small_s1.push_back(c.id);
    if (c.prach_paging) prach.push_back(c.id);
    if (c.system_info) sysinfo.push_back(c.id);
    if (c.role != CellRole::NonAnchor) small_anchor.push_back(c.id);
    const auto macros = x2_macros(t, c);
    if (macros.empty()) {
      no_macro_link.push_back(c.id);
      continue;
    }
    for (int m : macros) {
      if (t.at(m).cell_identity != c.cell_identity) {
        identity.push_back(c.id);
        break;
      }
    }
  }
  sink.add_if_any("arch3.only-macro-s1", small_s1, "only the macro eNB may have an S1 connection");
  sink.add_if_any("arch3.macro-s1", macro_no_s1, "macro eNB must have an S1 connection");
  sink.add_if_any("arch3.primary-cell", macro_role,
                  "macro must be the primary cell carrying MIB/SIB, PRACH and paging");
  sink.add_if_any("arch3.x2-to-macro", no_macro_link, "small cell must have an X2-like link to a macro");
  sink.add_if_any("arch3.shared-cell-identity", identity,
                  "small cell must be configured with the same cell identity as its macro");
  sink.add_if_any("arch3.no-small-cell-prach-paging", prach,
                  "small cells get no PRACH and paging resources");
  sink.add_if_any("arch3.no-small-cell-mib-sib", sysinfo, "small cells broadcast no MIB/SIB");
  sink.add_if_any("arch3.small-cell-non-anchor", small_anchor, "small cells carry only non-anchor carriers");
}

}  // namespace

std::vector<Violation> validate_topology(const Topology& t) {
  ViolationSink sink;
  if (t.cells.empty()) {
    sink.add("topology.nonempty", {}, "topology has no cells");
    return sink.take();
  }

  std::map<int, int> id_count;
  for (const Cell& c : t.cells) ++id_count[c.id];
  std::vector<int> dup;
  for (const auto& [id, n] : id_count) {
    if (n > 1) dup.push_back(id);
  }
  sink.add_if_any("topology.unique-cell-ids", dup, "cell ids must be unique");

  std::vector<int> dangling;
  for (int id : t.s1_links) {
    if (!t.find(id)) dangling.push_back(id);
  }
  for (const auto& [a, b] : t.x2_links) {
    if (!t.find(a)) dangling.push_back(a);
    if (!t.find(b)) dangling.push_back(b);
    if (a == b) dangling.push_back(a);
  }
  sink.add_if_any("topology.link-endpoints", dangling, "S1/X2 links must connect existing, distinct cells");

  for (const Cell& c : t.cells) {
    try {
      validate_cell(c, "cell[" + std::to_string(c.id) + "]");
    } catch (const ConfigError& e) {
      sink.add("cell.invariants", {c.id}, e.what());
    }
  }

  if (std::none_of(t.cells.begin(), t.cells.end(), is_macro)) {
    sink.add("topology.macro-present", {}, "small cells must lie within the coverage of a macro cell");
  }

  switch (t.kind) {
    case ArchitectureKind::Arch1: check_arch1(t, sink); break;
    case ArchitectureKind::Arch2: check_arch2(t, sink); break;
    case ArchitectureKind::Arch3: check_arch3(t, sink); break;
  }
  return sink.take();
}

BroadcastInfo build_broadcast(const Cell& anchor, const Topology& t) {
  if (t.kind != ArchitectureKind::Arch2) throw UsageError("neighbor-list broadcast exists only in Arch2");
  if (anchor.role != CellRole::Anchor) {
    throw UsageError("cell " + std::to_string(anchor.id) + " is not an anchor eNB");
  }
  BroadcastInfo info;
  info.anchor_id = anchor.id;
  for (const Cell& c : t.cells) {
    if (c.role == CellRole::Anchor) {
      info.anchor_list.push_back(c.id);
    } else if (t.has_x2(anchor.id, c.id)) {
      info.non_anchors.push_back(
          {c.id, c.frequency_index, c.nrs_config, c.nrs_power_dbm, c.selection_threshold_dbm});
    }
  }
  return info;
}

// ---------------------------------------------------------------------------
// Attach state machine

namespace {

int state_rank(const UeAttachState& s) { return static_cast<int>(s.index()); }

constexpr int kConnectedRank = 5;
constexpr int kFailedRank = 6;

}  // namespace

std::string_view state_name(const UeAttachState& s) {
  constexpr std::array<std::string_view, 7> kNames{
      "IDLE", "SYNCHRONIZED", "BROADCAST_ACQUIRED", "RACH", "GRANTED", "CONNECTED", "FAILED"};
  return kNames[s.index()];
}

bool is_terminal(const UeAttachState& s) {
  const int r = state_rank(s);
  return r == kConnectedRank || r == kFailedRank;
}

bool can_transition(const UeAttachState& from, const UeAttachState& to) {
  if (is_terminal(from)) return false;
  const int a = state_rank(from);
  const int b = state_rank(to);
  if (b == kFailedRank) return true;
  if (std::holds_alternative<attach_state::RachInProgress>(from) &&
      std::holds_alternative<attach_state::RachInProgress>(to)) {
    return std::get<attach_state::RachInProgress>(to).attempt ==
           std::get<attach_state::RachInProgress>(from).attempt + 1;
  }
  return b == a + 1;
}

std::string format_trace_line(const TraceEvent& e) {
  auto num = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return std::string(buf);
  };
  std::string line = "t=" + std::to_string(e.step) + " ue=" + std::to_string(e.ue_id) + " " + e.label;
  line += " cell=" + (e.cell_id ? std::to_string(*e.cell_id) : std::string("-"));
  line += " rsrp=" + num(e.rsrp_dbm);
  line += " pl=" + num(e.path_loss_db);
  return line;
}

double serving_p_cmax_dbm(const Cell& cell, double ue_max_dbm, PcmaxPolicy policy) {
  if (cell.cls.is_small_cell() && cell.ul_p_cmax_dbm) {
    return small_cell_p_cmax_dbm(ue_max_dbm, *cell.ul_p_cmax_dbm, policy);
  }
  return ue_max_dbm;
}

PreambleReport preamble_report(const Topology& t, const Cell& small_cell, const UeDevice& ue,
                               const LinkMeasure& link, double nprach_tx_power_dbm,
                               double detection_threshold_db) {
  if (t.kind != ArchitectureKind::Arch3) throw UsageError("preamble reports are an Arch3 procedure");
  if (!small_cell.cls.is_small_cell()) throw UsageError("preamble reports come from small cells");
  const double snr = nprach_tx_power_dbm - link.coupling_loss_db - thermal_noise_dbm(kCarrierBandwidthHz);
  PreambleReport r{small_cell.id, ue.id, snr >= detection_threshold_db, std::nullopt};
  if (r.received) r.measured_ul_snr_db = snr;
  return r;
}

PreambleReport preamble_report(const Topology& t, const Cell& small_cell, const UeDevice& ue,
                               double nprach_tx_power_dbm, double detection_threshold_db) {
  const double pl = path_loss_db(small_cell.propagation, small_cell.position, ue.position);
  return preamble_report(t, small_cell, ue, link_from_path_loss(small_cell, pl, ue.antenna_gain_dbi),
                         nprach_tx_power_dbm, detection_threshold_db);
}

Msg4Decision msg4_redirect(const PreambleReport& report, double redirect_snr_threshold_db) {
  if (report.received && report.measured_ul_snr_db && *report.measured_ul_snr_db >= redirect_snr_threshold_db) {
    return Msg4Decision::RedirectToSmallCell;
  }
  return Msg4Decision::Stay;
}

namespace {

class AttachRun {
 public:
  AttachRun(const UeDevice& ue, const Topology& t, std::span<const CellMeasure> measures,
            const SelectionPolicy& policy, const AttachParams& params)
      : ue_(ue), t_(t), measures_(measures), policy_(policy), params_(params) {
    if (measures_.size() != t_.cells.size()) throw InputError("one measure per topology cell is required");
    result_.state = attach_state::Idle{};
    log("IDLE", std::nullopt);
  }

  AttachResult run() {
    switch (t_.kind) {
      case ArchitectureKind::Arch1: run_arch1(); break;
      case ArchitectureKind::Arch2: run_arch2(); break;
      case ArchitectureKind::Arch3: run_arch3(); break;
    }
    return std::move(result_);
  }

 private:
  bool decoupled() const { return params_.decoupled || policy_.kind == SelectionKind::Decoupled; }

  const CellMeasure& measure(int cell_id) const {
    for (const auto& m : measures_) {
      if (m.cell_id == cell_id) return m;
    }
    throw InputError("no measure for cell " + std::to_string(cell_id));
  }

  bool usable(const CellMeasure& m) const {
    return m.link.coupling_loss_db <= params_.coverage.mcl_db() && !params_.barred_cells.contains(m.cell_id);
  }

  void log(std::string label, std::optional<int> cell) {
    TraceEvent e{step_++, ue_.id, std::move(label), cell, std::nullopt, std::nullopt};
    if (cell) {
      const auto& m = measure(*cell);
      e.rsrp_dbm = m.link.rsrp_dbm;
      e.path_loss_db = m.link.path_loss_db;
    }
    result_.trace.push_back(std::move(e));
  }

  void move_to(UeAttachState next, std::optional<int> cell, std::string label = {}) {
    if (!can_transition(result_.state, next)) {
      throw std::logic_error("illegal attach transition " + std::string(state_name(result_.state)) + " -> " +
                             std::string(state_name(next)));
    }
    if (label.empty()) label = std::string(state_name(next));
    result_.state = std::move(next);
    log(std::move(label), cell);
  }

  void fail(attach_state::FailureReason reason, std::optional<int> cell) {
    move_to(attach_state::Failed{reason}, cell,
            reason == attach_state::FailureReason::OutOfCoverage ? "FAILED_OUT_OF_COVERAGE" : "FAILED_RACH");
  }

  void measure_event(int cell_id) { log("MEASURE", cell_id); }

  std::vector<CellMeasure> usable_among(const std::vector<int>& ids) const {
    std::vector<CellMeasure> out;
    for (int id : ids) {
      const auto& m = measure(id);
      if (usable(m)) out.push_back(m);
    }
    return out;
  }

  // Preamble attempts toward `target`, escalating CE level after each miss.
  bool rach(int target) {
    const auto& m = measure(target);
    const Cell& cell = t_.at(target);
    const double p_cmax = serving_p_cmax_dbm(cell, ue_.max_output_power_dbm, params_.pcmax_policy);
    const double noise = thermal_noise_dbm(kCarrierBandwidthHz);
    CoverageLevel level = assign_coverage_level(m.link.coupling_loss_db, params_.coverage);
    for (int attempt = 1; attempt <= params_.max_attempts; ++attempt) {
      move_to(attach_state::RachInProgress{attempt, target}, target);
      result_.rach_attempts = attempt;
      const double tx = nprach_tx_power_dbm(p_cmax, params_.preamble_rx_target_dbm, m.link.path_loss_db, level.level);
      result_.nprach_tx_power_dbm = tx;
      const double snr = tx - m.link.coupling_loss_db - noise + 10.0 * std::log10(level.repetitions);
      if (snr >= params_.detection_threshold_db) return true;
      level = next_coverage_level(level.level, params_.coverage);
    }
    fail(attach_state::FailureReason::RachFailure, target);
    return false;
  }

  void connect(Association a) {
    result_.association = a;
    result_.coverage = assign_coverage_level(measure(a.ul_cell_id).link.coupling_loss_db, params_.coverage);
    move_to(attach_state::Connected{a}, a.ul_cell_id);
  }

  // Pick the serving cell(s) from `candidates`; returns (association, RACH target).
  std::pair<Association, int> choose(const std::vector<CellMeasure>& candidates) const {
    if (decoupled()) {
      const auto a = decoupled_association(candidates);
      return {a, a.ul_cell_id};
    }
    const int id = select_cell(candidates, policy_);
    return {{id, id}, id};
  }

  std::vector<int> all_ids() const {
    std::vector<int> ids;
    for (const Cell& c : t_.cells) ids.push_back(c.id);
    return ids;
  }

  void run_arch1() {
    for (const Cell& c : t_.cells) measure_event(c.id);
    const auto candidates = usable_among(all_ids());
    if (candidates.empty()) return fail(attach_state::FailureReason::OutOfCoverage, std::nullopt);
    const auto [association, target] = choose(candidates);
    move_to(attach_state::Synchronized{association.dl_cell_id}, association.dl_cell_id);
    move_to(attach_state::BroadcastAcquired{association.dl_cell_id}, association.dl_cell_id);
    if (!rach(target)) return;
    move_to(attach_state::Granted{target}, target);
    connect(association);
  }

  void run_arch2() {
    std::vector<int> anchors;
    for (const Cell& c : t_.cells) {
      if (c.role == CellRole::Anchor) {
        anchors.push_back(c.id);
        measure_event(c.id);
      }
    }
    const auto usable_anchors = usable_among(anchors);
    if (usable_anchors.empty()) return fail(attach_state::FailureReason::OutOfCoverage, std::nullopt);
    SelectionPolicy strongest;
    const int sync = select_cell(usable_anchors, strongest);
    move_to(attach_state::Synchronized{sync}, sync);
    const BroadcastInfo info = build_broadcast(t_.at(sync), t_);
    move_to(attach_state::BroadcastAcquired{sync}, sync);

    auto candidates = usable_anchors;
    for (const auto& entry : info.non_anchors) {
      measure_event(entry.cell_id);
      const auto& m = measure(entry.cell_id);
      if (usable(m) && m.link.rsrp_dbm >= entry.selection_threshold_dbm) candidates.push_back(m);
    }
    const auto [association, target] = choose(candidates);

    Rng rng(derive_seed(params_.seed, {static_cast<std::uint64_t>(ue_.id), 0x52414348ULL}));
    const Cell& cell = t_.at(target);
    RaResource ra;
    if (!cell.non_anchor_prbs.empty()) {
      ra.prb = cell.non_anchor_prbs[rng.below(cell.non_anchor_prbs.size())];
    } else {
      ra.prb = cell.anchor_prb.value_or(0);
    }
    ra.subcarrier = static_cast<int>(rng.below(48));
    ra.time_offset = static_cast<int>(rng.below(4));
    result_.ra_resource = ra;

    if (!rach(target)) return;
    // Grants travel through the anchor; non-anchors have no broadcast of their own.
    move_to(attach_state::Granted{target}, sync);
    connect(association);
  }

  void run_arch3() {
    std::vector<int> macros;
    for (const Cell& c : t_.cells) {
      measure_event(c.id);
      if (is_macro(c)) macros.push_back(c.id);
    }
    const auto usable_macros = usable_among(macros);
    if (usable_macros.empty()) return fail(attach_state::FailureReason::OutOfCoverage, std::nullopt);
    SelectionPolicy strongest;
    const int macro = select_cell(usable_macros, strongest);
    move_to(attach_state::Synchronized{macro}, macro);
    move_to(attach_state::BroadcastAcquired{macro}, macro);
    if (!rach(macro)) return;
    move_to(attach_state::Granted{macro}, macro);

    const PreambleReport* best = nullptr;
    for (const Cell& c : t_.cells) {
      if (is_macro(c) || !t_.has_x2(macro, c.id) || !usable(measure(c.id))) continue;
      result_.preamble_reports.push_back(preamble_report(t_, c, ue_, measure(c.id).link,
                                                         result_.nprach_tx_power_dbm,
                                                         params_.detection_threshold_db));
    }
    for (const auto& r : result_.preamble_reports) {
      if (!r.received) continue;
      if (!best || *r.measured_ul_snr_db > *best->measured_ul_snr_db) best = &r;
    }
    Association association{macro, macro};
    if (best && msg4_redirect(*best, params_.redirect_snr_threshold_db) == Msg4Decision::RedirectToSmallCell) {
      result_.redirected = true;
      log("REDIRECT", best->small_cell_id);
      association.ul_cell_id = best->small_cell_id;
      if (!decoupled()) association.dl_cell_id = best->small_cell_id;
    }
    connect(association);
  }

  const UeDevice& ue_;
  const Topology& t_;
  std::span<const CellMeasure> measures_;
  const SelectionPolicy& policy_;
  const AttachParams& params_;
  AttachResult result_;
  int step_ = 0;
};

}  // namespace

AttachResult attach(const UeDevice& ue, const Topology& t, std::span<const CellMeasure> measures,
                    const SelectionPolicy& policy, const AttachParams& params) {
  return AttachRun(ue, t, measures, policy, params).run();
}

AttachResult attach(const UeDevice& ue, const Topology& t, const SelectionPolicy& policy,
                    const AttachParams& params) {
  const auto measures = measure_links(ue.position, t.cells, ue.antenna_gain_dbi);
  return attach(ue, t, measures, policy, params);
}

}  // namespace nbsim

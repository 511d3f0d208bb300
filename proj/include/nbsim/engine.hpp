#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nbsim/architecture.hpp"
#include "nbsim/cell_selection.hpp"
#include "nbsim/power_control.hpp"
#include "nbsim/radio.hpp"

namespace nbsim {

enum class DropDistribution { UniformDisc, Hotspot };

std::string_view to_string(DropDistribution d);

struct DropRegion {
  DropDistribution distribution = DropDistribution::UniformDisc;
  Position center;        // UniformDisc
  double radius_m = 500.0;
  int hotspot_cell = 0;   // Hotspot: disc around this cell

  bool operator==(const DropRegion&) const = default;
};

struct PowerSettings {
  double ue_max_dbm = 23.0;
  std::array<double, 2> p_o_npusch_dbm{-100.0, -100.0};
  double alpha_j1 = 1.0;
  int j = 1;
  SubcarrierAllocation allocation;
  PcmaxPolicy pcmax_policy = PcmaxPolicy::InterferenceSafe;
  double nprach_target_dbm = -110.0;
  double csg_uplift_cap_db = 6.0;

  bool operator==(const PowerSettings&) const = default;
};

struct RachSettings {
  int max_attempts = 3;
  double detection_threshold_db = 0.0;
  double redirect_snr_threshold_db = 0.0;

  bool operator==(const RachSettings&) const = default;
};

struct ScenarioFlags {
  /// Open-loop NPUSCH power uses the smallest co-channel path loss instead of the serving one.
  bool protect_macro_ul = false;
  /// Home cells admit only UEs within csg_radius_m and raise their members' power.
  bool csg_mode = false;
  bool decoupled = false;

  bool operator==(const ScenarioFlags&) const = default;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  Topology topology;
  int ue_count = 1;
  int drops = 1;
  DropRegion drop;
  /// UEs placed at fixed positions in every drop, after the random ones.
  std::vector<Position> fixed_ues;
  SelectionPolicy policy;
  PowerSettings power;
  CoverageThresholds coverage;
  RachSettings rach;
  double shadowing_sigma_db = 0.0;
  double ue_antenna_gain_dbi = 0.0;
  ScenarioFlags flags;
  double csg_radius_m = 50.0;
  /// Reported only; the snapshot model has no clock.
  double x2_latency_ms = 0.0;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Throws ConfigError listing every invariant breach, including topology violations.
void validate_config(const ScenarioConfig& config);

struct UeMetrics {
  int ue_id = 0;
  Position position;
  std::string outcome;  // "connected", "failed_out_of_coverage", "failed_rach"
  std::optional<Association> association;
  CoverageLevel coverage{CeLevel::OutOfCoverage, 0};
  std::optional<double> tx_power_dbm;
  double energy_proxy_mj = 0.0;
  double best_coupling_loss_db = 0.0;
  bool redirected = false;
  bool csg_member = false;
  std::vector<TraceEvent> trace;
};

struct CellMetrics {
  int cell_id = 0;
  /// Empty when no co-channel UE transmits toward another cell.
  std::optional<double> interference_dbm;
  std::optional<double> iot_db;
};

struct MetricsReport {
  int drop_index = 0;
  std::vector<UeMetrics> ues;
  std::vector<CellMetrics> cells;
  double coverage_probability = 0.0;
  double attach_success_rate = 0.0;
  std::optional<double> mean_tx_power_dbm;
  /// Arch3 only: fraction of connected UEs redirected to a small cell.
  std::optional<double> redirect_rate;
  double x2_latency_ms = 0.0;

  const CellMetrics* cell(int id) const;
};

struct RunOptions {
  bool collect_traces = false;
};

/// Random UE positions of one drop, deterministic in (seed, drop_index).
std::vector<Position> drop_ues(const ScenarioConfig& config, int drop_index);

/// repetitions x linear transmit power (mW) x 1 ms, in mJ.
double energy_proxy_mj(int repetitions, double tx_power_dbm);

/// A transmitting UE as seen by every cell.
struct UplinkEmitter {
  int serving_cell_id = 0;
  double tx_power_dbm = 0.0;
  /// Coupling loss toward each topology cell, in topology order.
  std::vector<double> coupling_loss_db;
};

/// Co-channel interference each cell receives, in mW, topology order.
/// A UE never interferes with its own serving cell.
std::vector<double> uplink_interference_mw(const Topology& t, std::span<const UplinkEmitter> emitters);

MetricsReport run_drop(const ScenarioConfig& config, int drop_index, const RunOptions& options = {});

struct Stat {
  int count = 0;
  double mean = 0.0;
  double p5 = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
};

/// Linear-interpolated percentiles over the defined samples; count 0 when none.
Stat summarize(std::vector<double> samples);

struct CampaignSummary {
  int drops = 0;
  Stat coverage_probability;
  Stat attach_success_rate;
  Stat mean_tx_power_dbm;
  Stat redirect_rate;
  std::map<int, Stat> cell_iot_db;
};

struct CampaignResult {
  std::vector<MetricsReport> drops;
  CampaignSummary summary;
};

/// Runs every drop; drops execute in parallel but results are in drop order.
CampaignResult run_campaign(const ScenarioConfig& config, const RunOptions& options = {});

enum class PresetScenario { Fig3a, Fig3b, Homogeneous, DecoupledDemo };

std::string_view to_string(PresetScenario p);
/// Accepts "fig3a", "fig3b", "homogeneous", "decoupled-demo". Throws ConfigError otherwise.
PresetScenario parse_preset(std::string_view name);

/// Built-in scenario with `overrides` (config keys, see config.hpp) applied on top.
/// Unknown keys raise ConfigError.
ScenarioConfig expand_preset(PresetScenario p, const std::map<std::string, std::string>& overrides = {});

}  // namespace nbsim

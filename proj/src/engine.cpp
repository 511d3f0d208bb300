#include "nbsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "nbsim/errors.hpp"
#include "nbsim/rng.hpp"

namespace nbsim {
namespace {

constexpr std::uint64_t kDropStream = 0x44524f50;   // "DROP"
constexpr std::uint64_t kShadowStream = 0x53484144; // "SHAD"
constexpr std::uint64_t kAccessStream = 0x52414343; // "RACC"

std::string outcome_of(const UeAttachState& s) {
  if (std::holds_alternative<attach_state::Connected>(s)) return "connected";
  if (const auto* f = std::get_if<attach_state::Failed>(&s)) {
    return f->reason == attach_state::FailureReason::OutOfCoverage ? "failed_out_of_coverage" : "failed_rach";
  }
  return "incomplete";
}

std::size_t index_of(const Topology& t, int cell_id) {
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    if (t.cells[i].id == cell_id) return i;
  }
  throw InputError("unknown cell id " + std::to_string(cell_id));
}

}  // namespace

std::string_view to_string(DropDistribution d) {
  return d == DropDistribution::UniformDisc ? "uniform-disc" : "hotspot";
}

void validate_config(const ScenarioConfig& c) {
  std::vector<FieldError> errors;
  if (c.ue_count < 1) errors.push_back({"ue_count", "must be at least 1"});
  if (c.drops < 1) errors.push_back({"drops", "must be at least 1"});
  if (!(c.drop.radius_m >= 0.0) || !std::isfinite(c.drop.radius_m)) {
    errors.push_back({"drop.radius_m", "must be a finite nonnegative distance"});
  }
  if (c.drop.distribution == DropDistribution::Hotspot && !c.topology.find(c.drop.hotspot_cell)) {
    errors.push_back({"drop.hotspot_cell", "no cell with id " + std::to_string(c.drop.hotspot_cell)});
  }
  if (c.policy.kind == SelectionKind::Hybrid && !std::isfinite(c.policy.normal_coverage_rsrp_threshold_dbm)) {
    errors.push_back({"policy.normal_coverage_rsrp_threshold_dbm", "must be finite"});
  }
  for (double o : c.policy.class_offset_db) {
    if (!std::isfinite(o)) {
      errors.push_back({"policy.offset", "class offsets must be finite"});
      break;
    }
  }
  try {
    NpuschPowerParams probe;
    probe.m_npusch = m_factor(c.power.allocation);
    probe.alpha_j1 = c.power.alpha_j1;
    probe.j = c.power.j;
    validate(probe);
  } catch (const InputError& e) {
    errors.push_back({"power", e.what()});
  }
  if (!(c.power.csg_uplift_cap_db >= 0.0)) errors.push_back({"power.csg_uplift_cap_db", "must be nonnegative"});
  try {
    validate(c.coverage);
  } catch (const InputError& e) {
    errors.push_back({"coverage", e.what()});
  }
  if (c.rach.max_attempts < 1) errors.push_back({"rach.max_attempts", "must be at least 1"});
  if (!(c.shadowing_sigma_db >= 0.0)) errors.push_back({"radio.shadowing_sigma_db", "must be nonnegative"});
  if (!(c.csg_radius_m >= 0.0)) errors.push_back({"flags.csg_radius_m", "must be nonnegative"});
  for (const Cell& cell : c.topology.cells) {
    if (cell.ul_p_cmax_dbm && *cell.ul_p_cmax_dbm > c.power.ue_max_dbm) {
      errors.push_back({"cell[" + std::to_string(cell.id) + "].ul_p_cmax_dbm", "exceeds power.ue_max_dbm"});
    }
  }
  for (const auto& v : validate_topology(c.topology)) {
    std::string ids;
    for (int id : v.cell_ids) ids += (ids.empty() ? "" : ",") + std::to_string(id);
    errors.push_back({"topology", v.constraint + ": " + v.message + (ids.empty() ? "" : " (cells " + ids + ")")});
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

const CellMetrics* MetricsReport::cell(int id) const {
  for (const auto& c : cells) {
    if (c.cell_id == id) return &c;
  }
  return nullptr;
}

std::vector<Position> drop_ues(const ScenarioConfig& config, int drop_index) {
  Rng rng(derive_seed(config.seed, {static_cast<std::uint64_t>(drop_index), kDropStream}));
  Position center = config.drop.center;
  if (config.drop.distribution == DropDistribution::Hotspot) {
    center = config.topology.at(config.drop.hotspot_cell).position;
  }
  std::vector<Position> out;
  out.reserve(static_cast<std::size_t>(std::max(config.ue_count, 0)));
  for (int i = 0; i < config.ue_count; ++i) {
    const double r = config.drop.radius_m * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    out.push_back({center.x + r * std::cos(theta), center.y + r * std::sin(theta)});
  }
  return out;
}

double energy_proxy_mj(int repetitions, double tx_power_dbm) {
  constexpr double kUnitDurationS = 1e-3;
  return repetitions * db_to_linear(tx_power_dbm) * kUnitDurationS;
}

std::vector<double> uplink_interference_mw(const Topology& t, std::span<const UplinkEmitter> emitters) {
  std::vector<double> out(t.cells.size(), 0.0);
  for (const auto& e : emitters) {
    const std::size_t serving = index_of(t, e.serving_cell_id);
    const int freq = t.cells[serving].frequency_index;
    for (std::size_t c = 0; c < t.cells.size(); ++c) {
      if (c == serving || t.cells[c].frequency_index != freq) continue;
      out[c] += db_to_linear(e.tx_power_dbm - e.coupling_loss_db.at(c));
    }
  }
  return out;
}

MetricsReport run_drop(const ScenarioConfig& config, int drop_index, const RunOptions& options) {
  validate_config(config);
  const Topology& t = config.topology;
  const std::size_t n_cells = t.cells.size();
  const double noise_dbm = thermal_noise_dbm(kCarrierBandwidthHz);

  std::vector<Position> positions = drop_ues(config, drop_index);
  positions.insert(positions.end(), config.fixed_ues.begin(), config.fixed_ues.end());

  Rng shadow(derive_seed(config.seed, {static_cast<std::uint64_t>(drop_index), kShadowStream}));
  SelectionPolicy policy = config.policy;

  AttachParams base;
  base.coverage = config.coverage;
  base.preamble_rx_target_dbm = config.power.nprach_target_dbm;
  base.detection_threshold_db = config.rach.detection_threshold_db;
  base.redirect_snr_threshold_db = config.rach.redirect_snr_threshold_db;
  base.max_attempts = config.rach.max_attempts;
  base.pcmax_policy = config.power.pcmax_policy;
  base.decoupled = config.flags.decoupled;
  base.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(drop_index), kAccessStream});

  const double m = m_factor(config.power.allocation);

  MetricsReport report;
  report.drop_index = drop_index;
  report.x2_latency_ms = config.x2_latency_ms;

  struct Served {
    std::size_t ue;
    std::size_t ul_cell;
    double p_cmax;
  };
  std::vector<Served> served;
  std::vector<std::vector<double>> coupling(positions.size());

  for (std::size_t i = 0; i < positions.size(); ++i) {
    UeDevice ue{static_cast<int>(i), positions[i], config.power.ue_max_dbm, config.ue_antenna_gain_dbi};

    std::vector<double> shadowing;
    if (config.shadowing_sigma_db > 0.0) {
      for (std::size_t c = 0; c < n_cells; ++c) shadowing.push_back(config.shadowing_sigma_db * shadow.normal());
    }
    const auto measures = measure_links(ue.position, t.cells, ue.antenna_gain_dbi, shadowing);

    AttachParams params = base;
    UeMetrics um;
    um.ue_id = ue.id;
    um.position = ue.position;
    um.best_coupling_loss_db = measures.front().link.coupling_loss_db;
    for (std::size_t c = 0; c < n_cells; ++c) {
      coupling[i].push_back(measures[c].link.coupling_loss_db);
      um.best_coupling_loss_db = std::min(um.best_coupling_loss_db, measures[c].link.coupling_loss_db);
      const Cell& cell = t.cells[c];
      if (config.flags.csg_mode && cell.cls.kind() == BsClassKind::Home) {
        if (distance_m(cell.position, ue.position) <= config.csg_radius_m) {
          um.csg_member = true;
        } else {
          params.barred_cells.insert(cell.id);
        }
      }
    }

    AttachResult ar = attach(ue, t, measures, policy, params);
    um.outcome = outcome_of(ar.state);
    um.redirected = ar.redirected;
    if (options.collect_traces) um.trace = std::move(ar.trace);

    if (ar.association) {
      um.association = ar.association;
      um.coverage = ar.coverage;
      const std::size_t ul = index_of(t, ar.association->ul_cell_id);
      const Cell& ul_cell = t.cells[ul];

      double pl = measures[ul].link.path_loss_db;
      if (config.flags.protect_macro_ul) {
        for (std::size_t c = 0; c < n_cells; ++c) {
          if (t.cells[c].frequency_index == ul_cell.frequency_index) pl = std::min(pl, measures[c].link.path_loss_db);
        }
      }
      NpuschPowerParams p;
      p.p_cmax_dbm = serving_p_cmax_dbm(ul_cell, config.power.ue_max_dbm, config.power.pcmax_policy);
      p.p_o_npusch_dbm = config.power.p_o_npusch_dbm;
      p.alpha_j1 = config.power.alpha_j1;
      p.m_npusch = m;
      p.path_loss_db = pl;
      p.repetitions = ar.coverage.repetitions;
      p.j = config.power.j;
      um.tx_power_dbm = npusch_tx_power_dbm(p);
      served.push_back({i, ul, p.p_cmax_dbm});
    }
    report.ues.push_back(std::move(um));
  }

  auto emitters = [&] {
    std::vector<UplinkEmitter> out;
    out.reserve(served.size());
    for (const auto& s : served) {
      out.push_back({t.cells[s.ul_cell].id, *report.ues[s.ue].tx_power_dbm, coupling[s.ue]});
    }
    return out;
  };

  std::vector<double> interference = uplink_interference_mw(t, emitters());

  if (config.flags.csg_mode) {
    bool raised = false;
    for (const auto& s : served) {
      UeMetrics& um = report.ues[s.ue];
      const Cell& cell = t.cells[s.ul_cell];
      if (!um.csg_member || cell.cls.kind() != BsClassKind::Home) continue;
      const double i_mw = interference[s.ul_cell];
      const double iot = i_mw > 0.0 ? linear_to_db(i_mw) - noise_dbm : -std::numeric_limits<double>::infinity();
      const double uplift = csg_power_uplift_db(iot, config.power.csg_uplift_cap_db);
      if (uplift > 0.0) {
        um.tx_power_dbm = std::min(s.p_cmax, *um.tx_power_dbm + uplift);
        raised = true;
      }
    }
    if (raised) interference = uplink_interference_mw(t, emitters());
  }

  for (std::size_t c = 0; c < n_cells; ++c) {
    CellMetrics cm{t.cells[c].id, std::nullopt, std::nullopt};
    if (interference[c] > 0.0) {
      cm.interference_dbm = linear_to_db(interference[c]);
      cm.iot_db = *cm.interference_dbm - noise_dbm;
    }
    report.cells.push_back(cm);
  }

  int covered = 0;
  int connected = 0;
  int redirected = 0;
  double tx_sum = 0.0;
  for (auto& um : report.ues) {
    if (um.best_coupling_loss_db <= config.coverage.mcl_db()) ++covered;
    if (!um.tx_power_dbm) continue;
    ++connected;
    tx_sum += *um.tx_power_dbm;
    if (um.redirected) ++redirected;
    um.energy_proxy_mj = energy_proxy_mj(um.coverage.repetitions, *um.tx_power_dbm);
  }
  const double n = static_cast<double>(report.ues.size());
  report.coverage_probability = covered / n;
  report.attach_success_rate = connected / n;
  if (connected > 0) {
    report.mean_tx_power_dbm = tx_sum / connected;
    if (t.kind == ArchitectureKind::Arch3) report.redirect_rate = static_cast<double>(redirected) / connected;
  }
  return report;
}

Stat summarize(std::vector<double> samples) {
  Stat s;
  s.count = static_cast<int>(samples.size());
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  double sum = 0.0;
  for (double v : samples) sum += v;
  s.mean = sum / s.count;
  auto pct = [&](double q) {
    const double pos = q * (s.count - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return samples[lo] + (samples[hi] - samples[lo]) * (pos - static_cast<double>(lo));
  };
  s.p5 = pct(0.05);
  s.p50 = pct(0.50);
  s.p95 = pct(0.95);
  return s;
}

CampaignResult run_campaign(const ScenarioConfig& config, const RunOptions& options) {
  validate_config(config);
  CampaignResult result;
  result.drops.resize(static_cast<std::size_t>(config.drops));

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(config.drops));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int d = static_cast<int>(w); d < config.drops; d += static_cast<int>(workers)) {
            result.drops[static_cast<std::size_t>(d)] = run_drop(config, d, options);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<double> coverage, success, tx, redirect;
  std::map<int, std::vector<double>> iot;
  for (const auto& r : result.drops) {
    coverage.push_back(r.coverage_probability);
    success.push_back(r.attach_success_rate);
    if (r.mean_tx_power_dbm) tx.push_back(*r.mean_tx_power_dbm);
    if (r.redirect_rate) redirect.push_back(*r.redirect_rate);
    for (const auto& c : r.cells) {
      auto& v = iot[c.cell_id];
      if (c.iot_db) v.push_back(*c.iot_db);
    }
  }
  auto& s = result.summary;
  s.drops = config.drops;
  s.coverage_probability = summarize(std::move(coverage));
  s.attach_success_rate = summarize(std::move(success));
  s.mean_tx_power_dbm = summarize(std::move(tx));
  s.redirect_rate = summarize(std::move(redirect));
  for (auto& [id, v] : iot) s.cell_iot_db[id] = summarize(std::move(v));
  return result;
}

}  // namespace nbsim

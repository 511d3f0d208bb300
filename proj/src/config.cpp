#include "nbsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nbsim/errors.hpp"

namespace nbsim {
namespace {

struct BadValue {
  std::string reason;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// ---- value conversions -----------------------------------------------------

double as_double(std::string_view raw) {
  double v = 0.0;
  const char* end = raw.data() + raw.size();
  const auto [ptr, ec] = std::from_chars(raw.data(), end, v);
  if (ec != std::errc() || ptr != end) throw BadValue{"expected a number, got '" + std::string(raw) + "'"};
  return v;
}

long long as_integer(std::string_view raw) {
  long long v = 0;
  const char* end = raw.data() + raw.size();
  const auto [ptr, ec] = std::from_chars(raw.data(), end, v);
  if (ec != std::errc() || ptr != end) throw BadValue{"expected an integer, got '" + std::string(raw) + "'"};
  return v;
}

int as_int(std::string_view raw) {
  const long long v = as_integer(raw);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw BadValue{"integer out of range"};
  }
  return static_cast<int>(v);
}

std::uint64_t as_u64(std::string_view raw) {
  std::uint64_t v = 0;
  const char* end = raw.data() + raw.size();
  const auto [ptr, ec] = std::from_chars(raw.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw BadValue{"expected an unsigned 64-bit integer, got '" + std::string(raw) + "'"};
  }
  return v;
}

bool as_bool(std::string_view raw) {
  if (raw == "true") return true;
  if (raw == "false") return false;
  throw BadValue{"expected true or false, got '" + std::string(raw) + "'"};
}

std::string as_string(std::string_view raw) {
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 2 < raw.size()) ++i;
      out += raw[i];
    }
    return out;
  }
  if (raw.empty() || raw.front() == '"') throw BadValue{"malformed string"};
  return std::string(raw);
}

std::vector<int> as_int_list(std::string_view raw) {
  if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') throw BadValue{"expected a [list]"};
  std::vector<int> out;
  std::string_view body = trim(raw.substr(1, raw.size() - 2));
  while (!body.empty()) {
    const auto comma = body.find(',');
    const auto item = trim(body.substr(0, comma));
    if (item.empty()) throw BadValue{"empty list element"};
    out.push_back(as_int(item));
    if (comma == std::string_view::npos) break;
    body = trim(body.substr(comma + 1));
    if (body.empty()) throw BadValue{"trailing comma in list"};
  }
  return out;
}

template <typename Enum, std::size_t N>
Enum as_enum(std::string_view raw, const std::array<std::pair<std::string_view, Enum>, N>& table) {
  const std::string s = as_string(raw);
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : table) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
  throw BadValue{"unknown value '" + s + "' (expected one of: " + allowed + ")"};
}

constexpr std::array<std::pair<std::string_view, ArchitectureKind>, 3> kArchNames{{
    {"arch1", ArchitectureKind::Arch1}, {"arch2", ArchitectureKind::Arch2}, {"arch3", ArchitectureKind::Arch3}}};
constexpr std::array<std::pair<std::string_view, SelectionKind>, 5> kPolicyNames{{
    {"rsrp-only", SelectionKind::RsrpOnly},
    {"path-loss", SelectionKind::PathLossBased},
    {"hybrid", SelectionKind::Hybrid},
    {"class-thresholds", SelectionKind::ClassThresholds},
    {"decoupled", SelectionKind::Decoupled}}};
constexpr std::array<std::pair<std::string_view, DropDistribution>, 2> kDistributionNames{{
    {"uniform-disc", DropDistribution::UniformDisc}, {"hotspot", DropDistribution::Hotspot}}};
constexpr std::array<std::pair<std::string_view, PcmaxPolicy>, 2> kPcmaxNames{{
    {"interference-safe", PcmaxPolicy::InterferenceSafe}, {"coverage-first", PcmaxPolicy::CoverageFirst}}};
constexpr std::array<std::pair<std::string_view, BsClassKind>, 4> kClassNames{{
    {"wide-area", BsClassKind::WideArea},
    {"medium-range", BsClassKind::MediumRange},
    {"local-area", BsClassKind::LocalArea},
    {"home", BsClassKind::Home}}};
constexpr std::array<std::pair<std::string_view, CarrierMode>, 3> kModeNames{{
    {"standalone", CarrierMode::Standalone}, {"in-band", CarrierMode::InBand}, {"guard-band", CarrierMode::GuardBand}}};
constexpr std::array<std::pair<std::string_view, CellRole>, 2> kRoleNames{{
    {"anchor", CellRole::Anchor}, {"non-anchor", CellRole::NonAnchor}}};
constexpr std::array<std::pair<std::string_view, PropagationModel>, 2> kModelNames{{
    {"macro", PropagationModel{128.1, 37.6}}, {"small-cell", PropagationModel{140.7, 36.7}}}};

// ---- setters -----------------------------------------------------------------

using GlobalSetter = std::function<void(ScenarioConfig&, std::string_view)>;
using CellSetter = std::function<void(Cell&, std::string_view)>;

const std::map<std::string, GlobalSetter, std::less<>>& global_setters() {
  static const std::map<std::string, GlobalSetter, std::less<>> table = [] {
    std::map<std::string, GlobalSetter, std::less<>> t;
    t["seed"] = [](ScenarioConfig& c, std::string_view v) { c.seed = as_u64(v); };
    t["kind"] = [](ScenarioConfig& c, std::string_view v) { c.topology.kind = as_enum(v, kArchNames); };
    t["ue_count"] = [](ScenarioConfig& c, std::string_view v) { c.ue_count = as_int(v); };
    t["drops"] = [](ScenarioConfig& c, std::string_view v) { c.drops = as_int(v); };

    t["drop.distribution"] = [](ScenarioConfig& c, std::string_view v) {
      c.drop.distribution = as_enum(v, kDistributionNames);
    };
    t["drop.center_x"] = [](ScenarioConfig& c, std::string_view v) { c.drop.center.x = as_double(v); };
    t["drop.center_y"] = [](ScenarioConfig& c, std::string_view v) { c.drop.center.y = as_double(v); };
    t["drop.radius_m"] = [](ScenarioConfig& c, std::string_view v) { c.drop.radius_m = as_double(v); };
    t["drop.hotspot_cell"] = [](ScenarioConfig& c, std::string_view v) { c.drop.hotspot_cell = as_int(v); };

    t["policy.kind"] = [](ScenarioConfig& c, std::string_view v) { c.policy.kind = as_enum(v, kPolicyNames); };
    t["policy.normal_coverage_rsrp_threshold_dbm"] = [](ScenarioConfig& c, std::string_view v) {
      c.policy.normal_coverage_rsrp_threshold_dbm = as_double(v);
    };
    for (const auto& [name, kind] : kClassNames) {
      std::string key = "policy.offset_" + std::string(name) + "_db";
      std::replace(key.begin(), key.end(), '-', '_');
      const auto idx = static_cast<std::size_t>(kind);
      t[key] = [idx](ScenarioConfig& c, std::string_view v) { c.policy.class_offset_db[idx] = as_double(v); };
    }

    t["power.ue_max_dbm"] = [](ScenarioConfig& c, std::string_view v) { c.power.ue_max_dbm = as_double(v); };
    t["power.p_o_npusch_j1_dbm"] = [](ScenarioConfig& c, std::string_view v) {
      c.power.p_o_npusch_dbm[0] = as_double(v);
    };
    t["power.p_o_npusch_j2_dbm"] = [](ScenarioConfig& c, std::string_view v) {
      c.power.p_o_npusch_dbm[1] = as_double(v);
    };
    t["power.alpha_j1"] = [](ScenarioConfig& c, std::string_view v) { c.power.alpha_j1 = as_double(v); };
    t["power.j"] = [](ScenarioConfig& c, std::string_view v) { c.power.j = as_int(v); };
    t["power.subcarrier_spacing_khz"] = [](ScenarioConfig& c, std::string_view v) {
      const double khz = as_double(v);
      if (khz == 3.75) {
        c.power.allocation.spacing = SubcarrierSpacing::k3p75kHz;
      } else if (khz == 15.0) {
        c.power.allocation.spacing = SubcarrierSpacing::k15kHz;
      } else {
        throw BadValue{"subcarrier spacing must be 3.75 or 15 kHz"};
      }
    };
    t["power.num_subcarriers"] = [](ScenarioConfig& c, std::string_view v) {
      c.power.allocation.num_subcarriers = as_int(v);
    };
    t["power.p_cmax_policy"] = [](ScenarioConfig& c, std::string_view v) {
      c.power.pcmax_policy = as_enum(v, kPcmaxNames);
    };
    t["power.nprach_target_dbm"] = [](ScenarioConfig& c, std::string_view v) {
      c.power.nprach_target_dbm = as_double(v);
    };
    t["power.csg_uplift_cap_db"] = [](ScenarioConfig& c, std::string_view v) {
      c.power.csg_uplift_cap_db = as_double(v);
    };

    t["coverage.ce0_max_coupling_loss_db"] = [](ScenarioConfig& c, std::string_view v) {
      c.coverage.max_coupling_loss_db[0] = as_double(v);
    };
    t["coverage.ce1_max_coupling_loss_db"] = [](ScenarioConfig& c, std::string_view v) {
      c.coverage.max_coupling_loss_db[1] = as_double(v);
    };
    t["coverage.mcl_db"] = [](ScenarioConfig& c, std::string_view v) {
      c.coverage.max_coupling_loss_db[2] = as_double(v);
    };
    for (int i = 0; i < 3; ++i) {
      t["coverage.ce" + std::to_string(i) + "_repetitions"] = [i](ScenarioConfig& c, std::string_view v) {
        c.coverage.repetitions[static_cast<std::size_t>(i)] = as_int(v);
      };
    }

    t["rach.max_attempts"] = [](ScenarioConfig& c, std::string_view v) { c.rach.max_attempts = as_int(v); };
    t["rach.detection_threshold_db"] = [](ScenarioConfig& c, std::string_view v) {
      c.rach.detection_threshold_db = as_double(v);
    };
    t["rach.redirect_snr_threshold_db"] = [](ScenarioConfig& c, std::string_view v) {
      c.rach.redirect_snr_threshold_db = as_double(v);
    };

    t["radio.shadowing_sigma_db"] = [](ScenarioConfig& c, std::string_view v) {
      c.shadowing_sigma_db = as_double(v);
    };
    t["radio.ue_antenna_gain_dbi"] = [](ScenarioConfig& c, std::string_view v) {
      c.ue_antenna_gain_dbi = as_double(v);
    };

    t["flags.protect_macro_ul"] = [](ScenarioConfig& c, std::string_view v) {
      c.flags.protect_macro_ul = as_bool(v);
    };
    t["flags.csg_mode"] = [](ScenarioConfig& c, std::string_view v) { c.flags.csg_mode = as_bool(v); };
    t["flags.decoupled"] = [](ScenarioConfig& c, std::string_view v) { c.flags.decoupled = as_bool(v); };
    t["flags.csg_radius_m"] = [](ScenarioConfig& c, std::string_view v) { c.csg_radius_m = as_double(v); };

    t["backhaul.x2_latency_ms"] = [](ScenarioConfig& c, std::string_view v) { c.x2_latency_ms = as_double(v); };
    return t;
  }();
  return table;
}

// Keys whose values shape the defaults of other cell fields; applied first.
constexpr std::array<std::string_view, 4> kCellLeadingKeys{"class", "antenna_ports", "propagation", "role"};

const std::map<std::string, CellSetter, std::less<>>& cell_setters() {
  static const std::map<std::string, CellSetter, std::less<>> table = [] {
    std::map<std::string, CellSetter, std::less<>> t;
    t["class"] = [](Cell& c, std::string_view v) {
      switch (as_enum(v, kClassNames)) {
        case BsClassKind::WideArea: c.cls = BaseStationClass::wide_area(); break;
        case BsClassKind::MediumRange: c.cls = BaseStationClass::medium_range(); break;
        case BsClassKind::LocalArea: c.cls = BaseStationClass::local_area(); break;
        case BsClassKind::Home: c.cls = BaseStationClass::home(1); break;
      }
    };
    t["antenna_ports"] = [](Cell& c, std::string_view v) {
      if (c.cls.kind() != BsClassKind::Home) throw BadValue{"antenna_ports applies to home cells only"};
      try {
        c.cls = BaseStationClass::home(as_int(v));
      } catch (const InputError& e) {
        throw BadValue{e.what()};
      }
    };
    t["propagation"] = [](Cell& c, std::string_view v) { c.propagation = as_enum(v, kModelNames); };
    t["role"] = [](Cell& c, std::string_view v) { c.role = as_enum(v, kRoleNames); };
    t["x"] = [](Cell& c, std::string_view v) { c.position.x = as_double(v); };
    t["y"] = [](Cell& c, std::string_view v) { c.position.y = as_double(v); };
    t["nrs_power_dbm"] = [](Cell& c, std::string_view v) { c.nrs_power_dbm = as_double(v); };
    t["dl_boost_db"] = [](Cell& c, std::string_view v) { c.dl_boost_db = as_double(v); };
    t["antenna_gain_dbi"] = [](Cell& c, std::string_view v) { c.antenna_gain_dbi = as_double(v); };
    t["mode"] = [](Cell& c, std::string_view v) { c.mode = as_enum(v, kModeNames); };
    t["frequency_index"] = [](Cell& c, std::string_view v) { c.frequency_index = as_int(v); };
    t["cell_identity"] = [](Cell& c, std::string_view v) { c.cell_identity = as_int(v); };
    t["anchor_prb"] = [](Cell& c, std::string_view v) {
      if (as_string(v) == "none") {
        c.anchor_prb.reset();
      } else {
        c.anchor_prb = as_int(v);
      }
    };
    t["non_anchor_prbs"] = [](Cell& c, std::string_view v) { c.non_anchor_prbs = as_int_list(v); };
    t["pl_intercept_db"] = [](Cell& c, std::string_view v) { c.propagation.intercept_db = as_double(v); };
    t["pl_slope_db"] = [](Cell& c, std::string_view v) { c.propagation.slope_db = as_double(v); };
    t["system_info"] = [](Cell& c, std::string_view v) { c.system_info = as_bool(v); };
    t["prach_paging"] = [](Cell& c, std::string_view v) { c.prach_paging = as_bool(v); };
    t["nrs_config"] = [](Cell& c, std::string_view v) { c.nrs_config = as_int(v); };
    t["selection_threshold_dbm"] = [](Cell& c, std::string_view v) { c.selection_threshold_dbm = as_double(v); };
    t["ul_p_cmax_dbm"] = [](Cell& c, std::string_view v) {
      if (as_string(v) == "none") {
        c.ul_p_cmax_dbm.reset();
      } else {
        c.ul_p_cmax_dbm = as_double(v);
      }
    };
    return t;
  }();
  return table;
}

// Class-typical NRS power, antenna gain and propagation model.
void apply_class_defaults(Cell& c) {
  switch (c.cls.kind()) {
    case BsClassKind::WideArea:
      c.nrs_power_dbm = 32.0;
      c.antenna_gain_dbi = 15.0;
      c.propagation = PropagationModel::macro();
      return;
    case BsClassKind::MediumRange:
      c.nrs_power_dbm = 30.0;
      c.antenna_gain_dbi = 8.0;
      break;
    case BsClassKind::LocalArea:
      c.nrs_power_dbm = 24.0;
      c.antenna_gain_dbi = 5.0;
      break;
    case BsClassKind::Home:
      c.nrs_power_dbm = std::min(14.0, *c.cls.max_output_power_dbm());
      c.antenna_gain_dbi = 0.0;
      break;
  }
  c.propagation = PropagationModel::small_cell();
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string quoted(std::string_view s) { return "\"" + std::string(s) + "\""; }

std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Block {
  int line = 0;
  std::vector<Entry> entries;
};

const std::array<std::string_view, 8> kSections{"drop", "policy", "power", "coverage",
                                                "rach", "radio", "flags", "backhaul"};

void set_x2_neighbors(Topology& t, int id, const std::vector<int>& neighbors) {
  std::erase_if(t.x2_links, [id](const auto& l) { return l.first == id || l.second == id; });
  for (int n : neighbors) t.add_x2(id, n);
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  std::vector<FieldError> errors;
  std::vector<Entry> globals;
  std::vector<Block> cells;
  std::vector<Block> ues;

  enum class Scope { Global, Cell, Ue } scope = Scope::Global;
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.starts_with("[[")) {
      if (!line.ends_with("]]")) {
        errors.push_back({where, "malformed block header"});
        continue;
      }
      const auto name = trim(line.substr(2, line.size() - 4));
      if (name == "cell") {
        scope = Scope::Cell;
        cells.push_back({line_no, {}});
      } else if (name == "ue") {
        scope = Scope::Ue;
        ues.push_back({line_no, {}});
      } else {
        errors.push_back({where, "unknown block [[" + std::string(name) + "]]"});
        scope = Scope::Global;
        section = std::string(name);
      }
      continue;
    }
    if (line.starts_with("[")) {
      if (!line.ends_with("]")) {
        errors.push_back({where, "malformed section header"});
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      scope = Scope::Global;
      if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
        errors.push_back({section, "unknown section"});
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back({where, "expected 'key = value'"});
      continue;
    }
    Entry e{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no};
    if (e.key.empty() || e.value.empty()) {
      errors.push_back({where, "expected 'key = value'"});
      continue;
    }
    switch (scope) {
      case Scope::Global:
        if (!section.empty()) e.key = section + "." + e.key;
        globals.push_back(std::move(e));
        break;
      case Scope::Cell: cells.back().entries.push_back(std::move(e)); break;
      case Scope::Ue: ues.back().entries.push_back(std::move(e)); break;
    }
  }

  ScenarioConfig config;
  bool seed_seen = false;
  std::map<std::string, int> seen;
  for (const auto& e : globals) {
    if (seen[e.key]++) {
      errors.push_back({e.key, "duplicate key"});
      continue;
    }
    const auto& setters = global_setters();
    const auto it = setters.find(e.key);
    if (it == setters.end()) {
      errors.push_back({e.key, "unknown key"});
      continue;
    }
    try {
      it->second(config, e.value);
      if (e.key == "seed") seed_seen = true;
    } catch (const BadValue& b) {
      errors.push_back({e.key, b.reason});
    }
  }
  if (!seed_seen) errors.push_back({"seed", "missing required key"});

  std::vector<std::pair<int, std::vector<int>>> pending_x2;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const std::string path = "cell[" + std::to_string(k) + "]";
    std::map<std::string, const Entry*, std::less<>> entries;
    for (const auto& e : cells[k].entries) {
      if (!entries.emplace(e.key, &e).second) errors.push_back({path + "." + e.key, "duplicate key"});
    }
    Cell cell;
    bool s1 = true;
    auto run = [&](const std::string& key, const std::function<void(std::string_view)>& f) {
      const auto it = entries.find(key);
      if (it == entries.end()) return false;
      try {
        f(it->second->value);
      } catch (const BadValue& b) {
        errors.push_back({path + "." + key, b.reason});
      }
      return true;
    };

    if (!run("id", [&](std::string_view v) { cell.id = as_int(v); })) {
      errors.push_back({path + ".id", "missing required key"});
    }
    cell.cell_identity = cell.id;
    for (auto key : kCellLeadingKeys) {
      run(std::string(key), [&](std::string_view v) { cell_setters().find(key)->second(cell, v); });
      if (key == "antenna_ports") apply_class_defaults(cell);
    }
    if (cell.role == CellRole::NonAnchor) cell.anchor_prb.reset();

    for (const auto& [key, e] : entries) {
      if (key == "id" || std::find(kCellLeadingKeys.begin(), kCellLeadingKeys.end(), key) != kCellLeadingKeys.end()) {
        continue;
      }
      if (key == "s1") {
        run(key, [&](std::string_view v) { s1 = as_bool(v); });
      } else if (key == "x2") {
        run(key, [&](std::string_view v) { pending_x2.emplace_back(cell.id, as_int_list(v)); });
      } else if (const auto it = cell_setters().find(key); it != cell_setters().end()) {
        run(key, [&](std::string_view v) { it->second(cell, v); });
      } else {
        errors.push_back({path + "." + key, "unknown key"});
      }
    }
    if (s1) config.topology.s1_links.insert(cell.id);
    config.topology.cells.push_back(std::move(cell));
  }
  for (const auto& [id, neighbors] : pending_x2) {
    for (int n : neighbors) config.topology.add_x2(id, n);
  }

  for (std::size_t k = 0; k < ues.size(); ++k) {
    const std::string path = "ue[" + std::to_string(k) + "]";
    Position p;
    for (const auto& e : ues[k].entries) {
      try {
        if (e.key == "x") {
          p.x = as_double(e.value);
        } else if (e.key == "y") {
          p.y = as_double(e.value);
        } else {
          errors.push_back({path + "." + e.key, "unknown key"});
        }
      } catch (const BadValue& b) {
        errors.push_back({path + "." + e.key, b.reason});
      }
    }
    config.fixed_ues.push_back(p);
  }

  try {
    validate_config(config);
  } catch (const ConfigError& e) {
    errors.insert(errors.end(), e.errors().begin(), e.errors().end());
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot read '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void apply_override(ScenarioConfig& config, std::string_view key, std::string_view value) {
  const std::string k(key);
  const std::string_view v = trim(value);
  try {
    if (key.starts_with("cell.")) {
      const auto rest = key.substr(5);
      const auto dot = rest.find('.');
      if (dot == std::string_view::npos) throw BadValue{"expected cell.<id>.<field>"};
      const int id = as_int(rest.substr(0, dot));
      const auto field = rest.substr(dot + 1);
      auto it = std::find_if(config.topology.cells.begin(), config.topology.cells.end(),
                             [id](const Cell& c) { return c.id == id; });
      if (it == config.topology.cells.end()) throw BadValue{"no cell with id " + std::to_string(id)};
      if (field == "s1") {
        if (as_bool(v)) {
          config.topology.s1_links.insert(id);
        } else {
          config.topology.s1_links.erase(id);
        }
      } else if (field == "x2") {
        set_x2_neighbors(config.topology, id, as_int_list(v));
      } else if (const auto s = cell_setters().find(field); s != cell_setters().end()) {
        s->second(*it, v);
      } else {
        throw ConfigError(k, "unknown key");
      }
      return;
    }
    if (key.starts_with("ue.")) {
      const auto rest = key.substr(3);
      const auto dot = rest.find('.');
      if (dot == std::string_view::npos) throw BadValue{"expected ue.<index>.x or ue.<index>.y"};
      const int idx = as_int(rest.substr(0, dot));
      if (idx < 0 || static_cast<std::size_t>(idx) >= config.fixed_ues.size()) {
        throw BadValue{"no fixed UE with index " + std::to_string(idx)};
      }
      const auto field = rest.substr(dot + 1);
      auto& p = config.fixed_ues[static_cast<std::size_t>(idx)];
      if (field == "x") {
        p.x = as_double(v);
      } else if (field == "y") {
        p.y = as_double(v);
      } else {
        throw ConfigError(k, "unknown key");
      }
      return;
    }
    const auto it = global_setters().find(key);
    if (it == global_setters().end()) throw ConfigError(k, "unknown key");
    it->second(config, v);
  } catch (const BadValue& b) {
    throw ConfigError(k, b.reason);
  }
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream o;
  auto kv = [&o](std::string_view key, const std::string& value) { o << key << " = " << value << '\n'; };
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };

  o << "# resolved scenario, every default written out\n";
  kv("seed", std::to_string(c.seed));
  kv("kind", quoted(to_string(c.topology.kind)));
  kv("ue_count", std::to_string(c.ue_count));
  kv("drops", std::to_string(c.drops));

  o << "\n[drop]\n";
  kv("distribution", quoted(to_string(c.drop.distribution)));
  kv("center_x", fmt(c.drop.center.x));
  kv("center_y", fmt(c.drop.center.y));
  kv("radius_m", fmt(c.drop.radius_m));
  kv("hotspot_cell", std::to_string(c.drop.hotspot_cell));

  o << "\n[policy]\n";
  kv("kind", quoted(to_string(c.policy.kind)));
  kv("normal_coverage_rsrp_threshold_dbm", fmt(c.policy.normal_coverage_rsrp_threshold_dbm));
  for (const auto& [name, kind] : kClassNames) {
    std::string key = "offset_" + std::string(name) + "_db";
    std::replace(key.begin(), key.end(), '-', '_');
    kv(key, fmt(c.policy.offset_for(kind)));
  }

  o << "\n[power]\n";
  kv("ue_max_dbm", fmt(c.power.ue_max_dbm));
  kv("p_o_npusch_j1_dbm", fmt(c.power.p_o_npusch_dbm[0]));
  kv("p_o_npusch_j2_dbm", fmt(c.power.p_o_npusch_dbm[1]));
  kv("alpha_j1", fmt(c.power.alpha_j1));
  kv("j", std::to_string(c.power.j));
  kv("subcarrier_spacing_khz", c.power.allocation.spacing == SubcarrierSpacing::k3p75kHz ? "3.75" : "15");
  kv("num_subcarriers", std::to_string(c.power.allocation.num_subcarriers));
  kv("p_cmax_policy", quoted(to_string(c.power.pcmax_policy)));
  kv("nprach_target_dbm", fmt(c.power.nprach_target_dbm));
  kv("csg_uplift_cap_db", fmt(c.power.csg_uplift_cap_db));

  o << "\n[coverage]\n";
  kv("ce0_max_coupling_loss_db", fmt(c.coverage.max_coupling_loss_db[0]));
  kv("ce1_max_coupling_loss_db", fmt(c.coverage.max_coupling_loss_db[1]));
  kv("mcl_db", fmt(c.coverage.max_coupling_loss_db[2]));
  for (int i = 0; i < 3; ++i) {
    kv("ce" + std::to_string(i) + "_repetitions", std::to_string(c.coverage.repetitions[static_cast<std::size_t>(i)]));
  }

  o << "\n[rach]\n";
  kv("max_attempts", std::to_string(c.rach.max_attempts));
  kv("detection_threshold_db", fmt(c.rach.detection_threshold_db));
  kv("redirect_snr_threshold_db", fmt(c.rach.redirect_snr_threshold_db));

  o << "\n[radio]\n";
  kv("shadowing_sigma_db", fmt(c.shadowing_sigma_db));
  kv("ue_antenna_gain_dbi", fmt(c.ue_antenna_gain_dbi));

  o << "\n[flags]\n";
  kv("protect_macro_ul", b(c.flags.protect_macro_ul));
  kv("csg_mode", b(c.flags.csg_mode));
  kv("decoupled", b(c.flags.decoupled));
  kv("csg_radius_m", fmt(c.csg_radius_m));

  o << "\n[backhaul]\n";
  kv("x2_latency_ms", fmt(c.x2_latency_ms));

  for (const auto& p : c.fixed_ues) {
    o << "\n[[ue]]\n";
    kv("x", fmt(p.x));
    kv("y", fmt(p.y));
  }

  for (const Cell& cell : c.topology.cells) {
    o << "\n[[cell]]\n";
    kv("id", std::to_string(cell.id));
    kv("class", quoted(to_string(cell.cls.kind())));
    if (cell.cls.kind() == BsClassKind::Home) kv("antenna_ports", std::to_string(cell.cls.antenna_ports()));
    kv("role", quoted(to_string(cell.role)));
    kv("x", fmt(cell.position.x));
    kv("y", fmt(cell.position.y));
    kv("nrs_power_dbm", fmt(cell.nrs_power_dbm));
    kv("dl_boost_db", fmt(cell.dl_boost_db));
    kv("antenna_gain_dbi", fmt(cell.antenna_gain_dbi));
    kv("mode", quoted(to_string(cell.mode)));
    kv("frequency_index", std::to_string(cell.frequency_index));
    kv("cell_identity", std::to_string(cell.cell_identity));
    kv("anchor_prb", cell.anchor_prb ? std::to_string(*cell.anchor_prb) : quoted("none"));
    std::string prbs;
    for (int p : cell.non_anchor_prbs) prbs += (prbs.empty() ? "" : ", ") + std::to_string(p);
    kv("non_anchor_prbs", "[" + prbs + "]");
    kv("pl_intercept_db", fmt(cell.propagation.intercept_db));
    kv("pl_slope_db", fmt(cell.propagation.slope_db));
    kv("system_info", b(cell.system_info));
    kv("prach_paging", b(cell.prach_paging));
    kv("nrs_config", std::to_string(cell.nrs_config));
    kv("selection_threshold_dbm", fmt(cell.selection_threshold_dbm));
    kv("ul_p_cmax_dbm", cell.ul_p_cmax_dbm ? fmt(*cell.ul_p_cmax_dbm) : quoted("none"));
    kv("s1", b(c.topology.has_s1(cell.id)));
    std::string x2;
    for (const auto& [a, bb] : c.topology.x2_links) {
      if (a == cell.id) x2 += (x2.empty() ? "" : ", ") + std::to_string(bb);
    }
    kv("x2", "[" + x2 + "]");
  }
  return o.str();
}

}  // namespace nbsim

#include "nbsim/output.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "nbsim/config.hpp"
#include "nbsim/errors.hpp"

namespace nbsim {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string num(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string opt_num(const std::optional<double>& v, int precision) { return v ? num(*v, precision) : ""; }

std::string opt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json stat_json(const Stat& s) {
  if (s.count == 0) return ordered_json{{"count", 0}, {"mean", nullptr}, {"p5", nullptr}, {"p50", nullptr}, {"p95", nullptr}};
  return ordered_json{{"count", s.count}, {"mean", s.mean}, {"p5", s.p5}, {"p50", s.p50}, {"p95", s.p95}};
}

void stat_row(std::ostream& o, const std::string& metric, const Stat& s) {
  o << metric << ',' << s.count;
  if (s.count == 0) {
    o << ",,,,\n";
    return;
  }
  o << ',' << num(s.mean, 6) << ',' << num(s.p5, 6) << ',' << num(s.p50, 6) << ',' << num(s.p95, 6) << '\n';
}

ordered_json ue_json(int drop, const UeMetrics& u) {
  return ordered_json{
      {"drop", drop},
      {"ue_id", u.ue_id},
      {"x", u.position.x},
      {"y", u.position.y},
      {"dl_cell", u.association ? ordered_json(u.association->dl_cell_id) : ordered_json(nullptr)},
      {"ul_cell", u.association ? ordered_json(u.association->ul_cell_id) : ordered_json(nullptr)},
      {"ce_level", std::string(to_string(u.coverage.level))},
      {"reps", u.coverage.repetitions},
      {"tx_power_dbm", opt_json(u.tx_power_dbm)},
      {"energy_proxy", u.energy_proxy_mj},
      {"outcome", u.outcome},
  };
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw RuntimeFailure("failed writing " + path.string());
}

}  // namespace

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("format", "expected csv or json, got '" + std::string(name) + "'");
}

std::string render_ues_csv(const CampaignResult& r) {
  std::ostringstream o;
  o << "drop,ue_id,x,y,dl_cell,ul_cell,ce_level,reps,tx_power_dbm,energy_proxy,outcome\n";
  for (const auto& d : r.drops) {
    for (const auto& u : d.ues) {
      const auto dl = u.association ? std::optional<int>(u.association->dl_cell_id) : std::nullopt;
      const auto ul = u.association ? std::optional<int>(u.association->ul_cell_id) : std::nullopt;
      o << d.drop_index << ',' << u.ue_id << ',' << num(u.position.x, 3) << ',' << num(u.position.y, 3) << ','
        << opt_int(dl) << ',' << opt_int(ul) << ',' << to_string(u.coverage.level) << ',' << u.coverage.repetitions
        << ',' << opt_num(u.tx_power_dbm, 4) << ',' << num(u.energy_proxy_mj, 9) << ',' << u.outcome << '\n';
    }
  }
  return o.str();
}

std::string render_cells_csv(const CampaignResult& r) {
  std::ostringstream o;
  o << "drop,cell_id,iot_db\n";
  for (const auto& d : r.drops) {
    for (const auto& c : d.cells) o << d.drop_index << ',' << c.cell_id << ',' << opt_num(c.iot_db, 4) << '\n';
  }
  return o.str();
}

std::string render_drops_csv(const CampaignResult& r) {
  std::ostringstream o;
  o << "drop,coverage_probability,attach_success_rate,mean_tx_power_dbm,redirect_rate,x2_latency_ms\n";
  for (const auto& d : r.drops) {
    o << d.drop_index << ',' << num(d.coverage_probability, 6) << ',' << num(d.attach_success_rate, 6) << ','
      << opt_num(d.mean_tx_power_dbm, 4) << ',' << opt_num(d.redirect_rate, 6) << ',' << num(d.x2_latency_ms, 3)
      << '\n';
  }
  return o.str();
}

std::string render_summary_csv(const CampaignResult& r) {
  std::ostringstream o;
  o << "metric,count,mean,p5,p50,p95\n";
  stat_row(o, "coverage_probability", r.summary.coverage_probability);
  stat_row(o, "attach_success_rate", r.summary.attach_success_rate);
  stat_row(o, "mean_tx_power_dbm", r.summary.mean_tx_power_dbm);
  stat_row(o, "redirect_rate", r.summary.redirect_rate);
  for (const auto& [id, s] : r.summary.cell_iot_db) stat_row(o, "iot_db.cell" + std::to_string(id), s);
  return o.str();
}

std::string render_summary_json(const CampaignResult& r) {
  ordered_json iot = ordered_json::object();
  for (const auto& [id, s] : r.summary.cell_iot_db) iot[std::to_string(id)] = stat_json(s);
  ordered_json doc{
      {"drops", r.summary.drops},
      {"coverage_probability", stat_json(r.summary.coverage_probability)},
      {"attach_success_rate", stat_json(r.summary.attach_success_rate)},
      {"mean_tx_power_dbm", stat_json(r.summary.mean_tx_power_dbm)},
      {"redirect_rate", stat_json(r.summary.redirect_rate)},
      {"iot_db", iot},
  };
  return doc.dump(2) + "\n";
}

std::string render_trace_log(const CampaignResult& r) {
  std::ostringstream o;
  for (const auto& d : r.drops) {
    o << "# drop " << d.drop_index << '\n';
    for (const auto& u : d.ues) {
      for (const auto& e : u.trace) o << format_trace_line(e) << '\n';
    }
  }
  return o.str();
}

std::vector<fs::path> write_outputs(const CampaignResult& result, const ScenarioConfig& config, OutputFormat format,
                                    const fs::path& dir, bool traces) {
  std::vector<std::pair<std::string, std::string>> files;
  if (format == OutputFormat::Csv) {
    files = {{"summary.csv", render_summary_csv(result)},
             {"drops.csv", render_drops_csv(result)},
             {"ues.csv", render_ues_csv(result)},
             {"cells.csv", render_cells_csv(result)}};
  } else {
    ordered_json drops = ordered_json::array(), ues = ordered_json::array(), cells = ordered_json::array();
    for (const auto& d : result.drops) {
      drops.push_back({{"drop", d.drop_index},
                       {"coverage_probability", d.coverage_probability},
                       {"attach_success_rate", d.attach_success_rate},
                       {"mean_tx_power_dbm", opt_json(d.mean_tx_power_dbm)},
                       {"redirect_rate", opt_json(d.redirect_rate)},
                       {"x2_latency_ms", d.x2_latency_ms}});
      for (const auto& u : d.ues) ues.push_back(ue_json(d.drop_index, u));
      for (const auto& c : d.cells) {
        cells.push_back({{"drop", d.drop_index}, {"cell_id", c.cell_id}, {"iot_db", opt_json(c.iot_db)}});
      }
    }
    files = {{"summary.json", render_summary_json(result)},
             {"drops.json", drops.dump(2) + "\n"},
             {"ues.json", ues.dump(2) + "\n"},
             {"cells.json", cells.dump(2) + "\n"}};
  }
  files.emplace_back("resolved.conf", serialize_config(config));
  if (traces) files.emplace_back("trace.log", render_trace_log(result));

  std::error_code ec;
  const bool dir_existed = fs::exists(dir, ec);
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw RuntimeFailure("cannot create output directory " + dir.string());

  const fs::path staging = dir / ".nbsim-staging";
  std::vector<fs::path> written;
  try {
    fs::remove_all(staging);
    fs::create_directory(staging);
    for (const auto& [name, content] : files) write_file(staging / name, content);
    for (const auto& [name, content] : files) {
      fs::rename(staging / name, dir / name);
      written.push_back(dir / name);
    }
    fs::remove_all(staging);
  } catch (const std::exception& e) {
    fs::remove_all(staging, ec);
    if (!dir_existed) fs::remove_all(dir, ec);
    throw RuntimeFailure(std::string("writing outputs failed: ") + e.what());
  }
  return written;
}

ExecuteResult execute(const RunRequest& req) {
  ExecuteResult out;
  try {
    if (req.config_path.has_value() == req.preset.has_value()) {
      throw ConfigError("request", "exactly one of a config path or a preset is required");
    }
    ScenarioConfig config;
    if (req.preset) {
      config = expand_preset(parse_preset(*req.preset), req.overrides);
    } else {
      config = load_config(*req.config_path);
      if (!req.overrides.empty()) {
        for (const auto& [k, v] : req.overrides) apply_override(config, k, v);
        validate_config(config);
      }
    }
    if (req.seed) config.seed = *req.seed;

    fs::path dir = req.out_dir;
    if (dir.empty()) {
      const char* env = std::getenv("NBSIM_OUT");
      dir = (env && *env) ? fs::path(env) : fs::path("nbsim-out");
    }

    const CampaignResult result = run_campaign(config, RunOptions{req.trace});
    out.files = write_outputs(result, config, req.format, dir, req.trace);
    if (req.verbosity > 0) {
      std::cerr << "nbsim: " << config.drops << " drop(s), coverage probability mean "
                << num(result.summary.coverage_probability.mean, 4) << ", outputs in " << dir.string() << '\n';
    }
    out.exit_code = 0;
  } catch (const ConfigError& e) {
    out.exit_code = 1;
    for (const auto& fe : e.errors()) out.message += fe.field + ": " + fe.reason + "\n";
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.message = std::string(e.what()) + "\n";
  }
  return out;
}

}  // namespace nbsim

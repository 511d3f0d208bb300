#include "nbsim/nbsim.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "nbsim/config.hpp"
#include "nbsim/engine.hpp"
#include "nbsim/errors.hpp"
#include "nbsim/output.hpp"
#include "nbsim/power_control.hpp"

struct nbsim_config {
  nbsim::ScenarioConfig value;
};

struct nbsim_report {
  nbsim::CampaignResult result;
  nbsim::ScenarioConfig config;
  bool traces = false;
};

namespace {

thread_local std::string g_last_error;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename F>
nbsim_status guarded(F&& f) {
  g_last_error.clear();
  try {
    return f();
  } catch (const nbsim::ConfigError& e) {
    g_last_error = e.what();
    return NBSIM_ERR_CONFIG;
  } catch (const nbsim::InputError& e) {
    g_last_error = e.what();
    return NBSIM_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NBSIM_ERR_RUNTIME;
  }
}

nbsim_status invalid(const char* what) {
  g_last_error = what;
  return NBSIM_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* nbsim_version(void) { return "0.1.0"; }

const char* nbsim_last_error(void) { return g_last_error.c_str(); }

nbsim_status nbsim_config_parse(const char* text, nbsim_config** out) {
  if (!text || !out) return invalid("null argument");
  return guarded([&] {
    *out = new nbsim_config{nbsim::parse_config(text)};
    return NBSIM_OK;
  });
}

nbsim_status nbsim_config_load(const char* path, nbsim_config** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    *out = new nbsim_config{nbsim::load_config(path)};
    return NBSIM_OK;
  });
}

nbsim_status nbsim_config_from_preset(const char* name, nbsim_config** out) {
  if (!name || !out) return invalid("null argument");
  return guarded([&] {
    *out = new nbsim_config{nbsim::expand_preset(nbsim::parse_preset(name))};
    return NBSIM_OK;
  });
}

nbsim_status nbsim_config_set(nbsim_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return invalid("null argument");
  return guarded([&] {
    nbsim::ScenarioConfig next = config->value;
    nbsim::apply_override(next, key, value);
    nbsim::validate_config(next);
    config->value = std::move(next);
    return NBSIM_OK;
  });
}

nbsim_status nbsim_config_set_seed(nbsim_config* config, uint64_t seed) {
  if (!config) return invalid("null argument");
  config->value.seed = seed;
  return NBSIM_OK;
}

nbsim_status nbsim_config_serialize(const nbsim_config* config, char** out) {
  if (!config || !out) return invalid("null argument");
  return guarded([&] {
    const std::string text = nbsim::serialize_config(config->value);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
    return NBSIM_OK;
  });
}

void nbsim_config_free(nbsim_config* config) { delete config; }

void nbsim_string_free(char* s) { delete[] s; }

nbsim_status nbsim_run(const nbsim_config* config, int collect_traces, nbsim_report** out) {
  if (!config || !out) return invalid("null argument");
  return guarded([&] {
    auto result = nbsim::run_campaign(config->value, nbsim::RunOptions{collect_traces != 0});
    *out = new nbsim_report{std::move(result), config->value, collect_traces != 0};
    return NBSIM_OK;
  });
}

nbsim_status nbsim_report_write(const nbsim_report* report, nbsim_format format, const char* dir) {
  if (!report || !dir) return invalid("null argument");
  if (format != NBSIM_FORMAT_CSV && format != NBSIM_FORMAT_JSON) return invalid("unknown format");
  return guarded([&] {
    nbsim::write_outputs(report->result, report->config,
                         format == NBSIM_FORMAT_CSV ? nbsim::OutputFormat::Csv : nbsim::OutputFormat::Json, dir,
                         report->traces);
    return NBSIM_OK;
  });
}

size_t nbsim_report_drop_count(const nbsim_report* report) { return report ? report->result.drops.size() : 0; }

size_t nbsim_report_ue_count(const nbsim_report* report, size_t drop) {
  if (!report || drop >= report->result.drops.size()) return 0;
  return report->result.drops[drop].ues.size();
}

double nbsim_report_coverage_probability(const nbsim_report* report, size_t drop) {
  if (!report || drop >= report->result.drops.size()) return kNaN;
  return report->result.drops[drop].coverage_probability;
}

double nbsim_report_mean_tx_power_dbm(const nbsim_report* report) {
  if (!report || report->result.summary.mean_tx_power_dbm.count == 0) return kNaN;
  return report->result.summary.mean_tx_power_dbm.mean;
}

double nbsim_report_cell_iot_db(const nbsim_report* report, size_t drop, int cell_id) {
  if (!report || drop >= report->result.drops.size()) return kNaN;
  const auto* c = report->result.drops[drop].cell(cell_id);
  return c && c->iot_db ? *c->iot_db : kNaN;
}

void nbsim_report_free(nbsim_report* report) { delete report; }

nbsim_status nbsim_thermal_noise_dbm(double bandwidth_hz, double* out_dbm) {
  if (!out_dbm) return invalid("null argument");
  return guarded([&] {
    *out_dbm = nbsim::thermal_noise_dbm(bandwidth_hz);
    return NBSIM_OK;
  });
}

nbsim_status nbsim_npusch_tx_power_dbm(double p_cmax_dbm, double p_o_npusch_dbm, double alpha, double m_npusch,
                                       double path_loss_db, int repetitions, double* out_dbm) {
  if (!out_dbm) return invalid("null argument");
  return guarded([&] {
    nbsim::NpuschPowerParams p;
    p.p_cmax_dbm = p_cmax_dbm;
    p.p_o_npusch_dbm = {p_o_npusch_dbm, p_o_npusch_dbm};
    p.alpha_j1 = alpha;
    p.m_npusch = m_npusch;
    p.path_loss_db = path_loss_db;
    p.repetitions = repetitions;
    *out_dbm = nbsim::npusch_tx_power_dbm(p);
    return NBSIM_OK;
  });
}

int nbsim_execute(const char* config_path, const char* preset, int has_seed, uint64_t seed,
                  const char* const* overrides, size_t n_overrides, const char* out_dir, nbsim_format format,
                  int trace, int verbosity) {
  nbsim::RunRequest req;
  for (size_t i = 0; i < n_overrides; ++i) {
    const std::string kv = overrides[i] ? overrides[i] : "";
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      g_last_error = "override '" + kv + "' is not key=value\n";
      return 1;
    }
    req.overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (config_path) req.config_path = config_path;
  if (preset) req.preset = preset;
  if (has_seed) req.seed = seed;
  if (out_dir) req.out_dir = out_dir;
  req.format = format == NBSIM_FORMAT_JSON ? nbsim::OutputFormat::Json : nbsim::OutputFormat::Csv;
  req.trace = trace != 0;
  req.verbosity = verbosity;
  const auto result = nbsim::execute(req);
  g_last_error = result.message;
  return result.exit_code;
}

}  // extern "C"

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nbsim/engine.hpp"

namespace nbsim {

enum class OutputFormat { Csv, Json };

/// "csv" or "json"; throws ConfigError otherwise.
OutputFormat parse_output_format(std::string_view name);

/// Writes the bundle into `dir` (created if needed):
///   summary.<ext>   aggregate statistics across drops
///   drops.<ext>     one row per drop
///   ues.<ext>       one row per UE per drop
///   cells.<ext>     one row per cell per drop
///   resolved.conf   the full scenario, re-parseable
///   trace.log       attach traces, only when `traces` is set
/// Files are staged in a temporary directory and renamed into place. Throws
/// RuntimeFailure on any filesystem error, leaving no partial files behind.
std::vector<std::filesystem::path> write_outputs(const CampaignResult& result, const ScenarioConfig& config,
                                                 OutputFormat format, const std::filesystem::path& dir,
                                                 bool traces = false);

/// Text renderings used by write_outputs.
std::string render_ues_csv(const CampaignResult& result);
std::string render_cells_csv(const CampaignResult& result);
std::string render_drops_csv(const CampaignResult& result);
std::string render_summary_csv(const CampaignResult& result);
std::string render_summary_json(const CampaignResult& result);
std::string render_trace_log(const CampaignResult& result);

struct RunRequest {
  std::optional<std::filesystem::path> config_path;
  std::optional<std::string> preset;
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> overrides;
  /// Empty: $NBSIM_OUT, then "nbsim-out".
  std::filesystem::path out_dir;
  OutputFormat format = OutputFormat::Csv;
  bool trace = false;
  int verbosity = 0;
};

struct ExecuteResult {
  int exit_code = 0;  // 0 ok, 1 config error, 2 runtime failure
  std::vector<std::filesystem::path> files;
  std::string message;
};

ExecuteResult execute(const RunRequest& request);

}  // namespace nbsim

// nbsim command-line front end. Links only the C API.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nbsim/nbsim.h"

int main(int argc, char** argv) {
  CLI::App app{"NB-IoT heterogeneous-network drop simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", nbsim_version());

  auto* run = app.add_subcommand("run", "run a campaign and write its output bundle");
  std::string config_path;
  std::string preset;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string format = "csv";
  std::vector<std::string> overrides;
  bool trace = false;

  auto* config_opt = run->add_option("--config", config_path, "scenario file")->check(CLI::ExistingFile);
  auto* preset_opt =
      run->add_option("--preset", preset, "built-in scenario: fig3a, fig3b, homogeneous, decoupled-demo");
  config_opt->excludes(preset_opt);
  auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--out", out_dir, "output directory (default: $NBSIM_OUT, then ./nbsim-out)");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--set", overrides, "override a config key, key=value (repeatable)");
  run->add_flag("--trace", trace, "also write attach traces");
  auto* verbose = run->add_flag("-v,--verbose", "print a short summary to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems are configuration errors as far as the exit code goes.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (config_opt->count() + preset_opt->count() != 1) {
    std::fprintf(stderr, "nbsim: exactly one of --config or --preset is required\n");
    return 1;
  }

  std::vector<const char*> kv;
  kv.reserve(overrides.size());
  for (const auto& o : overrides) kv.push_back(o.c_str());

  const int rc = nbsim_execute(config_opt->count() ? config_path.c_str() : nullptr,
                               preset_opt->count() ? preset.c_str() : nullptr, seed_opt->count() > 0, seed,
                               kv.data(), kv.size(), out_dir.empty() ? nullptr : out_dir.c_str(),
                               format == "json" ? NBSIM_FORMAT_JSON : NBSIM_FORMAT_CSV, trace ? 1 : 0,
                               static_cast<int>(verbose->count()));
  if (rc != 0) std::fprintf(stderr, "nbsim: %s", nbsim_last_error());
  return rc;
}

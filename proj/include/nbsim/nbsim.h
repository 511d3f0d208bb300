/*
 * nbsim C API.
 *
 * Opaque handles own their memory; release them with the matching *_free
 * function. Every call returns an nbsim_status. On failure a description is
 * available from nbsim_last_error() until the next call on the same thread.
 */
#ifndef NBSIM_NBSIM_H
#define NBSIM_NBSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NBSIM_API __declspec(dllexport)
#else
#define NBSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nbsim_status {
  NBSIM_OK = 0,
  NBSIM_ERR_CONFIG = 1,        /* invalid scenario, key, preset or request */
  NBSIM_ERR_RUNTIME = 2,       /* I/O or execution failure */
  NBSIM_ERR_INVALID_ARGUMENT = 3 /* null handle or out-of-range argument */
} nbsim_status;

typedef enum nbsim_format { NBSIM_FORMAT_CSV = 0, NBSIM_FORMAT_JSON = 1 } nbsim_format;

typedef struct nbsim_config nbsim_config;
typedef struct nbsim_report nbsim_report;

NBSIM_API const char* nbsim_version(void);
NBSIM_API const char* nbsim_last_error(void);

/* Scenario construction. */
NBSIM_API nbsim_status nbsim_config_parse(const char* text, nbsim_config** out);
NBSIM_API nbsim_status nbsim_config_load(const char* path, nbsim_config** out);
NBSIM_API nbsim_status nbsim_config_from_preset(const char* name, nbsim_config** out);
/* Sets one dotted key (see the config documentation) and revalidates. */
NBSIM_API nbsim_status nbsim_config_set(nbsim_config* config, const char* key, const char* value);
NBSIM_API nbsim_status nbsim_config_set_seed(nbsim_config* config, uint64_t seed);
/* Canonical text; free with nbsim_string_free. */
NBSIM_API nbsim_status nbsim_config_serialize(const nbsim_config* config, char** out);
NBSIM_API void nbsim_config_free(nbsim_config* config);
NBSIM_API void nbsim_string_free(char* s);

/* Campaign execution and results. */
NBSIM_API nbsim_status nbsim_run(const nbsim_config* config, int collect_traces, nbsim_report** out);
NBSIM_API nbsim_status nbsim_report_write(const nbsim_report* report, nbsim_format format, const char* dir);
NBSIM_API size_t nbsim_report_drop_count(const nbsim_report* report);
NBSIM_API size_t nbsim_report_ue_count(const nbsim_report* report, size_t drop);
NBSIM_API double nbsim_report_coverage_probability(const nbsim_report* report, size_t drop);
/* Mean over drops of the per-drop mean UE transmit power; NaN when undefined. */
NBSIM_API double nbsim_report_mean_tx_power_dbm(const nbsim_report* report);
/* Interference-over-thermal at a cell in one drop; NaN when it has no interferers. */
NBSIM_API double nbsim_report_cell_iot_db(const nbsim_report* report, size_t drop, int cell_id);
NBSIM_API void nbsim_report_free(nbsim_report* report);

/* Link-level helpers. */
NBSIM_API nbsim_status nbsim_thermal_noise_dbm(double bandwidth_hz, double* out_dbm);
NBSIM_API nbsim_status nbsim_npusch_tx_power_dbm(double p_cmax_dbm, double p_o_npusch_dbm, double alpha,
                                                 double m_npusch, double path_loss_db, int repetitions,
                                                 double* out_dbm);

/* One-shot CLI run: exactly one of config_path / preset non-null. seed is
   applied when has_seed is nonzero. overrides holds n_overrides "key=value"
   strings applied before the seed. out_dir may be null (NBSIM_OUT, then
   "nbsim-out"). Returns the process exit code: 0, 1 or 2. */
NBSIM_API int nbsim_execute(const char* config_path, const char* preset, int has_seed, uint64_t seed,
                            const char* const* overrides, size_t n_overrides, const char* out_dir,
                            nbsim_format format, int trace, int verbosity);

#ifdef __cplusplus
}
#endif

#endif /* NBSIM_NBSIM_H */

/*
 * aft — Alexa forensic toolkit, C API.
 *
 * Everything heavy lives in the C++ core behind this flat interface:
 * opaque handles, integer status codes, and caller-freed strings, so the
 * library can back a CLI, language bindings, or another tool unchanged.
 *
 * Conventions:
 *   - Functions return aft_status; AFT_OK and AFT_PARTIAL both mean the
 *     operation ran to completion (PARTIAL: some per-endpoint failures were
 *     recorded as evidence rather than stopping the run).
 *   - On any other status, aft_last_error() describes what went wrong
 *     (thread-local, valid until the next call on the same thread).
 *   - char** out parameters receive malloc'd UTF-8 JSON; release with
 *     aft_string_free(). They may be NULL if the summary is not wanted.
 */

#ifndef AFT_H
#define AFT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aft_status {
  AFT_OK = 0,
  AFT_PARTIAL = 1,
  AFT_ERR_INVALID_ARGUMENT = 2,
  AFT_ERR_IO = 3,
  AFT_ERR_NOT_AN_EXPORT = 4,
  AFT_ERR_TRANSPORT = 5,
  AFT_ERR_INTEGRITY = 6,
  AFT_ERR_FIXTURE = 7,
  AFT_ERR_INTERNAL = 8
} aft_status;

const char* aft_version(void);
const char* aft_status_name(aft_status s);
const char* aft_last_error(void);
void aft_string_free(char* s);

/*
 * Option bag shared by the commands. Unknown keys are rejected.
 *
 * integer keys:
 *   parallelism      concurrent fetches during acquisition (default 1)
 *   delay_ms         inter-request delay (default 0)
 *   timeout_s        per-request timeout (default 10)
 *   join_window_ms   activity/card join window (default 5000)
 *   redact           1 masks identifiers in reports (default 1)
 *   captured_at_ms   fixed capture timestamp for reproducible runs
 * string keys:
 *   allow_hosts      comma-separated ingest host allowlist override
 *   pattern_file     JSON location-pattern table for the crosscheck
 *   user_id          contacts-endpoint user id override
 */
typedef struct aft_options aft_options;
aft_options* aft_options_new(void);
void aft_options_free(aft_options* o);
aft_status aft_options_set_int(aft_options* o, const char* key, long long value);
aft_status aft_options_set_string(aft_options* o, const char* key, const char* value);

/* Proxy export XML -> sealed case directory. */
aft_status aft_ingest(const char* export_path, const char* case_dir,
                      const aft_options* o, char** summary_json);

/* Full registry sweep against a live-style or mock host -> sealed case. */
aft_status aft_acquire(const char* base_url, const char* token, const char* case_dir,
                       const aft_options* o, char** summary_json);

/* Sealed case -> findings.json + timeline.csv in out_dir. */
aft_status aft_analyze(const char* case_dir, const char* out_dir,
                       const aft_options* o, char** summary_json);

/* Two sealed cases -> diff.json at out_path. */
aft_status aft_case_diff(const char* case_dir_a, const char* case_dir_b,
                         const char* out_path, const aft_options* o,
                         char** summary_json);

/* Endpoint registry, for tooling. */
int aft_registry_count(void);
char* aft_registry_json(void);

/* The built-in account fixture as JSON text; a template for custom ones. */
char* aft_default_fixture_json(void);

/* Fixture service. fixture_path NULL serves the built-in account. */
typedef struct aft_mock aft_mock;
aft_status aft_mock_start(const char* fixture_path, int port, aft_mock** out);
int aft_mock_port(const aft_mock* m);
/* Applies a scenario script (JSON text or file) to the running state and
 * returns the trace as a JSON array. */
aft_status aft_mock_run_script(aft_mock* m, const char* script_json_text,
                               char** trace_json);
aft_status aft_mock_run_script_file(aft_mock* m, const char* script_path,
                                    char** trace_json);
void aft_mock_stop(aft_mock* m); /* stops and frees the handle */

#ifdef __cplusplus
}
#endif

#endif /* AFT_H */

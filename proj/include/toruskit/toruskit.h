#ifndef TORUSKIT_TORUSKIT_H
#define TORUSKIT_TORUSKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(TK_BUILDING_LIBRARY)
#define TK_API __attribute__((visibility("default")))
#else
#define TK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tk_status {
  TK_OK = 0,
  TK_ERR_INVALID_ARGUMENT = 1,
  TK_ERR_OUT_OF_MEMORY = 2,
  TK_ERR_INTERNAL = 3
} tk_status;

typedef enum tk_verdict {
  TK_VERDICT_PASS = 0,
  TK_VERDICT_FAIL = 1,
  TK_VERDICT_ERROR = 2,
  TK_VERDICT_INCONCLUSIVE = 3
} tk_verdict;

typedef struct tk_options {
  uint64_t seed;
  unsigned jobs;
  /* Wall-clock budget in seconds; <= 0 means unlimited. */
  double budget_seconds;
} tk_options;

typedef struct tk_report tk_report;

TK_API void tk_options_init(tk_options* options);

/* Runs a command on a JSON document. On TK_OK, *report owns the result and must be
   released with tk_report_free. Mathematical failures and input errors are reported
   through the verdict and exit code, not the status. */
TK_API tk_status tk_run(const char* command, const char* input, size_t input_length, const tk_options* options,
                        tk_report** report);

TK_API tk_verdict tk_report_verdict(const tk_report* report);
TK_API int tk_report_exit_code(const tk_report* report);
/* Deterministic JSON with sorted keys. Valid until tk_report_free. */
TK_API const char* tk_report_machine(const tk_report* report);
TK_API const char* tk_report_text(const tk_report* report);
TK_API void tk_report_free(tk_report* report);

/* Number of commands and their names, in sorted order. */
TK_API size_t tk_command_count(void);
TK_API const char* tk_command_name(size_t index);

/* Message for the most recent non-OK status on this thread. */
TK_API const char* tk_last_error(void);
TK_API const char* tk_version(void);

#ifdef __cplusplus
}
#endif

#endif

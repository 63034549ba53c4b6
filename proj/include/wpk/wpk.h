/* C interface to the verification library. All strings are UTF-8. Strings
 * returned through `char**` are owned by the caller and released with
 * wpk_string_free. On any status other than WPK_OK, wpk_last_error() holds a
 * message for the calling thread. */
#ifndef WPK_WPK_H
#define WPK_WPK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define WPK_API __declspec(dllexport)
#elif defined(__GNUC__)
#define WPK_API __attribute__((visibility("default")))
#else
#define WPK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wpk_status {
  WPK_OK = 0,
  WPK_CHECK_FAILED = 1,
  WPK_CONFIG_ERROR = 2,
  WPK_MODEL_ERROR = 3,
  WPK_PARSE_ERROR = 4,
  WPK_EVAL_ERROR = 5,
  WPK_INVALID_ARGUMENT = 6,
  WPK_INTERNAL_ERROR = 7
} wpk_status;

typedef enum wpk_format { WPK_FORMAT_TEXT = 0, WPK_FORMAT_JSON = 1 } wpk_format;

typedef struct wpk_run wpk_run;
typedef struct wpk_expr wpk_expr;

typedef struct wpk_check_info {
  const char* name;   /* valid while the run is alive */
  const char* anchor;
  double max_residual;
  double tolerance;
  int pass;
  int hypothesis; /* nonzero for hypothesis checks of a conditional statement */
} wpk_check_info;

WPK_API const char* wpk_version(void);

/* Message for the last failed call on this thread; empty when none. */
WPK_API const char* wpk_last_error(void);

WPK_API void wpk_string_free(char* s);

/* Runs a verification described by a JSON config (keys: model, params,
 * checks, samples, seed, tolerances, format, output). Returns WPK_OK when the
 * run completed, whether or not its checks passed; *out then owns the run. */
WPK_API wpk_status wpk_verify(const char* config_json, wpk_run** out);

/* 1 when every check passed. */
WPK_API int wpk_run_passed(const wpk_run* run);
WPK_API size_t wpk_run_check_count(const wpk_run* run);
WPK_API wpk_status wpk_run_check(const wpk_run* run, size_t index, wpk_check_info* out);
/* Renders the report; WPK_FORMAT_JSON output is byte-stable for a fixed config. */
WPK_API wpk_status wpk_run_report(const wpk_run* run, wpk_format format, char** out);
WPK_API void wpk_run_free(wpk_run* run);

WPK_API wpk_status wpk_list_models(wpk_format format, char** out);

/* Expressions */
WPK_API wpk_status wpk_expr_parse(const char* source, wpk_expr** out);
WPK_API wpk_status wpk_expr_print(const wpk_expr* e, char** out);
/* Evaluates with variables bound by name; unbound variables are an error. */
WPK_API wpk_status wpk_expr_eval(const wpk_expr* e, const char* const* names, const double* values, size_t count,
                                 double* out);
/* Value and partial derivatives with respect to the first `count` bound
 * variables; `gradient` must hold `count` doubles. */
WPK_API wpk_status wpk_expr_eval_gradient(const wpk_expr* e, const char* const* names, const double* values,
                                          size_t count, double* value, double* gradient);
WPK_API void wpk_expr_free(wpk_expr* e);

#ifdef __cplusplus
}
#endif

#endif

#ifndef PEU_H
#define PEU_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

typedef enum PeuAgent {
  PEU_AGENT_NAIVE = 0,
  PEU_AGENT_SOPHISTICATED = 1,
  PEU_AGENT_GLOBAL = 2,
} PeuAgent;

typedef enum PeuStatus {
  PEU_STATUS_OK = 0,
  // A reproduction disagreed with an expected direction; the output is
  // still written.
  PEU_STATUS_MISMATCH = 1,
  // Malformed input: bad JSON, incoherent chances, unknown section.
  PEU_STATUS_SCHEMA = 2,
  // A number outside its domain, such as alpha above 1.
  PEU_STATUS_DOMAIN = 3,
  PEU_STATUS_NULL_POINTER = 4,
  PEU_STATUS_INDEX_OUT_OF_RANGE = 5,
  PEU_STATUS_INVALID_UTF8 = 6,
  PEU_STATUS_PANIC = 7,
} PeuStatus;

typedef enum PeuStrategy {
  PEU_STRATEGY_RR = 0,
  PEU_STRATEGY_AA = 1,
  PEU_STRATEGY_AR = 2,
  PEU_STRATEGY_RA = 3,
} PeuStrategy;

// A validated scenario.
typedef struct PeuScenario PeuScenario;

// The outcome of one simulated run through the two-stage tree.
typedef struct PeuTrace PeuTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next call into the library on this thread.
const char *peu_last_error_message(void);

// The eight built-in treatments with option (4) at shortfall `cost_c`,
// evaluated under default parameters.
enum PeuStatus peu_scenario_builtin(double cost_c, struct PeuScenario **out_scenario);

// Parses and validates a scenario from a UTF-8, nul-terminated JSON string.
//
// # Safety
// `json` must be null or point to a nul-terminated string.
enum PeuStatus peu_scenario_from_json(const char *json, struct PeuScenario **out_scenario);

// # Safety
// `scenario` must be null or a handle from this library not yet freed.
void peu_scenario_free(struct PeuScenario *scenario);

enum PeuStatus peu_scenario_option_count(const struct PeuScenario *scenario, uintptr_t *out_count);

// Social value of option `index` under the scenario's parameters.
enum PeuStatus peu_scenario_option_value(const struct PeuScenario *scenario,
                                         uintptr_t index,
                                         double *out_value);

// Value of option `left` minus value of option `right`. Zero within 1e-9
// means indifference.
enum PeuStatus peu_scenario_compare(const struct PeuScenario *scenario,
                                    uintptr_t left,
                                    uintptr_t right,
                                    double *out_margin);

enum PeuStatus peu_win_probability(enum PeuStrategy plan, double p, double *out_probability);

enum PeuStatus peu_expected_wellbeing(enum PeuStrategy plan,
                                      double p,
                                      double w_fail,
                                      double *out_value);

// Hurwicz value of a plan over every urn composition; `alpha` weights the
// worst case.
enum PeuStatus peu_strategy_hurwicz(enum PeuStrategy plan,
                                    double alpha,
                                    double w_fail,
                                    double *out_value);

enum PeuStatus peu_monte_carlo(enum PeuStrategy plan,
                               double p,
                               uint64_t samples,
                               uint64_t seed,
                               double *out_estimate);

enum PeuStatus peu_simulate(enum PeuAgent agent,
                            double alpha,
                            double w_fail,
                            double p,
                            uint64_t seed,
                            struct PeuTrace **out_trace);

enum PeuStatus peu_trace_realized(const struct PeuTrace *trace, enum PeuStrategy *out_plan);

enum PeuStatus peu_trace_won(const struct PeuTrace *trace, bool *out_won);

enum PeuStatus peu_trace_wellbeing(const struct PeuTrace *trace, double *out_wellbeing);

// # Safety
// `trace` must be null or a handle from this library not yet freed.
void peu_trace_free(struct PeuTrace *trace);

// JSON report for section 3 or 4 under default parameters. Returns
// `PEU_STATUS_MISMATCH` with the report written when an expected direction
// fails. Free the string with [`peu_string_free`].
enum PeuStatus peu_reproduce_json(uint8_t section, uint64_t seed, char **out_json);

// # Safety
// `s` must be null or a string returned by this library not yet freed.
void peu_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PEU_H */

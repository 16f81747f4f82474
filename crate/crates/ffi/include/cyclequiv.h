#ifndef CYCLEQUIV_H
#define CYCLEQUIV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum CqStatus {
  CQ_STATUS_OK = 0,
  CQ_STATUS_NULL_POINTER = 1,
  CQ_STATUS_INVALID_UTF8 = 2,
  CQ_STATUS_PARSE = 3,
  CQ_STATUS_INVALID_INPUT = 4,
  CQ_STATUS_NOT_ON_SURFACE = 5,
  CQ_STATUS_IMPROPER = 6,
  CQ_STATUS_SINGULAR = 7,
  CQ_STATUS_POSITIVE_DIMENSIONAL = 8,
  CQ_STATUS_DEGENERATE = 9,
  CQ_STATUS_NUMERIC = 10,
  CQ_STATUS_PANIC = 11,
} CqStatus;

/**
 * Seed and tolerances for a run.
 */
typedef struct CqConfig CqConfig;

/**
 * A 0-cycle.
 */
typedef struct CqCycle CqCycle;

/**
 * A surface `{f = 0}` in P^3.
 */
typedef struct CqSurface CqSurface;

/**
 * Witnesses bringing `(s1, e1)` and `(s2, e2)` to the common `(s, e)`.
 */
typedef struct CqMultiDegreeMatch {
  uint64_t s;
  uint64_t e;
  uint64_t t1;
  uint64_t t2;
  uint64_t r1;
  uint64_t r2;
  uint64_t pad1;
  uint64_t pad2;
} CqMultiDegreeMatch;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *cq_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cq_string_free(char *s);

/**
 * A configuration with the given seed and default tolerances.
 */
struct CqConfig *cq_config_new(uint64_t seed);

/**
 * # Safety
 * `cfg` must be null or come from `cq_config_new`.
 */
void cq_config_free(struct CqConfig *cfg);

/**
 * Sets the point identification tolerance.
 *
 * # Safety
 * `cfg` must be a live configuration.
 */
enum CqStatus cq_config_set_point_tol(struct CqConfig *cfg, double tol);

/**
 * Parses a surface equation such as `"X^4 + Y^4 + Z^4 + T^4"`.
 *
 * # Safety
 * `equation` must be a nul-terminated string and `out` writable.
 */
enum CqStatus cq_surface_parse(const char *equation, struct CqSurface **out);

/**
 * Degree of the surface, or 0 for a null handle.
 *
 * # Safety
 * `surface` must be null or a live surface.
 */
uint32_t cq_surface_degree(const struct CqSurface *surface);

/**
 * # Safety
 * `surface` must be null or come from `cq_surface_parse`.
 */
void cq_surface_free(struct CqSurface *surface);

/**
 * The cycle cut on the surface by the line through `p` and `q`
 * (coordinates as `"x, y, z, t"`). `cfg` may be null.
 *
 * # Safety
 * Pointers must be live handles or nul-terminated strings; `out` writable.
 */
enum CqStatus cq_line_cycle(const struct CqSurface *surface,
                            const char *p,
                            const char *q,
                            const struct CqConfig *cfg,
                            struct CqCycle **out);

/**
 * The cycle `[a = h = f = 0]`. `cfg` may be null.
 *
 * # Safety
 * Pointers must be live handles or nul-terminated strings; `out` writable.
 */
enum CqStatus cq_ci_cycle(const struct CqSurface *surface,
                          const char *a,
                          const char *h,
                          const struct CqConfig *cfg,
                          struct CqCycle **out);

/**
 * Points of the surface where the first `r` polars of `q` vanish
 * (`r >= 3`; `r = 2` gives a curve and fails with
 * `PositiveDimensional`). `cfg` may be null.
 *
 * # Safety
 * Pointers must be live handles or nul-terminated strings; `out` writable.
 */
enum CqStatus cq_polar_locus(const struct CqSurface *surface,
                             const char *q,
                             uint32_t r,
                             const struct CqConfig *cfg,
                             struct CqCycle **out);

/**
 * Degree (sum of multiplicities) of a cycle, or 0 for a null handle.
 *
 * # Safety
 * `cycle` must be null or a live cycle.
 */
int64_t cq_cycle_degree(const struct CqCycle *cycle);

/**
 * Number of distinct points in a cycle, or 0 for a null handle.
 *
 * # Safety
 * `cycle` must be null or a live cycle.
 */
uintptr_t cq_cycle_len(const struct CqCycle *cycle);

/**
 * The cycle as JSON; release with `cq_string_free`. Null on error.
 *
 * # Safety
 * `cycle` must be a live cycle.
 */
char *cq_cycle_to_json(const struct CqCycle *cycle);

/**
 * # Safety
 * `cycle` must be null or a cycle returned by this library.
 */
void cq_cycle_free(struct CqCycle *cycle);

/**
 * Expected dimension of the fibre of lines with contact order `r` on a
 * surface of degree `d`.
 *
 * # Safety
 * `fibre` must be writable.
 */
enum CqStatus cq_xr_dimension(uint32_t d, uint32_t r, int64_t *fibre);

/**
 * Common multidegree for expressions of multidegrees `(s1, e1)` and `(s2, e2)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CqStatus cq_match_multidegrees(uint64_t s1,
                                    uint64_t e1,
                                    uint64_t s2,
                                    uint64_t e2,
                                    struct CqMultiDegreeMatch *out);

/**
 * Runs a command line (without the program name), for example
 * `{"xr-dim", "--d", "6", "--r", "5"}`, and stores its report in `*out`.
 * Returns the command's exit code, or -1 if the arguments are unusable.
 *
 * # Safety
 * `argv` must hold `argc` nul-terminated strings; `out` writable.
 */
int32_t cq_run(uintptr_t argc, const char *const *argv, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYCLEQUIV_H */

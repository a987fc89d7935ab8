#ifndef DENSITYLAB_H
#define DENSITYLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The nonzero values match the exit codes of the
 * `densitylab` binary where both exist.
 */
typedef enum DlStatus {
  DL_STATUS_OK = 0,
  DL_STATUS_INVALID_INPUT = 2,
  DL_STATUS_COMPUTE_FAILED = 3,
  DL_STATUS_NULL_POINTER = 4,
  DL_STATUS_PANIC = 5,
} DlStatus;

/**
 * Finite Weyl–Heisenberg representation of `ℤ_N` with the lattice
 * `aℤ_N × bℤ_N`.
 */
typedef struct DlFiniteWh DlFiniteWh;

/**
 * Fuchsian group given by generators.
 */
typedef struct DlGroup DlGroup;

/**
 * Symplectic lattice basis.
 */
typedef struct DlLattice DlLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *dl_version(void);

/**
 * Message of the last failed call on this thread, or an empty string.
 * Valid until the next call into the library on this thread.
 */
const char *dl_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void dl_string_free(char *s);

/**
 * Runs a JSON configuration, as with `densitylab run --config`. On
 * success `*out` receives the report (JSON or CSV per the configured
 * format); `output.path` is ignored. On failure `*out` is NULL and
 * [`dl_last_error`] holds the JSON error document.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DlStatus dl_run_config(const char *config_json, char **out);

/**
 * Verdict for an invariant such as `"1/2"` or `"1+sqrt(2)"` under a
 * Kleppner status `"holds"`, `"fails"` or `"unknown"`, as JSON.
 *
 * # Safety
 * Both strings must be NUL-terminated and `out` a valid pointer.
 */
enum DlStatus dl_classify(const char *invariant,
                          const char *kleppner,
                          bool meets_center,
                          char **out);

/**
 * Parses a basis such as `"1,0;0,1/2"` or `"sqrt(2),0;0,1"`.
 *
 * # Safety
 * `basis` must be NUL-terminated and `out` a valid pointer.
 */
enum DlStatus dl_lattice_parse(const char *basis, struct DlLattice **out);

/**
 * # Safety
 * `l` must be NULL or a handle from [`dl_lattice_parse`], not yet freed.
 */
void dl_lattice_free(struct DlLattice *l);

/**
 * # Safety
 * `l` must be a live handle and `out` a valid pointer.
 */
enum DlStatus dl_lattice_covolume(const struct DlLattice *l, double *out);

/**
 * Exact covolume as text, e.g. `"sqrt(2)"`, or the decimal value for
 * float bases.
 *
 * # Safety
 * `l` must be a live handle and `out` a valid pointer.
 */
enum DlStatus dl_lattice_covolume_text(const struct DlLattice *l, char **out);

/**
 * Exact Kleppner check, as JSON `{status, witness}`.
 *
 * # Safety
 * `l` must be a live handle and `out` a valid pointer.
 */
enum DlStatus dl_lattice_kleppner(const struct DlLattice *l, char **out);

/**
 * Exhaustive witness search up to `radius`, as JSON.
 *
 * # Safety
 * `l` must be a live handle and `out` a valid pointer.
 */
enum DlStatus dl_lattice_kleppner_brute(const struct DlLattice *l, uint32_t radius, char **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum DlStatus dl_finite_wh_new(size_t n, size_t a, size_t b, struct DlFiniteWh **out);

/**
 * # Safety
 * `h` must be NULL or a handle from [`dl_finite_wh_new`], not yet freed.
 */
void dl_finite_wh_free(struct DlFiniteWh *h);

/**
 * Frame and Riesz report for the window `re[k] + i·im[k]`, `k < len`,
 * as JSON. `im` may be NULL for a real window.
 *
 * # Safety
 * `h` must be a live handle, `re` (and `im` unless NULL) must point to
 * `len` doubles, and `out` must be a valid pointer.
 */
enum DlStatus dl_finite_wh_report(const struct DlFiniteWh *h,
                                  const double *re,
                                  const double *im,
                                  size_t len,
                                  double tol,
                                  char **out);

/**
 * Bundled group by name, `"psl2z"` or `"sl2z"`.
 *
 * # Safety
 * `name` must be NUL-terminated and `out` a valid pointer.
 */
enum DlStatus dl_group_bundled(const char *name, struct DlGroup **out);

/**
 * Group from the JSON generator format accepted by `--group-file`.
 *
 * # Safety
 * `json` must be NUL-terminated and `out` a valid pointer.
 */
enum DlStatus dl_group_from_json(const char *json, struct DlGroup **out);

/**
 * # Safety
 * `g` must be NULL or a group handle, not yet freed.
 */
void dl_group_free(struct DlGroup *g);

/**
 * Weighted Bergman classification at base point `base` (e.g. `"2i"`),
 * as JSON.
 *
 * # Safety
 * `g` must be a live handle, `base` NUL-terminated and `out` a valid
 * pointer.
 */
enum DlStatus dl_bergman_classify(const struct DlGroup *g,
                                  double alpha,
                                  const char *base,
                                  size_t stabilizer_radius,
                                  char **out);

/**
 * Zibulski–Zeevi frame bounds of the Gaussian on `ℤ × (p/q)ℤ`.
 *
 * # Safety
 * `a` and `b` must be valid pointers.
 */
enum DlStatus dl_gabor_zz_bounds(int64_t p,
                                 int64_t q,
                                 size_t grid,
                                 size_t trunc,
                                 double *a,
                                 double *b);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DENSITYLAB_H */

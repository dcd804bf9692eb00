/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef DLFOLD_H
#define DLFOLD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DlfStatus {
  DLF_STATUS_OK = 0,
  DLF_STATUS_NULL_POINTER = 1,
  DLF_STATUS_INVALID_ARGUMENT = 2,
  DLF_STATUS_PARSE = 3,
  DLF_STATUS_DOMAIN = 4,
  DLF_STATUS_BUFFER_TOO_SMALL = 5,
  DLF_STATUS_PANIC = 6,
} DlfStatus;

typedef enum DlfMode {
  DLF_MODE_AI = 0,
  DLF_MODE_AII = 1,
  DLF_MODE_BI = 2,
  DLF_MODE_BII = 3,
  DLF_MODE_SYM_PLUS = 4,
  DLF_MODE_SYM_MINUS = 5,
} DlfMode;

typedef enum DlfRegime {
  DLF_REGIME_FULL_RANGE = 0,
  DLF_REGIME_FINITE = 1,
  DLF_REGIME_CRITICAL = 2,
} DlfRegime;

typedef enum DlfSide {
  DLF_SIDE_ABOVE = 0,
  DLF_SIDE_BELOW = 1,
} DlfSide;

// A one-parameter rigid folding motion of a pattern.
typedef struct DlfMotion DlfMotion;

// A crease pattern.
typedef struct DlfPattern DlfPattern;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, empty after a success.
// Valid until the next call into the library from the same thread.
const char *dlf_last_error(void);

// Library version as a static NUL-terminated string.
const char *dlf_version(void);

// Parses a FOLD document of `len` bytes.
//
// # Safety
// `bytes` must point to `len` readable bytes; `out` must be writable.
enum DlfStatus dlf_pattern_load_fold(const uint8_t *bytes, size_t len, struct DlfPattern **out);

// # Safety
// `pattern` must come from this library and not be used afterwards.
void dlf_pattern_free(struct DlfPattern *pattern);

// Vertex, crease and face counts; any output may be null.
//
// # Safety
// `pattern` must be a live handle; non-null outputs must be writable.
enum DlfStatus dlf_pattern_counts(const struct DlfPattern *pattern,
                                  size_t *vertices,
                                  size_t *creases,
                                  size_t *faces);

// Coordinates of vertex `index`.
//
// # Safety
// `pattern` must be a live handle; `x` and `y` must be writable.
enum DlfStatus dlf_pattern_vertex(const struct DlfPattern *pattern,
                                  size_t index,
                                  double *x,
                                  double *y);

// Serializes to FOLD. `len` receives the size in bytes; when `cap` is too
// small nothing is copied and the call returns `BufferTooSmall`.
//
// # Safety
// `pattern` must be a live handle; `buf` must hold `cap` writable bytes.
enum DlfStatus dlf_pattern_save_fold(const struct DlfPattern *pattern,
                                     uint8_t *buf,
                                     size_t cap,
                                     size_t *len);

// SVG drawing, with the buffer protocol of [`dlf_pattern_save_fold`].
//
// # Safety
// As for [`dlf_pattern_save_fold`].
enum DlfStatus dlf_pattern_save_svg(const struct DlfPattern *pattern,
                                    uint8_t *buf,
                                    size_t cap,
                                    size_t *len);

// Largest closure residual of the pattern folded by `angles`.
//
// # Safety
// `angles` must hold one value per crease; `residual` must be writable.
enum DlfStatus dlf_pattern_fold_residual(const struct DlfPattern *pattern,
                                         const double *angles,
                                         size_t count,
                                         double *residual);

// Miura-ori with `rows × cols` cells and sector angle `alpha`.
//
// # Safety
// `out` must be writable.
enum DlfStatus dlf_gen_miura(size_t rows, size_t cols, double alpha, struct DlfPattern **out);

// Elongated Yoshimura; `elongation > 1`.
//
// # Safety
// `out` must be writable.
enum DlfStatus dlf_gen_yoshimura(size_t rows,
                                 size_t cols,
                                 double elongation,
                                 struct DlfPattern **out);

// Double-lined Miura-ori with the same `theta` at every vertex.
//
// # Safety
// `out` must be writable.
enum DlfStatus dlf_gen_dl_miura(size_t rows,
                                size_t cols,
                                double alpha,
                                double theta,
                                struct DlfPattern **out);

// Double-lined elongated Yoshimura.
//
// # Safety
// `out` must be writable.
enum DlfStatus dlf_gen_dl_yoshimura(size_t rows,
                                    size_t cols,
                                    double elongation,
                                    double theta,
                                    struct DlfPattern **out);

// Flat-foldable degree-4 vertex with sectors `α, β, π−α, π−β`.
//
// # Safety
// `out` must be writable.
enum DlfStatus dlf_gen_single(double alpha, double beta, struct DlfPattern **out);

// Double-lined degree-4 vertex in a named mode. Radii are 1 unless that
// pushes a corner out of its sector, in which case they are fitted.
//
// # Safety
// `out` must be writable.
enum DlfStatus dlf_double_line(double alpha,
                               double beta,
                               double theta,
                               enum DlfMode mode,
                               struct DlfPattern **out);

// Regime of the pair sums at `theta`; `m` receives the extreme fold of a
// finite regime and 0 otherwise.
//
// # Safety
// `regime` must be writable; `m` may be null.
enum DlfStatus dlf_classify_theta(enum DlfMode mode,
                                  double alpha,
                                  double beta,
                                  double theta,
                                  enum DlfRegime *regime,
                                  double *m);

// Number of folding modes of the symmetric degree-2n double-line vertex.
//
// # Safety
// `count` must be writable.
enum DlfStatus dlf_count_modes(size_t n, uint64_t *count);

// `c · tan((π − ρ_max)/2)`.
double dlf_max_thickness(double half_width, double rho_max);

// Finds a rigid-folding motion of the pattern.
//
// # Safety
// `pattern` must be a live handle; `out` must be writable.
enum DlfStatus dlf_motion_new(const struct DlfPattern *pattern, struct DlfMotion **out);

// # Safety
// `motion` must come from this library and not be used afterwards.
void dlf_motion_free(struct DlfMotion *motion);

// Fold angles `2 atan(m_e t)` of every crease at parameter `t`.
//
// # Safety
// `angles` must hold `count` writable values, one per crease.
enum DlfStatus dlf_motion_angles(const struct DlfMotion *motion,
                                 double t,
                                 double *angles,
                                 size_t count);

// Thickness bound and smallest panel clearance for panels of thickness
// `fraction` times the bound, over `samples` log-spaced motion steps up
// to `t_max`.
//
// # Safety
// `motion` must be a live handle; `bound` and `clearance` must be writable.
enum DlfStatus dlf_motion_thick_clearance(const struct DlfMotion *motion,
                                          enum DlfSide side,
                                          double fraction,
                                          double t_max,
                                          size_t samples,
                                          double *bound,
                                          double *clearance);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DLFOLD_H */

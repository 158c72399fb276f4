#ifndef TWOBRIDGE_H
#define TWOBRIDGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TbStatus {
  TB_STATUS_OK = 0,
  TB_STATUS_INVALID_INPUT = 1,
  TB_STATUS_INTERNAL = 2,
  TB_STATUS_NULL_POINTER = 3,
  TB_STATUS_PANIC = 4,
} TbStatus;

/*
 Opaque triangulation of `M_{n,m}(p, q)`.
 */
typedef struct TbTriangulation TbTriangulation;

typedef struct TbClassification {
  uint64_t canonical_q;
  bool is_knot;
  bool is_torus;
  uint64_t ell;
  /*
   Zero when the class has no `k + 1/m` form.
   */
  uint64_t km_k;
  uint64_t km_m;
  uint64_t expansion_len;
} TbClassification;

typedef struct TbLowerEstimate {
  /*
   4.0 or 2√2.
   */
  double c;
  uint64_t min_n;
  bool valid;
  /*
   NaN when undefined.
   */
  double value;
} TbLowerEstimate;

typedef struct TbBounds {
  uint64_t upper;
  bool has_improved_upper;
  uint64_t improved_upper;
  bool is_hyperbolic;
  bool excluded_pair;
  /*
   The `c = 2√2` and `c = 4` estimates; NaN values for torus links.
   */
  struct TbLowerEstimate lower[2];
  /*
   NaN for torus links.
   */
  double vol_lower;
  double vol_upper;
  /*
   NaN unless a volume was supplied.
   */
  double vol_based_lower;
} TbBounds;

typedef struct TbValidation {
  uint64_t tet_count;
  uint64_t vertex_count;
  uint64_t edge_count;
  int64_t euler_characteristic;
  bool orientable;
  bool all_faces_glued;
  bool closed_manifold;
} TbValidation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the calling thread's last error message, or returns null if the
 last call succeeded. Free the result with [`tb_string_free`].
 */
char *tb_last_error_message(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must be null or a pointer obtained from this library and not freed yet.
 */
void tb_string_free(char *s);

/*
 Classifies `K(p, q)`.

 # Safety
 `out` must be null or valid for writes.
 */
enum TbStatus tb_classify(uint64_t p, uint64_t q, struct TbClassification *out);

/*
 Writes up to `cap` coefficients of the minimized expansion into `buf` and
 the full length into `len`.

 # Safety
 `buf` must be valid for `cap` writes (or null when `cap` is 0); `len` must
 be valid for writes.
 */
enum TbStatus tb_expansion(uint64_t p, uint64_t q, uint64_t *buf, size_t cap, size_t *len);

/*
 Complexity and volume bounds. Pass NaN as `vol` when no volume is known.

 # Safety
 `out` must be null or valid for writes.
 */
enum TbStatus tb_bounds(uint64_t p, uint64_t q, uint64_t n, double vol, struct TbBounds *out);

/*
 Builds the triangulation of `M_{n,m}(p, q)`.

 # Safety
 `out` must be null or valid for writes. On success `*out` owns a handle
 to be released with [`tb_triangulation_free`].
 */
enum TbStatus tb_triangulation_new(uint64_t p,
                                   uint64_t q,
                                   uint64_t n,
                                   uint64_t m,
                                   struct TbTriangulation **out);

/*
 Releases a handle. Null is ignored.

 # Safety
 `h` must be null or a live handle from [`tb_triangulation_new`].
 */
void tb_triangulation_free(struct TbTriangulation *h);

/*
 # Safety
 `h` must be a live handle; `out` must be valid for writes.
 */
enum TbStatus tb_triangulation_validate(const struct TbTriangulation *h, struct TbValidation *out);

/*
 Gluing table in the text format. Free the result with [`tb_string_free`].

 # Safety
 `h` must be a live handle; `out` must be valid for writes.
 */
enum TbStatus tb_triangulation_to_text(const struct TbTriangulation *h, char **out);

/*
 First homology: free rank in `free_rank`, and a description such as
 `Z/4 + Z/4` in `text` (free with [`tb_string_free`]).

 # Safety
 `h` must be a live handle; the output pointers must be valid for writes.
 */
enum TbStatus tb_triangulation_h1(const struct TbTriangulation *h,
                                  uint64_t *free_rank,
                                  char **text);

/*
 Full report as JSON. Free the result with [`tb_string_free`].

 # Safety
 `out` must be valid for writes.
 */
enum TbStatus tb_report_json(uint64_t p, uint64_t q, uint64_t n, uint64_t m, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWOBRIDGE_H */

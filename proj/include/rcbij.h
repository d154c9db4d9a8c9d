/* rcbij.h — C API for the rigged-configuration / KR-crystal bijection library.
 *
 * All structured data crosses this boundary as JSON text; every function that
 * produces output allocates a NUL-terminated string which the caller must
 * release with rcbij_string_free().  Functions return RCBIJ_OK on success or a
 * negative error code; rcbij_last_error() returns a human-readable message for
 * the most recent failure on the given context.
 */

#ifndef RCBIJ_H
#define RCBIJ_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define RCBIJ_OK 0
#define RCBIJ_ERR_INVALID_ARGUMENT (-1) /* malformed JSON / bad parameters  */
#define RCBIJ_ERR_UNSUPPORTED (-2)      /* out-of-scope type or operation   */
#define RCBIJ_ERR_BUDGET (-3)           /* element budget exceeded          */
#define RCBIJ_ERR_VERIFY (-4)           /* a verification suite failed      */
#define RCBIJ_ERR_INTERNAL (-5)         /* invariant violation (bug)        */

/* Opaque evaluation context.  Holds the element budget, cached crystal
 * graphs, and the last error message.  Not thread-safe; create one context
 * per thread. */
typedef struct rcbij_context rcbij_context;

rcbij_context* rcbij_context_create(void);
void rcbij_context_destroy(rcbij_context* ctx);

/* Maximum number of crystal elements any single construction may
 * materialize.  Default 50000. */
void rcbij_context_set_budget(rcbij_context* ctx, int64_t budget);
int64_t rcbij_context_budget(const rcbij_context* ctx);

const char* rcbij_last_error(const rcbij_context* ctx);
void rcbij_string_free(char* s);

const char* rcbij_version(void);

/* Static information about an affine type: rank, Cartan matrix, marks,
 * comarks, scaling factors, folding target.  `type` uses names like
 * "E6~1", "D5~2", "A3~1". */
int rcbij_type_info(rcbij_context* ctx, const char* type, char** out_json);

/* Enumerate highest-weight rigged configurations for the tensor product
 * described by `spec_json` (JSON array of [r, s] pairs).  If `weight_json`
 * is non-NULL (JSON array of fundamental-weight coefficients), restrict to
 * that classical weight.  Output: JSON array of rigged configurations with
 * cocharge values. */
int rcbij_enumerate(rcbij_context* ctx, const char* type, const char* spec_json,
                    const char* weight_json, char** out_json);

/* Apply the bijection to one rigged configuration (JSON object with keys
 * "type", "spec", "nu").  Output holds the tensor product in both display
 * and structured form plus the energy statistic. */
int rcbij_phi(rcbij_context* ctx, const char* rc_json, char** out_json);

/* Inverse direction: `elem_json` holds {"type","spec","factors":[...]} with
 * structured factor encodings as produced by rcbij_phi.  Output: the rigged
 * configuration. */
int rcbij_phi_inv(rcbij_context* ctx, const char* elem_json, char** out_json);

/* Cocharge of a rigged configuration (JSON as above). */
int rcbij_cocharge(rcbij_context* ctx, const char* rc_json, char** out_json);

/* One-dimensional sums and fermionic polynomials for every classical weight
 * reachable in the given spec.  Output: array of {weight, X, M} records with
 * polynomials as coefficient maps. */
int rcbij_xm(rcbij_context* ctx, const char* type, const char* spec_json,
             char** out_json);

/* Golden tables: the (rigged configuration -> KR tableau) rows for B^{r,1},
 * asciibetically sorted, one row per line. */
int rcbij_tables(rcbij_context* ctx, const char* type, int r, char** out_text);

/* Named verification suites: "xm", "stats", "rmatrix", "virtual",
 * "appendix".  Returns RCBIJ_OK and a JSON report when the suite passes;
 * RCBIJ_ERR_VERIFY with the first counterexample serialized otherwise. */
int rcbij_verify(rcbij_context* ctx, const char* suite, const char* type,
                 const char* spec_json, char** out_json);

/* Crystal graph of the tensor product as JSON (nodes with display names,
 * arrows labelled by color).  Subject to the element budget. */
int rcbij_graph(rcbij_context* ctx, const char* type, const char* spec_json,
                char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RCBIJ_H */

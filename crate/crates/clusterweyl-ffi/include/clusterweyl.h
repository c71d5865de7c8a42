#ifndef CLUSTERWEYL_H
#define CLUSTERWEYL_H

#include <stdbool.h>
#include <stddef.h>

// Result codes.
typedef enum CwStatus {
  CW_STATUS_OK = 0,
  CW_STATUS_NULL_POINTER = 1,
  CW_STATUS_INVALID_UTF8 = 2,
  CW_STATUS_INVALID_ARGUMENT = 3,
  CW_STATUS_FROZEN_VERTEX = 4,
  CW_STATUS_UNKNOWN_VERTEX = 5,
  CW_STATUS_ENGINE = 6,
  CW_STATUS_VERIFICATION_FAILED = 7,
  CW_STATUS_PANIC = 8,
} CwStatus;

// Opaque quiver handle.
typedef struct CwQuiver CwQuiver;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message on this thread, or null. Owned by the library and
// valid until the next failing call on the same thread.
const char *cw_last_error(void);

// Library version, static.
const char *cw_version(void);

// Builds `Q_m` for a Cartan type such as `"C"` with rank `n`.
//
// # Safety
// `cartan` must be a nul-terminated string and `out` writable.
enum CwStatus cw_quiver_build_qm(const char *cartan, size_t n, size_t m, struct CwQuiver **out);

// Builds any named quiver from a JSON build spec, e.g.
// `{"kind":"tilde","type":"B","n":3,"k":1}`.
//
// # Safety
// `spec_json` must be a nul-terminated string and `out` writable.
enum CwStatus cw_quiver_build(const char *spec_json, struct CwQuiver **out);

// Parses a quiver from its JSON form.
//
// # Safety
// `json` must be a nul-terminated string and `out` writable.
enum CwStatus cw_quiver_from_json(const char *json, struct CwQuiver **out);

// Releases a handle; null is ignored.
//
// # Safety
// `q` must come from this library and not be used afterwards.
void cw_quiver_free(struct CwQuiver *q);

// Number of vertices, frozen included.
//
// # Safety
// `q` must be a live handle and `out` writable.
enum CwStatus cw_quiver_len(const struct CwQuiver *q, size_t *out);

// Mutates in place at a vertex label such as `"v:1:2"`. The handle is
// unchanged on failure.
//
// # Safety
// `q` must be a live handle and `vertex` a nul-terminated string.
enum CwStatus cw_quiver_mutate(struct CwQuiver *q, const char *vertex);

// Applies a JSON step list (`[{"mut":"v:1:1"},{"perm":{...}}]`) in place.
//
// # Safety
// `q` must be a live handle and `seq_json` a nul-terminated string.
enum CwStatus cw_quiver_apply(struct CwQuiver *q, const char *seq_json);

// Labeled equality of two quivers.
//
// # Safety
// Both handles must be live and `out` writable.
enum CwStatus cw_quiver_equal(const struct CwQuiver *a, const struct CwQuiver *b, bool *out);

// Normalized JSON; free with [`cw_string_free`].
//
// # Safety
// `q` must be a live handle and `out` writable.
enum CwStatus cw_quiver_to_json(const struct CwQuiver *q, char **out);

// Graphviz DOT; free with [`cw_string_free`].
//
// # Safety
// `q` must be a live handle and `out` writable.
enum CwStatus cw_quiver_to_dot(const struct CwQuiver *q, char **out);

// Runs a check by its CLI name (`braid`, `quiver`, `green-dt`, …) on a
// Cartan type and writes the certificate JSON. Returns
// `VerificationFailed` with the certificate still written when the verdict
// is fail.
//
// # Safety
// `check` and `cartan` must be nul-terminated strings; `cartan` may be null
// for checks without a type. `cert_json` must be writable.
enum CwStatus cw_verify(const char *check,
                        const char *cartan,
                        size_t n,
                        size_t m,
                        char **cert_json);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void cw_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLUSTERWEYL_H */

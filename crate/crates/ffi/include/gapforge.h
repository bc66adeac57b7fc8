#ifndef GAPFORGE_H
#define GAPFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Which bound [`gf_verify`] checks.
typedef enum GfCheck {
  // Order-1 gap; `k` is ignored.
  GF_CHECK_BASE_GAP = 0,
  GF_CHECK_NO_CASE_BOUND = 1,
  GF_CHECK_PAIRWISE_L2 = 2,
  GF_CHECK_INFTY_RECURRENCE = 3,
} GfCheck;

// Generator selector for [`gf_label_cover_generate`].
typedef enum GfGenerator {
  GF_GENERATOR_PLANTED = 0,
  GF_GENERATOR_RANDOM = 1,
  // `colors` is per part; no noisy hyperedges.
  GF_GENERATOR_DISJOINT = 2,
} GfGenerator;

// Result code of every fallible call.
typedef enum GfStatus {
  GF_STATUS_OK = 0,
  GF_STATUS_NULL_POINTER = 1,
  GF_STATUS_INVALID_ARGUMENT = 2,
  GF_STATUS_UNSUPPORTED = 3,
  GF_STATUS_CAP_EXCEEDED = 4,
  GF_STATUS_PRECONDITION = 5,
  GF_STATUS_OVERFLOW = 6,
  GF_STATUS_EXHAUSTED = 7,
  GF_STATUS_PARSE = 8,
  GF_STATUS_VERSION = 9,
  GF_STATUS_KIND = 10,
  GF_STATUS_IO = 11,
  GF_STATUS_PANIC = 12,
} GfStatus;

// Opaque label cover instance.
typedef struct GfLabelCover GfLabelCover;

// Opaque modified (0/1) vector system.
typedef struct GfModifiedVs GfModifiedVs;

// Opaque reduction instance.
typedef struct GfReduction GfReduction;

// Opaque vector system over a finite field.
typedef struct GfVectorSystem GfVectorSystem;

// Enumeration limits for the solver and the verifiers. Zero selects the default.
typedef struct GfCaps {
  uint64_t paths;
  uint64_t dims;
  uint64_t pairs;
  uint64_t assignments;
} GfCaps;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// owned by the library and valid until the next call on this thread.
const char *gf_last_error(void);

// Library version as a static string.
const char *gf_version(void);

// Release a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void gf_string_free(char *s);

// bell_k(p) as a decimal string.
//
// # Safety
// `out` must be a valid pointer.
enum GfStatus gf_bell(uint32_t k, uint64_t p, char **out);

// Parse a label cover file.
//
// # Safety
// `json` must be NUL-terminated; `out` must be valid.
enum GfStatus gf_label_cover_from_json(const char *json, struct GfLabelCover **out);

// Seeded instance generator.
//
// # Safety
// `out` must be valid.
enum GfStatus gf_label_cover_generate(enum GfGenerator generator,
                                      uint64_t r,
                                      uint64_t part_size,
                                      uint64_t labels,
                                      uint64_t colors,
                                      uint64_t edges,
                                      uint64_t seed,
                                      struct GfLabelCover **out);

// Canonical JSON of a label cover instance.
//
// # Safety
// `lc` must be a live handle; `out` must be valid.
enum GfStatus gf_label_cover_to_json(const struct GfLabelCover *lc, char **out);

// Brute-force ε*, the largest weakly satisfied fraction (0 cap = default).
//
// # Safety
// `lc` must be a live handle; `out` must be valid.
enum GfStatus gf_label_cover_eps(const struct GfLabelCover *lc, uint64_t cap, char **out);

// # Safety
// `lc` must be NULL or a handle not yet freed.
void gf_label_cover_free(struct GfLabelCover *lc);

// Vector system over GF(r) for arity p with `colors` colors in general
// position (0 = the full system with embedding power p).
//
// # Safety
// `out` must be valid.
enum GfStatus gf_vector_system_build(uint64_t r,
                                     uint32_t p,
                                     uint64_t colors,
                                     bool allow_prime,
                                     struct GfVectorSystem **out);

// # Safety
// `json` must be NUL-terminated; `out` must be valid.
enum GfStatus gf_vector_system_from_json(const char *json, struct GfVectorSystem **out);

// # Safety
// `vs` must be a live handle; `out` must be valid.
enum GfStatus gf_vector_system_to_json(const struct GfVectorSystem *vs, char **out);

// Check the defining property. `out_pass` and `out_json` may be NULL.
//
// # Safety
// `vs` must be a live handle.
enum GfStatus gf_vector_system_verify(const struct GfVectorSystem *vs,
                                      uint64_t exhaustive_cap,
                                      bool *out_pass,
                                      char **out_json);

// # Safety
// `vs` must be NULL or a handle not yet freed.
void gf_vector_system_free(struct GfVectorSystem *vs);

// Seeded randomized search; `d0` = 0 selects the default dimension.
//
// # Safety
// `out` must be valid.
enum GfStatus gf_modified_vs_search(uint64_t q,
                                    uint32_t p,
                                    uint64_t d0,
                                    uint64_t seed,
                                    uint64_t max_tries,
                                    struct GfModifiedVs **out);

// # Safety
// `json` must be NUL-terminated; `out` must be valid.
enum GfStatus gf_modified_vs_from_json(const char *json, struct GfModifiedVs **out);

// # Safety
// `m` must be a live handle; `out` must be valid.
enum GfStatus gf_modified_vs_to_json(const struct GfModifiedVs *m, char **out);

// # Safety
// `m` must be a live handle.
enum GfStatus gf_modified_vs_verify(const struct GfModifiedVs *m, bool *out_pass, char **out_json);

// # Safety
// `m` must be NULL or a handle not yet freed.
void gf_modified_vs_free(struct GfModifiedVs *m);

// Finite-p reduction from a label cover instance and a vector system.
//
// # Safety
// `lc` and `vs` must be live handles; `out` must be valid.
enum GfStatus gf_reduction_build(const struct GfLabelCover *lc,
                                 uint32_t p,
                                 const struct GfVectorSystem *vs,
                                 struct GfReduction **out);

// ℓ∞ reduction from a label cover instance and a modified vector system.
//
// # Safety
// `lc` and `m` must be live handles; `out` must be valid.
enum GfStatus gf_reduction_build_infty(const struct GfLabelCover *lc,
                                       const struct GfModifiedVs *m,
                                       struct GfReduction **out);

// # Safety
// `json` must be NUL-terminated; `out` must be valid.
enum GfStatus gf_reduction_from_json(const char *json, struct GfReduction **out);

// # Safety
// `red` must be a live handle; `out` must be valid.
enum GfStatus gf_reduction_to_json(const struct GfReduction *red, char **out);

// Exact minimum cost over all k-th order tensor paths. `out_best` receives
// the minimum as a rational string; `out_json` (may be NULL) the full report.
//
// # Safety
// `red` must be a live handle; `out_best` must be valid.
enum GfStatus gf_solve_min(const struct GfReduction *red,
                           uint32_t k,
                           struct GfCaps caps,
                           char **out_best,
                           char **out_json);

// Run a bound check and report whether no check failed.
//
// # Safety
// `red` must be a live handle; `out_pass` and `out_json` may be NULL.
enum GfStatus gf_verify(const struct GfReduction *red,
                        enum GfCheck check,
                        uint32_t k,
                        struct GfCaps caps,
                        bool *out_pass,
                        char **out_json);

// # Safety
// `red` must be NULL or a handle not yet freed.
void gf_reduction_free(struct GfReduction *red);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAPFORGE_H */

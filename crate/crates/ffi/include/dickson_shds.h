#ifndef DICKSON_SHDS_H
#define DICKSON_SHDS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum ShdsStatus {
  SHDS_STATUS_OK = 0,
  SHDS_STATUS_NULL_POINTER = 1,
  SHDS_STATUS_INVALID_ARGUMENT = 2,
  SHDS_STATUS_PRECONDITION = 3,
  SHDS_STATUS_CAPACITY = 4,
  SHDS_STATUS_PARSE = 5,
  SHDS_STATUS_IO = 6,
  SHDS_STATUS_BUFFER_TOO_SMALL = 7,
  SHDS_STATUS_PANIC = 8,
} ShdsStatus;

/**
 * Kind of difference structure found by `shds_difference_report`.
 */
typedef enum ShdsVerdict {
  SHDS_VERDICT_NEITHER = 0,
  SHDS_VERDICT_DIFFERENCE_SET = 1,
  SHDS_VERDICT_PARTIAL_DIFFERENCE_SET = 2,
} ShdsVerdict;

/**
 * Opaque GF(3^m) context.
 */
typedef struct ShdsField ShdsField;

/**
 * Opaque subset of a field.
 */
typedef struct ShdsSet ShdsSet;

typedef struct ShdsDifferenceReport {
  uint32_t v;
  uint32_t k;
  enum ShdsVerdict verdict;
  /**
   * Valid unless the verdict is `SHDS_VERDICT_NEITHER`.
   */
  uint32_t lambda;
  /**
   * Valid for `SHDS_VERDICT_PARTIAL_DIFFERENCE_SET` only.
   */
  uint32_t mu;
  bool skew;
} ShdsDifferenceReport;

/**
 * Summary of a digit-weight scan.
 */
typedef struct ShdsScanResult {
  uint64_t instances;
  uint32_t min;
  bool holds;
} ShdsScanResult;

/**
 * Copies the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length excluding the NUL.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
uintptr_t shds_last_error_message(char *buf, uintptr_t len);

/**
 * Builds GF(3^m). `modulus` lists `m + 1` coefficients, constant term first;
 * pass null to use the default modulus.
 *
 * # Safety
 * `modulus` must be null or valid for `modulus_len` bytes; `out_field` must be writable.
 */
enum ShdsStatus shds_field_new(uint32_t m,
                               const uint8_t *modulus,
                               uintptr_t modulus_len,
                               struct ShdsField **out_field);

/**
 * # Safety
 * `field` must be null or a handle from `shds_field_new` not yet freed.
 */
void shds_field_free(struct ShdsField *field);

/**
 * Field order `3^m`, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uint32_t shds_field_order(const struct ShdsField *field);

/**
 * Index of the generator used to resolve `g^k` parameters.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uint32_t shds_field_generator(const struct ShdsField *field);

/**
 * # Safety
 * `field` must be a live handle and `out_value` writable.
 */
enum ShdsStatus shds_field_add(const struct ShdsField *field,
                               uint32_t a,
                               uint32_t b,
                               uint32_t *out_value);

/**
 * # Safety
 * `field` must be a live handle and `out_value` writable.
 */
enum ShdsStatus shds_field_mul(const struct ShdsField *field,
                               uint32_t a,
                               uint32_t b,
                               uint32_t *out_value);

/**
 * Builds a set from a family label such as `"d7:1"`, `"paley"` or `"dy-1"`.
 * With `pds_mode` the odd-m and permutation gates are skipped.
 *
 * # Safety
 * `field` must be a live handle, `family` a NUL-terminated string, `out_set` writable.
 */
enum ShdsStatus shds_set_build(const struct ShdsField *field,
                               const char *family,
                               bool pds_mode,
                               struct ShdsSet **out_set);

/**
 * Builds a set from explicit element indices.
 *
 * # Safety
 * `field` must be a live handle, `elements` valid for `len` values, `out_set` writable.
 */
enum ShdsStatus shds_set_from_elements(const struct ShdsField *field,
                                       const uint32_t *elements,
                                       uintptr_t len,
                                       struct ShdsSet **out_set);

/**
 * # Safety
 * `set` must be null or a handle not yet freed.
 */
void shds_set_free(struct ShdsSet *set);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
uintptr_t shds_set_len(const struct ShdsSet *set);

/**
 * Writes the sorted element indices to `buf`. `*out_len` receives the set
 * size; if it exceeds `cap` nothing is written and
 * `SHDS_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `set` must be a live handle, `buf` valid for `cap` values, `out_len` writable.
 */
enum ShdsStatus shds_set_elements(const struct ShdsSet *set,
                                  uint32_t *buf,
                                  uintptr_t cap,
                                  uintptr_t *out_len);

/**
 * Exact difference counting on `set`.
 *
 * # Safety
 * `field` and `set` must be live handles and `out_report` writable.
 */
enum ShdsStatus shds_difference_report(const struct ShdsField *field,
                                       const struct ShdsSet *set,
                                       struct ShdsDifferenceReport *out_report);

/**
 * Smallest and largest triple intersection number over distinct nonzero pairs.
 *
 * # Safety
 * `field` and `set` must be live handles and both outputs writable.
 */
enum ShdsStatus shds_triple_minmax(const struct ShdsField *field,
                                   const struct ShdsSet *set,
                                   uint32_t *out_min,
                                   uint32_t *out_max);

/**
 * One-variable digit inequality scan; `samples = 0` scans every value.
 *
 * # Safety
 * `out_result` must be writable.
 */
enum ShdsStatus shds_goal41(uint32_t m,
                            uint64_t samples,
                            uint64_t seed,
                            struct ShdsScanResult *out_result);

/**
 * Two-variable digit inequality scan; `samples = 0` scans every pair.
 *
 * # Safety
 * `out_result` must be writable.
 */
enum ShdsStatus shds_goal42(uint32_t m,
                            uint64_t samples,
                            uint64_t seed,
                            struct ShdsScanResult *out_result);

/**
 * Carry lemma audit; `holds` is false if any lemma was violated.
 *
 * # Safety
 * `out_result` must be writable.
 */
enum ShdsStatus shds_carry_audit(uint32_t m,
                                 uint64_t samples,
                                 uint64_t seed,
                                 struct ShdsScanResult *out_result);

#endif  /* DICKSON_SHDS_H */

#ifndef DIVISOR_LAB_H
#define DIVISOR_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function.
typedef enum DlStatus {
  DL_STATUS_OK = 0,
  DL_STATUS_NULL_POINTER = 1,
  DL_STATUS_INVALID_SET = 2,
  DL_STATUS_INVALID_ARGUMENT = 3,
  DL_STATUS_OVERFLOW = 4,
  DL_STATUS_CAPACITY = 5,
  DL_STATUS_BUFFER_TOO_SMALL = 6,
  DL_STATUS_PANIC = 7,
  DL_STATUS_INTERNAL = 8,
} DlStatus;

// A finite set of distinct positive integers.
typedef struct DlIntSet DlIntSet;

// A set of distinct nonzero integers summing to zero.
typedef struct DlZeroSumSet DlZeroSumSet;

// Separation census of a set.
typedef struct DlCensus {
  uint64_t barren;
  uint64_t neutral;
  uint64_t abundant;
} DlCensus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *dl_version(void);

// Message for the last failed call on this thread, or NULL if none.
// The pointer stays valid until the next failing call on the same thread.
const char *dl_last_error_message(void);

// Creates a set from `len` positive integers in any order.
//
// # Safety
// `elements` must point to `len` readable values and `out` must be writable.
enum DlStatus dl_int_set_new(const uint64_t *elements, size_t len, struct DlIntSet **out);

// Parses a set written as `1,2,3` or `{1,2,3}`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` must be writable.
enum DlStatus dl_int_set_parse(const char *text, struct DlIntSet **out);

// Releases a set. Passing NULL is a no-op.
//
// # Safety
// `set` must come from this library and not have been freed.
void dl_int_set_free(struct DlIntSet *set);

// Number of elements, or 0 for NULL.
//
// # Safety
// `set` must be NULL or a live handle.
size_t dl_int_set_len(const struct DlIntSet *set);

// Sum of the elements.
//
// # Safety
// `set` must be a live handle and `out` writable.
enum DlStatus dl_int_set_total(const struct DlIntSet *set, uint64_t *out);

// Copies the elements in increasing order into `buf`. `written` receives
// the element count; if `cap` is too small nothing is copied and
// `DL_STATUS_BUFFER_TOO_SMALL` is returned.
//
// # Safety
// `buf` must have room for `cap` values and `written` must be writable.
enum DlStatus dl_int_set_elements(const struct DlIntSet *set,
                                  uint64_t *buf,
                                  size_t cap,
                                  size_t *written);

// Number of divisors d(A).
//
// # Safety
// `set` must be a live handle and `out` writable.
enum DlStatus dl_divisor_count(const struct DlIntSet *set, uint64_t *out);

// Number of k-element divisors d_k(A); 0 when k is 0 or exceeds the size.
//
// # Safety
// `set` must be a live handle and `out` writable.
enum DlStatus dl_divisor_count_k(const struct DlIntSet *set, size_t k, uint64_t *out);

// d(A) by meet-in-the-middle; handles larger sets than `dl_divisor_count`.
//
// # Safety
// `set` must be a live handle and `out` writable.
enum DlStatus dl_divisor_count_mitm(const struct DlIntSet *set, uint64_t *out);

// Separation census; `strong` restricts to equal-size halves (even sizes only).
//
// # Safety
// `set` must be a live handle and `out` writable.
enum DlStatus dl_census(const struct DlIntSet *set, bool strong, struct DlCensus *out);

// # Safety
// `set` must be a live handle and `out` writable.
enum DlStatus dl_is_anti_pencil(const struct DlIntSet *set, bool *out);

// # Safety
// `set` must be a live handle and `out` writable.
enum DlStatus dl_is_k_anti_pencil(const struct DlIntSet *set, size_t k, bool *out);

// # Safety
// `set` must be a live handle and `out` writable.
enum DlStatus dl_is_prime_set(const struct DlIntSet *set, bool *out);

// Extends `base` by one element to an anti-pencil. The result is a new
// handle owned by the caller.
//
// # Safety
// `base` must be a live handle and `out` writable.
enum DlStatus dl_construct_anti_pencil(const struct DlIntSet *base, struct DlIntSet **out);

// Extends `base` by one element to a k-anti-pencil.
//
// # Safety
// `base` must be a live handle and `out` writable.
enum DlStatus dl_construct_k_anti_pencil(const struct DlIntSet *base,
                                         size_t k,
                                         struct DlIntSet **out);

// Extends `base` (which must not contain 1) by one element to a prime set.
//
// # Safety
// `base` must be a live handle and `out` writable.
enum DlStatus dl_construct_prime_set(const struct DlIntSet *base, struct DlIntSet **out);

// Creates a zero-sum set from `len` distinct nonzero integers.
//
// # Safety
// `elements` must point to `len` readable values and `out` must be writable.
enum DlStatus dl_zero_sum_set_new(const int64_t *elements, size_t len, struct DlZeroSumSet **out);

// Releases a zero-sum set. Passing NULL is a no-op.
//
// # Safety
// `set` must come from this library and not have been freed.
void dl_zero_sum_set_free(struct DlZeroSumSet *set);

// Number of subsets with nonnegative sum, the empty set included.
//
// # Safety
// `set` must be a live handle and `out` writable.
enum DlStatus dl_mu(const struct DlZeroSumSet *set, uint64_t *out);

// Number of k-subsets with nonnegative sum.
//
// # Safety
// `set` must be a live handle and `out` writable.
enum DlStatus dl_mu_k(const struct DlZeroSumSet *set, size_t k, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIVISOR_LAB_H */

/* C interface to the zeroleak library.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns a zl_status; on failure zl_last_error() describes the
 * problem for the calling thread. Strings returned through char** are owned by
 * the caller and released with zl_string_free. Indices are 0-based positions in
 * the distribution after zero rows/columns have been removed. */
#ifndef ZEROLEAK_ZEROLEAK_H_
#define ZEROLEAK_ZEROLEAK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ZL_API __declspec(dllexport)
#else
#define ZL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zl_status {
  ZL_OK = 0,
  ZL_BAD_SHAPE = 1,
  ZL_EMPTY_SUPPORT = 2,
  ZL_PARSE_ERROR = 3,
  ZL_STOCHASTICITY_ERROR = 4,
  ZL_NUMERICAL_FAILURE = 5,
  ZL_INFEASIBLE = 6,
  ZL_INTERNAL_ERROR = 7,
  ZL_NOT_IN_PHAT = 8,
  ZL_INFEASIBLE_BOUND_LP = 9,
  ZL_NOT_DECODABLE = 10,
  ZL_INCOMPLETE_MECHANISM = 11,
  ZL_WRONG_REGIME = 12,
  ZL_MALFORMED_BITS = 13,
  ZL_INVALID_ARGUMENT = 14,
  ZL_IO_ERROR = 15,
  ZL_BUFFER_TOO_SMALL = 16
} zl_status;

typedef struct zl_distribution zl_distribution;
typedef struct zl_mechanism zl_mechanism;
typedef struct zl_code zl_code;

typedef struct zl_tolerances {
  double prob;
  double lp;
  double vertex;
  double rank;
  double ent;
} zl_tolerances;

ZL_API zl_tolerances zl_default_tolerances(void);
ZL_API const char* zl_last_error(void);
ZL_API const char* zl_status_name(zl_status status);
ZL_API void zl_string_free(char* s);

/* Distributions. `joint` is row-major |X| x |Y|; `kernel` is row-major
 * |X| x |Y| with columns P(.|y). */
ZL_API zl_status zl_distribution_from_joint(const double* joint, size_t x_size, size_t y_size,
                                            const zl_tolerances* tol, zl_distribution** out);
ZL_API zl_status zl_distribution_from_kernel(const double* kernel, const double* p_y, size_t x_size,
                                             size_t y_size, const zl_tolerances* tol,
                                             zl_distribution** out);
ZL_API zl_status zl_distribution_parse(const char* text, const zl_tolerances* tol, zl_distribution** out);
ZL_API zl_status zl_distribution_load(const char* path, const zl_tolerances* tol, zl_distribution** out);
ZL_API void zl_distribution_free(zl_distribution* d);

ZL_API size_t zl_distribution_x_size(const zl_distribution* d);
ZL_API size_t zl_distribution_y_size(const zl_distribution* d);
/* Copies P_X (x_size values) or P_Y (y_size values) into `out`. */
ZL_API zl_status zl_distribution_marginal_x(const zl_distribution* d, double* out, size_t capacity);
ZL_API zl_status zl_distribution_marginal_y(const zl_distribution* d, double* out, size_t capacity);

typedef struct zl_entropies {
  double h_x;
  double h_y;
  double h_y_given_x;
  double i_xy;
} zl_entropies;

ZL_API zl_status zl_distribution_entropies(const zl_distribution* d, zl_entropies* out);
ZL_API zl_status zl_distribution_rank(const zl_distribution* d, const zl_tolerances* tol, size_t* rank,
                                      size_t* nullity);

typedef enum zl_membership_status {
  ZL_MEMBER = 0,
  ZL_NOT_MEMBER = 1,
  ZL_BOUNDARY = 2
} zl_membership_status;

typedef struct zl_membership {
  zl_membership_status status;
  double g0;
  double h_y_given_x;
  int via_deterministic;
} zl_membership;

ZL_API zl_status zl_membership_check(const zl_distribution* d, const zl_tolerances* tol, zl_membership* out);

/* Mechanisms. zl_solve_g0 returns the optimal mechanism and g0. */
ZL_API zl_status zl_solve_g0(const zl_distribution* d, const zl_tolerances* tol, double* g0,
                             zl_mechanism** out);
ZL_API void zl_mechanism_free(zl_mechanism* m);
ZL_API size_t zl_mechanism_u_size(const zl_mechanism* m);
ZL_API double zl_mechanism_entropy(const zl_mechanism* m);
ZL_API zl_status zl_mechanism_p_u(const zl_mechanism* m, double* out, size_t capacity);
/* Row-major |Y| x |U|. */
ZL_API zl_status zl_mechanism_p_y_given_u(const zl_mechanism* m, double* out, size_t capacity);
/* Returns a new mechanism carrying a decode table (x,u) -> y. */
ZL_API zl_status zl_mechanism_build_decode_table(const zl_distribution* d, const zl_mechanism* m,
                                                 const zl_tolerances* tol, zl_mechanism** out);
/* *y is set to SIZE_MAX when (x,u) never occurs. */
ZL_API zl_status zl_mechanism_decode(const zl_mechanism* m, size_t x, size_t u, size_t* y);

typedef struct zl_information_terms {
  double h_u;
  double i_uy;
  double i_xu;
  double h_y_given_x;
  double i_xu_given_y;
  double h_y_given_xu;
  double key_equation_residual;
} zl_information_terms;

ZL_API zl_status zl_mechanism_information(const zl_distribution* d, const zl_mechanism* m,
                                          zl_information_terms* out);

typedef struct zl_mechanism_bounds {
  double h_y_given_x;
  double k_lower;
  double k_upper; /* +inf when unbounded */
  double k_upper_strengthened;
  double log_nullity_bound;
  size_t nullity;
  size_t rank_a;
  int unique;
  int degenerate;
  int strengthened_fallback;
} zl_mechanism_bounds;

ZL_API zl_status zl_mechanism_bounds_compute(const zl_distribution* d, double achieved_entropy,
                                             const zl_tolerances* tol, zl_mechanism_bounds* out);

/* Codes. */
typedef enum zl_scheme { ZL_TWO_PART = 0, ZL_DIRECT_PAD = 1, ZL_PLAIN = 2 } zl_scheme;

ZL_API zl_status zl_code_two_part(const zl_distribution* d, const zl_mechanism* m, zl_code** out);
ZL_API zl_status zl_code_direct_pad(const zl_distribution* d, zl_code** out);
ZL_API zl_status zl_code_plain(const zl_distribution* d, zl_code** out);
ZL_API void zl_code_free(zl_code* c);
ZL_API zl_scheme zl_code_scheme(const zl_code* c);
ZL_API size_t zl_code_key_size(const zl_code* c);

/* Encodes y under key w. `rng_state` is a caller-owned splitmix64 state used
 * for the private randomness and advanced in place. */
ZL_API zl_status zl_code_encode(const zl_code* c, size_t y, size_t w, uint64_t* rng_state, char** bits);
ZL_API zl_status zl_code_encode_joint(const zl_code* c, size_t x, size_t y, size_t w, uint64_t* rng_state,
                                      char** bits);
ZL_API zl_status zl_code_decode(const zl_code* c, const char* bits, size_t w, size_t* y);

typedef struct zl_audit {
  double mi_c_x;
  double mi_c_x_given_y;
  double lossless_prob;
  double max_expected_length;
  double key_spread;
  double pad_entropy;
  double mi_pad_x;
  size_t distinct_messages;
} zl_audit;

ZL_API zl_status zl_code_audit(const zl_code* c, const zl_distribution* d, zl_audit* out);
ZL_API zl_status zl_code_serialize(const zl_code* c, char** text);
ZL_API zl_status zl_code_parse(const char* text, zl_code** out);

/* Whole-run driver used by the command-line tool. */
typedef struct zl_run_config {
  const char* input_path;
  const char* command; /* analyze | mechanism | code | audit | sweep */
  zl_tolerances tol;
  uint64_t seed;
  const char* format; /* text | structured */
  size_t n;
  const char* family; /* det-f | common-info | invertible | small-y */
  const char* code_path;
  const char* save_code_path;
} zl_run_config;

ZL_API zl_run_config zl_default_run_config(void);
/* On ZL_OK, *exit_status is 0 (invariants hold) or 1 (violation) and *report
 * holds the rendered output. */
ZL_API zl_status zl_run(const zl_run_config* config, int* exit_status, char** report);

#ifdef __cplusplus
}
#endif

#endif /* ZEROLEAK_ZEROLEAK_H_ */

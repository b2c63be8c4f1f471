/* C interface to the folner library. All handles are opaque; every function
 * returns a fol_status and reports details through fol_last_error(), which is
 * per thread and valid until the next call on that thread. Strings returned
 * through char** are owned by the caller and released with fol_string_free.
 * Rationals travel as "p/q" strings, elements as hex of their canonical
 * encoding. */
#ifndef FOLNER_H
#define FOLNER_H

#include <stdint.h>

#if defined(_WIN32)
#define FOL_API __declspec(dllexport)
#else
#define FOL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fol_status {
  FOL_OK = 0,
  FOL_ERR_INVALID_ARGUMENT = 1,
  FOL_ERR_TYPE_MISMATCH = 2,
  FOL_ERR_RESOURCE_LIMIT = 3,
  FOL_ERR_BUDGET = 4,
  FOL_ERR_OVERFLOW = 5,
  FOL_ERR_PARSE = 6,
  FOL_ERR_IO = 7,
  FOL_ERR_INTERNAL = 99
} fol_status;

typedef struct fol_group fol_group;
typedef struct fol_set fol_set;
typedef struct fol_measure fol_measure;

FOL_API const char *fol_last_error(void);
FOL_API const char *fol_version(void);
FOL_API void fol_string_free(char *s);

/* Groups: "integers:<d>", "heisenberg", "lamplighter". */
FOL_API fol_status fol_group_new(const char *signature, fol_group **out);
FOL_API void fol_group_free(fol_group *g);
FOL_API fol_status fol_group_signature(const fol_group *g, char **out);
FOL_API fol_status fol_element_mul(const fol_group *g, const char *a_hex, const char *b_hex,
                                   char **out_hex);
FOL_API fol_status fol_element_inv(const fol_group *g, const char *a_hex, char **out_hex);
FOL_API fol_status fol_element_to_string(const char *hex, char **out);

/* Sets. cap bounds the size of any result; 0 selects the default. */
FOL_API fol_status fol_set_word_ball(const fol_group *g, uint64_t radius, uint64_t cap,
                                     fol_set **out);
FOL_API fol_status fol_set_lamplighter(uint64_t n, int two_sided, uint64_t cap, fol_set **out);
FOL_API fol_status fol_set_from_listing(const char *text, fol_set **out);
FOL_API fol_status fol_set_to_listing(const fol_set *s, char **out);
FOL_API fol_status fol_set_size(const fol_set *s, uint64_t *out);
FOL_API fol_status fol_set_contains(const fol_set *s, const char *hex, int *out);
FOL_API fol_status fol_set_product(const fol_set *a, const fol_set *b, uint64_t cap,
                                   fol_set **out);
FOL_API fol_status fol_set_inverse(const fol_set *a, fol_set **out);
FOL_API fol_status fol_set_power(const fol_set *a, uint64_t k, uint64_t cap, fol_set **out);
/* {g in k : h1 g h2 inside k}; either of h1, h2 may be NULL for a one-sided interior. */
FOL_API fol_status fol_set_interior(const fol_set *h1, const fol_set *h2, const fol_set *k,
                                    fol_set **out);
/* |K1 F K2 \ F| / |F| */
FOL_API fol_status fol_set_folner_ratio(const fol_set *k1, const fol_set *f, const fol_set *k2,
                                        uint64_t cap, char **out);
FOL_API void fol_set_free(fol_set *s);

/* Measures. */
FOL_API fol_status fol_measure_uniform(const fol_set *s, fol_measure **out);
FOL_API fol_status fol_measure_convolve(const fol_measure *a, const fol_measure *b, uint64_t cap,
                                        fol_measure **out);
FOL_API fol_status fol_measure_mass(const fol_measure *m, const char *hex, char **out);
FOL_API fol_status fol_measure_total_mass(const fol_measure *m, char **out);
FOL_API fol_status fol_measure_is_truncated(const fol_measure *m, int *out);
FOL_API fol_status fol_measure_to_csv(const fol_measure *m, char **out);
FOL_API void fol_measure_free(fol_measure *m);

/* Scalar certificates. */
FOL_API fol_status fol_finite_n_lower_bound(const char *lam_f, const char *lam_e, const char *r_n,
                                            const char *r_np1, uint64_t n_steps, char **out);
FOL_API fol_status fol_arithgeo_closed_form(const char *r, uint64_t n_steps, char **out);

/* Commands. Negative numeric options and NULL strings mean "not set". */
typedef struct fol_run_options {
  const char *out_dir;
  const char *config_dir;
  int64_t cap;
  int64_t depth;
  int64_t seed;
} fol_run_options;

/* Runs census, chain, dominate, simulate or sweep. On FOL_OK, *verdict holds
 * 0 (pass), 2 (fail) or 3 (budget). A one-line summary goes to *summary when
 * summary is not NULL. */
FOL_API fol_status fol_run_command(const char *command, const char *config_json,
                                   const fol_run_options *options, int *verdict, char **summary);

#ifdef __cplusplus
}
#endif

#endif

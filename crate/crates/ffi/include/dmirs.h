/* Generated by cbindgen from the dmirs-ffi crate. Do not edit. */

#ifndef DMIRS_H
#define DMIRS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum DmirsStatus {
  DMIRS_STATUS_OK = 0,
  /*
   A required pointer was null or a string was not valid UTF-8.
   */
  DMIRS_STATUS_INVALID_ARGUMENT = 1,
  DMIRS_STATUS_PARSE = 2,
  DMIRS_STATUS_VALIDATION = 3,
  DMIRS_STATUS_GEOMETRY = 4,
  DMIRS_STATUS_DOMAIN = 5,
  DMIRS_STATUS_DIMENSION = 6,
  DMIRS_STATUS_CONTRACT = 7,
  DMIRS_STATUS_IO = 8,
  DMIRS_STATUS_PANIC = 9,
} DmirsStatus;

typedef enum DmirsAnMode {
  DMIRS_AN_MODE_EXPECTED = 0,
  DMIRS_AN_MODE_INSTANTANEOUS = 1,
} DmirsAnMode;

/*
 Opaque scenario handle.
 */
typedef struct DmirsScenario DmirsScenario;

/*
 Opaque table produced by a sweep or heatmap.
 */
typedef struct DmirsSweep DmirsSweep;

/*
 Linear SNR/SINR, rates in bits per channel use, QPSK BERs.
 */
typedef struct DmirsMetrics {
  double gamma_b;
  double gamma_e;
  double rate_b;
  double rate_e;
  double rate_s;
  double ber_b;
  double ber_probe;
} DmirsMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the last error message of the calling thread into `buf` as a
 NUL-terminated string, truncating to `len - 1` bytes. Returns the length
 needed to hold the full message including its terminator, or 0 if no
 error has been recorded.

 # Safety
 `buf` must be null or point to at least `len` writable bytes.
 */
size_t dmirs_last_error(char *buf, size_t len);

/*
 The built-in reference scenario. Never returns null.
 */
struct DmirsScenario *dmirs_scenario_default(void);

/*
 Parses and validates a JSON scenario. Missing keys take their defaults.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum DmirsStatus dmirs_scenario_from_json(const char *json, struct DmirsScenario **out);

/*
 Serialises the scenario as pretty-printed JSON. Release the string with
 [`dmirs_string_free`].

 # Safety
 `scenario` must be a live handle; `out` must be writable.
 */
enum DmirsStatus dmirs_scenario_to_json(const struct DmirsScenario *scenario, char **out);

/*
 Moves the eavesdropper. The scenario is left unchanged if the new
 position fails validation.

 # Safety
 `scenario` must be a live handle.
 */
enum DmirsStatus dmirs_scenario_set_eve(struct DmirsScenario *scenario, double x, double y);

/*
 # Safety
 `scenario` must be null or a handle not yet freed.
 */
void dmirs_scenario_free(struct DmirsScenario *scenario);

/*
 # Safety
 `s` must be null or a string returned by this library and not yet freed.
 */
void dmirs_string_free(char *s);

/*
 Metrics of the IRS-aided scheme with the eavesdropper at the scenario's
 `eve` position.

 # Safety
 `scenario` must be a live handle; `out` must be writable.
 */
enum DmirsStatus dmirs_secrecy_metrics(const struct DmirsScenario *scenario,
                                       enum DmirsAnMode mode,
                                       struct DmirsMetrics *out);

/*
 Metrics of the direct-path-only benchmark.

 # Safety
 `scenario` must be a live handle; `out` must be writable.
 */
enum DmirsStatus dmirs_benchmark_metrics(const struct DmirsScenario *scenario,
                                         enum DmirsAnMode mode,
                                         struct DmirsMetrics *out);

/*
 Gaussian tail probability `Q(u)`.

 # Safety
 `out` must be writable.
 */
enum DmirsStatus dmirs_q_function(double u, double *out);

/*
 M-PSK bit error rate at linear SNR `gamma`.

 # Safety
 `out` must be writable.
 */
enum DmirsStatus dmirs_ber_from_snr(double gamma, uint32_t m, double *out);

/*
 Real array gain of an `n_elements` IRS focused on `theta_b`, seen from
 `theta_e` (radians).

 # Safety
 `out` must be writable.
 */
enum DmirsStatus dmirs_cascaded_gain(double theta_e,
                                     double theta_b,
                                     size_t n_elements,
                                     double spacing_wavelengths,
                                     double *out);

/*
 Secrecy rate against IRS size for each transmit power.

 # Safety
 `scenario` must be a live handle; the arrays must hold the stated number
 of elements; `out` must be writable.
 */
enum DmirsStatus dmirs_sweep_nr(const struct DmirsScenario *scenario,
                                const size_t *nr,
                                size_t nr_len,
                                const double *pt_dbm,
                                size_t pt_len,
                                struct DmirsSweep **out);

/*
 Secrecy rate against the Alice–Bob distance for each transmit power.

 # Safety
 As for [`dmirs_sweep_nr`].
 */
enum DmirsStatus dmirs_sweep_dab(const struct DmirsScenario *scenario,
                                 const double *dab_m,
                                 size_t dab_len,
                                 const double *pt_dbm,
                                 size_t pt_len,
                                 struct DmirsSweep **out);

/*
 Probe SINR and BER over a departure-angle × IRS-angle grid, in the
 scenario's AN mode.

 # Safety
 `scenario` must be a live handle; `out` must be writable.
 */
enum DmirsStatus dmirs_heatmap(const struct DmirsScenario *scenario,
                               size_t phi_points,
                               size_t theta_points,
                               struct DmirsSweep **out);

/*
 Row count, or 0 for a null handle.

 # Safety
 `sweep` must be null or a live handle.
 */
size_t dmirs_sweep_rows(const struct DmirsSweep *sweep);

/*
 Column count, or 0 for a null handle.

 # Safety
 `sweep` must be null or a live handle.
 */
size_t dmirs_sweep_cols(const struct DmirsSweep *sweep);

/*
 Name of column `col`. Release the string with [`dmirs_string_free`].

 # Safety
 `sweep` must be a live handle; `out` must be writable.
 */
enum DmirsStatus dmirs_sweep_column_name(const struct DmirsSweep *sweep, size_t col, char **out);

/*
 Cell at (`row`, `col`).

 # Safety
 `sweep` must be a live handle; `out` must be writable.
 */
enum DmirsStatus dmirs_sweep_value(const struct DmirsSweep *sweep,
                                   size_t row,
                                   size_t col,
                                   double *out);

/*
 Writes the table as CSV (metadata comments, header, rows) to `path`.

 # Safety
 `sweep` must be a live handle; `path` must be a NUL-terminated string.
 */
enum DmirsStatus dmirs_sweep_write_csv(const struct DmirsSweep *sweep, const char *path);

/*
 # Safety
 `sweep` must be null or a handle not yet freed.
 */
void dmirs_sweep_free(struct DmirsSweep *sweep);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DMIRS_H */

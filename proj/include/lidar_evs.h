/* Public C API for the lidar_evs shared library.
 *
 * All functions return a levs_status; LEVS_OK on success. On failure,
 * levs_last_error() describes the problem (thread-local). Handles returned
 * through out-parameters are owned by the caller and released with the
 * matching *_free function.
 *
 * Poses are 4x4 row-major double arrays, world-from-sensor convention.
 */
#ifndef LIDAR_EVS_H
#define LIDAR_EVS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum levs_status {
  LEVS_OK = 0,
  LEVS_ERR_IO = 1,
  LEVS_ERR_PARSE = 2,        /* malformed input file (see levs_last_error for byte offset) */
  LEVS_ERR_CONFIG = 3,       /* invalid argument or configuration */
  LEVS_ERR_DEGENERATE = 4,   /* all Gaussians pole-degenerate */
  LEVS_ERR_MISMATCH = 5,     /* dimension / length mismatch */
  LEVS_ERR_INTERNAL = 6
} levs_status;

typedef struct levs_frame levs_frame;         /* LiDAR frame (LEVP) */
typedef struct levs_sensor levs_sensor;       /* sensor intrinsics (JSON) */
typedef struct levs_rangemap levs_rangemap;   /* range map (LEVR) */
typedef struct levs_gaussians levs_gaussians; /* Gaussian set (LEVG) */
typedef struct levs_scan levs_scan;           /* curated pseudo scan */
typedef struct levs_mask levs_mask;           /* dropout mask */

/* Message for the most recent failure on this thread. Never NULL. */
const char* levs_last_error(void);

/* ---- frames ---- */
levs_status levs_frame_load(const char* path, levs_frame** out);
levs_status levs_frame_save(const char* path, const levs_frame* frame);
levs_status levs_frame_save_ascii(const char* path, const levs_frame* frame);
levs_status levs_frame_create(const float* xyz, const float* intensities,
                              const uint8_t* dynamic_flags, uint64_t count,
                              const double pose[16], int64_t timestamp_us, levs_frame** out);
void levs_frame_free(levs_frame* frame);
uint64_t levs_frame_count(const levs_frame* frame);
void levs_frame_pose(const levs_frame* frame, double out[16]);
int64_t levs_frame_timestamp(const levs_frame* frame);

/* ---- sensor models ---- */
levs_status levs_sensor_load(const char* path, levs_sensor** out);
levs_status levs_sensor_save(const char* path, const levs_sensor* sensor);
levs_status levs_sensor_default(levs_sensor** out); /* 32 x 1088, 200 m */
void levs_sensor_free(levs_sensor* sensor);
void levs_sensor_dims(const levs_sensor* sensor, int* height, int* width);

/* ---- range maps ---- */
levs_status levs_rangemap_load(const char* path, levs_rangemap** out);
levs_status levs_rangemap_save(const char* path, const levs_rangemap* map);
void levs_rangemap_free(levs_rangemap* map);
void levs_rangemap_dims(const levs_rangemap* map, int* height, int* width);
uint64_t levs_rangemap_occupied(const levs_rangemap* map);

/* ---- Gaussian sets ---- */
levs_status levs_gaussians_load(const char* path, levs_gaussians** out);
levs_status levs_gaussians_save(const char* path, const levs_gaussians* g);
void levs_gaussians_free(levs_gaussians* g);
uint64_t levs_gaussians_count(const levs_gaussians* g);

/* ---- poses ---- */
/* out = base * translation([0, delta, 0]); positive delta is sensor +y. */
levs_status levs_shift_pose(const double base[16], double delta, double out[16]);
/* Fair +/-1 from a counter-based stream; pure function of (seed, iteration). */
int levs_shift_direction(uint64_t seed, uint64_t iteration);

/* ---- curation pipeline ---- */
levs_status levs_curate(const levs_frame* const* frames, size_t n_frames, size_t current_index,
                        const levs_sensor* sensor, int window, int include_dynamic_from_current,
                        const double target_pose[16], int threads, levs_scan** out);
void levs_scan_free(levs_scan* scan);
uint64_t levs_scan_count(const levs_scan* scan);
/* Serializes the scan as LEVP (dynamic flags all 0) with the given pose. */
levs_status levs_scan_save(const char* path, const levs_scan* scan, const double pose[16],
                           int64_t timestamp_us);
levs_status levs_scan_save_ascii(const char* path, const levs_scan* scan);

/* Nearest-hit rasterization of a sensor-frame cloud. */
levs_status levs_rasterize(const levs_frame* frame, const levs_sensor* sensor,
                           levs_rangemap** out);
/* Occlusion curling: keeps the nearest in-FoV hit per range-map cell. */
levs_status levs_curl(const levs_frame* frame, const levs_sensor* sensor, int threads,
                      levs_frame** out);
/* Incidence-based intensity adjustment toward an extrapolated pose.
 * Normals are estimated with k nearest neighbors on the world-frame cloud. */
levs_status levs_adjust_intensity(const levs_frame* frame, const double extra_pose[16],
                                  size_t k, levs_frame** out);

/* ---- dropout ---- */
/* ROI elevation bounds come from the sensor FoV; d_max from the sensor. */
levs_status levs_dropout_mask(const levs_gaussians* g, const double sensor_pose[16],
                              const levs_sensor* sensor, double rate, uint64_t seed,
                              levs_mask** out);
void levs_mask_free(levs_mask* mask);
void levs_mask_counts(const levs_mask* mask, uint64_t* roi_count, uint64_t* drop_count);
/* Flat binary: one u8 drop flag per Gaussian. */
levs_status levs_mask_save(const char* path, const levs_mask* mask);

/* ---- rendering ---- */
typedef enum levs_drop_mode {
  LEVS_DROP_NONE = 0,       /* render the full set */
  LEVS_DROP_SAMPLE = 1,     /* sample a dropout mask from (rate, seed) */
  LEVS_DROP_COMPENSATE = 2  /* scale in-ROI opacities by (1 - rate) */
} levs_drop_mode;

levs_status levs_render(const levs_gaussians* g, const double sensor_pose[16],
                        const levs_sensor* sensor, levs_drop_mode mode, double rate,
                        uint64_t seed, levs_rangemap** out);

/* ---- metrics ---- */
typedef struct levs_metrics {
  double depth_mse_median;
  double chamfer;
  double intensity_rmse;
  double raydrop_accuracy;
} levs_metrics;

levs_status levs_eval_rangemaps(const levs_rangemap* pred, const levs_rangemap* gt,
                                levs_metrics* out);
levs_status levs_chamfer(const levs_frame* pred, const levs_frame* gt, double* out);

/* ---- fixtures & bench ---- */
/* Writes the canonical test scenes (two-plane, corridor, sphere, Gaussian
 * grid) plus a default sensor JSON into the directory. */
levs_status levs_gen_fixtures(const char* out_dir);
/* Runs the standard stage timings on synthetic scenes; fills a JSON report. */
levs_status levs_bench(uint64_t points, int threads, char* json_out, size_t json_cap);

#ifdef __cplusplus
}
#endif

#endif /* LIDAR_EVS_H */

#ifndef SEEDS3D_H
#define SEEDS3D_H

/*
 * C interface to the seeds3d library.
 *
 * Every fallible call returns an s3d_status. On failure, s3d_last_error() returns
 * a one-line description that stays valid until the next call on the same thread.
 * Objects are opaque and released with their matching *_free function; freeing
 * NULL is a no-op. Strings returned through char** are released with
 * s3d_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SEEDS3D_BUILDING)
#define SEEDS3D_API __declspec(dllexport)
#else
#define SEEDS3D_API __declspec(dllimport)
#endif
#else
#define SEEDS3D_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum s3d_status {
  S3D_OK = 0,
  S3D_ERR_ARGUMENT = 1,      /* null pointer or malformed argument */
  S3D_ERR_DOMAIN = 2,        /* value outside the accepted domain */
  S3D_ERR_CONFIGURATION = 3, /* parameters incompatible with the input */
  S3D_ERR_FORMAT = 4,        /* malformed or unsupported file */
  S3D_ERR_IO = 5,            /* filesystem failure */
  S3D_ERR_LOGIC = 6,         /* broken precondition inside the library */
  S3D_ERR_MEMORY = 7,
  S3D_ERR_INTERNAL = 8
} s3d_status;

typedef enum s3d_view { S3D_VIEW_AXIAL = 0, S3D_VIEW_CORONAL = 1, S3D_VIEW_SAGITTAL = 2 } s3d_view;

typedef struct s3d_volume s3d_volume;
typedef struct s3d_labels s3d_labels;
typedef struct s3d_report s3d_report;

typedef struct s3d_params {
  int32_t num_supervoxels;
  int32_t num_bins;
  int32_t prior_weight;
  int32_t block_iterations;
  int32_t pixel_iterations;
  int32_t planar; /* nonzero selects the single-slice variant */
} s3d_params;

SEEDS3D_API const char* s3d_version(void);
SEEDS3D_API const char* s3d_last_error(void);
SEEDS3D_API const char* s3d_status_name(s3d_status status);
SEEDS3D_API void s3d_string_free(char* s);

/* 1000 supervoxels, 15 bins, prior weight 2, 2 block and 4 pixel passes, 3D. */
SEEDS3D_API void s3d_params_default(s3d_params* params);

/* Volumes. dims are (sagittal, coronal, axial); axis 0 varies fastest. */
SEEDS3D_API s3d_status s3d_volume_create(const size_t dims[3], const float* data, s3d_volume** out);
SEEDS3D_API s3d_status s3d_volume_read(const char* path, s3d_volume** out);
SEEDS3D_API s3d_status s3d_volume_write(const s3d_volume* volume, const char* path);
SEEDS3D_API s3d_status s3d_volume_dims(const s3d_volume* volume, size_t dims[3]);
SEEDS3D_API const float* s3d_volume_data(const s3d_volume* volume);
SEEDS3D_API void s3d_volume_free(s3d_volume* volume);

/* In-place preprocessing. */
SEEDS3D_API s3d_status s3d_clip_percentiles(s3d_volume* volume, double lo, double hi);
SEEDS3D_API s3d_status s3d_window_ct(s3d_volume* volume, double width, double level);
/* Rescale to [0, 1]. A constant volume is an S3D_ERR_DOMAIN failure unless
 * zero_if_constant is set, in which case it becomes all zeros and *was_constant is 1. */
SEEDS3D_API s3d_status s3d_rescale_unit(s3d_volume* volume, int zero_if_constant, int* was_constant);
/* Nearest neighbor along slice_axis, bicubic in the other two axes. */
SEEDS3D_API s3d_status s3d_resize(s3d_volume* volume, const size_t target[3], int slice_axis);
/* Index-only reorientation to three axis codes such as "RPI". Requires a qform or sform. */
SEEDS3D_API s3d_status s3d_reorient(s3d_volume* volume, const char* codes);

/* Segmentation. report may be NULL. */
SEEDS3D_API s3d_status s3d_segment(const s3d_volume* volume, const s3d_params* params, s3d_labels** labels,
                                   s3d_report** report);
SEEDS3D_API s3d_status s3d_report_json(const s3d_report* report, char** json);
SEEDS3D_API double s3d_report_total_seconds(const s3d_report* report);
SEEDS3D_API void s3d_report_free(s3d_report* report);

/* Label maps. s3d_labels_read keeps ids as stored; compact renumbers them densely. */
SEEDS3D_API s3d_status s3d_labels_read(const char* path, int compact, s3d_labels** out);
/* Written as int32; geometry is copied from reference when it is not NULL. */
SEEDS3D_API s3d_status s3d_labels_write(const s3d_labels* labels, const s3d_volume* reference, const char* path);
SEEDS3D_API s3d_status s3d_labels_dims(const s3d_labels* labels, size_t dims[3]);
SEEDS3D_API const int32_t* s3d_labels_data(const s3d_labels* labels);
SEEDS3D_API int32_t s3d_labels_count(const s3d_labels* labels);
SEEDS3D_API void s3d_labels_free(s3d_labels* labels);

/* Under-segmentation error and achievable Dice against a class map. class_ids and
 * class_names (either may be NULL when n_classes is 0) name foreground classes;
 * a named class missing from the truth is reported absent. */
SEEDS3D_API s3d_status s3d_evaluate(const s3d_labels* labels, const s3d_labels* truth, const int32_t* class_ids,
                                    const char* const* class_names, size_t n_classes, char** json, char** csv);

SEEDS3D_API s3d_status s3d_slice_count(const s3d_volume* volume, s3d_view view, size_t* count);
/* Writes a P6 pixmap with supervoxel boundaries and, when truth is not NULL, class contours. */
SEEDS3D_API s3d_status s3d_render_slice(const s3d_volume* volume, const s3d_labels* labels, const s3d_labels* truth,
                                        s3d_view view, size_t index, const char* path);

#ifdef __cplusplus
}
#endif

#endif

/* C interface to the wlspec library.
 *
 * All handles are opaque and owned by the caller; destroy functions accept
 * NULL. Every call returns a wls_status; on failure wls_last_error() holds a
 * message for the calling thread until its next failing call.
 */
#ifndef WLSPEC_WLSPEC_H
#define WLSPEC_WLSPEC_H

#include <stddef.h>

#if defined(WLSPEC_BUILDING_LIBRARY)
#define WLSPEC_API __attribute__((visibility("default")))
#else
#define WLSPEC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  WLS_OK = 0,
  WLS_ERR_DOMAIN = 1,
  WLS_ERR_CONVERGENCE = 2,
  WLS_ERR_INVALID_MESH = 3,
  WLS_ERR_CONFIG = 4,
  WLS_ERR_IO = 5,
  WLS_ERR_HYPOTHESIS = 6,
  WLS_ERR_NULL_ARGUMENT = 7,
  WLS_ERR_INTERNAL = 8
} wls_status;

typedef enum { WLS_DIRICHLET = 0, WLS_NEUMANN = 1 } wls_boundary;

typedef struct wls_model wls_model;
typedef struct wls_profile wls_profile;
typedef struct wls_mesh wls_mesh;

WLSPEC_API const char* wls_version(void);
WLSPEC_API const char* wls_status_string(wls_status status);
WLSPEC_API const char* wls_last_error(void);

/* kappa in {-1, 0, 1}, dim >= 2. */
WLSPEC_API wls_status wls_model_create(int kappa, int dim, wls_model** out);
WLSPEC_API void wls_model_destroy(wls_model* model);

/* "name" or "name:param"; name in zero, linear_neg, quad_neg, exp_dec, log_cos. */
WLSPEC_API wls_status wls_profile_create(const char* spec, wls_profile** out);
WLSPEC_API void wls_profile_destroy(wls_profile* profile);
WLSPEC_API const char* wls_profile_label(const wls_profile* profile);

/* Eigenvalue of mode (l, j) on the centered ball of radius R. */
WLSPEC_API wls_status wls_ball_eigenvalue(const wls_model* model, const wls_profile* profile,
                                          double radius, wls_boundary bc, int l, int j,
                                          double* out);
WLSPEC_API wls_status wls_ball_volume(const wls_model* model, const wls_profile* profile,
                                      double radius, double* out);
WLSPEC_API wls_status wls_radius_for_volume(const wls_model* model, const wls_profile* profile,
                                            double volume, double* out);

/* Shapes: "disk:r[,cx,cy]", "ellipse:a,b[,deg,cx,cy]", "rectangle:w,h[,cx,cy]",
 * "square:s[,cx,cy]", "dumbbell:r,neck_w,neck_len[,sep]", "two_disks:r,gap",
 * "cap:center_distance,radius", "polygon:x,y;x,y;...". */
WLSPEC_API wls_status wls_mesh_generate(const char* shape, double h, const wls_model* model,
                                        wls_mesh** out);
WLSPEC_API wls_status wls_mesh_read(const char* path, wls_mesh** out);
WLSPEC_API wls_status wls_mesh_write(const wls_mesh* mesh, const char* path);
WLSPEC_API void wls_mesh_destroy(wls_mesh* mesh);
WLSPEC_API wls_status wls_mesh_counts(const wls_mesh* mesh, size_t* vertices, size_t* triangles,
                                      size_t* boundary_vertices);
WLSPEC_API wls_status wls_mesh_weighted_volume(const wls_mesh* mesh, const wls_model* model,
                                               const wls_profile* profile, double* out);
/* The k smallest eigenvalues of the weighted problem on the mesh, ascending. */
WLSPEC_API wls_status wls_mesh_eigenvalues(const wls_mesh* mesh, const wls_model* model,
                                           const wls_profile* profile, wls_boundary bc, int k,
                                           double* out);

/* Runs a JSON suite config and writes report.json and summary.csv into
 * out_dir. *exit_code receives 0 (all pass), 2 (a failure), 3 (inconclusive
 * only) or 1 (unusable config, also signalled by WLS_ERR_CONFIG). */
WLSPEC_API wls_status wls_run_suite(const char* config_path, const char* out_dir, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif

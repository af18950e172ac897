#include "wlspec/wlspec.h"

#include <new>
#include <string>

#include "wlspec/error.hpp"
#include "wlspec/fem.hpp"
#include "wlspec/harness.hpp"
#include "wlspec/measure.hpp"
#include "wlspec/mesh.hpp"
#include "wlspec/radial.hpp"

struct wls_model {
  wlspec::SpaceFormModel model;
};
struct wls_profile {
  wlspec::WeightProfile profile;
};
struct wls_mesh {
  wlspec::TriMesh mesh;
};

namespace {

thread_local std::string g_last_error;

wls_status set_error(wls_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

wls_status from_code(wlspec::ErrorCode c) {
  switch (c) {
    case wlspec::ErrorCode::Domain: return WLS_ERR_DOMAIN;
    case wlspec::ErrorCode::Convergence: return WLS_ERR_CONVERGENCE;
    case wlspec::ErrorCode::InvalidMesh: return WLS_ERR_INVALID_MESH;
    case wlspec::ErrorCode::Config: return WLS_ERR_CONFIG;
    case wlspec::ErrorCode::Io: return WLS_ERR_IO;
    case wlspec::ErrorCode::Hypothesis: return WLS_ERR_HYPOTHESIS;
  }
  return WLS_ERR_INTERNAL;
}

template <class F>
wls_status guard(F&& f) {
  try {
    f();
    return WLS_OK;
  } catch (const wlspec::Error& e) {
    return set_error(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(WLS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(WLS_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(WLS_ERR_INTERNAL, "unknown error");
  }
}

wls_status null_arg(const char* name) {
  return set_error(WLS_ERR_NULL_ARGUMENT, std::string("null argument: ") + name);
}

wlspec::BoundaryCondition to_bc(wls_boundary bc) {
  if (bc == WLS_DIRICHLET) return wlspec::BoundaryCondition::Dirichlet;
  if (bc == WLS_NEUMANN) return wlspec::BoundaryCondition::Neumann;
  wlspec::fail(wlspec::ErrorCode::Domain, "unknown boundary condition");
}

}  // namespace

extern "C" {

const char* wls_version(void) { return "1.0.0"; }

const char* wls_status_string(wls_status status) {
  switch (status) {
    case WLS_OK: return "ok";
    case WLS_ERR_DOMAIN: return "domain error";
    case WLS_ERR_CONVERGENCE: return "convergence failure";
    case WLS_ERR_INVALID_MESH: return "invalid mesh";
    case WLS_ERR_CONFIG: return "configuration error";
    case WLS_ERR_IO: return "i/o error";
    case WLS_ERR_HYPOTHESIS: return "hypotheses not satisfied";
    case WLS_ERR_NULL_ARGUMENT: return "null argument";
    case WLS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* wls_last_error(void) { return g_last_error.c_str(); }

wls_status wls_model_create(int kappa, int dim, wls_model** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] { *out = new wls_model{wlspec::SpaceFormModel(wlspec::curvature_from_int(kappa), dim)}; });
}

void wls_model_destroy(wls_model* model) { delete model; }

wls_status wls_profile_create(const char* spec, wls_profile** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] { *out = new wls_profile{wlspec::parse_profile(spec)}; });
}

void wls_profile_destroy(wls_profile* profile) { delete profile; }

const char* wls_profile_label(const wls_profile* profile) {
  return profile ? profile->profile.label().c_str() : "";
}

wls_status wls_ball_eigenvalue(const wls_model* model, const wls_profile* profile, double radius,
                               wls_boundary bc, int l, int j, double* out) {
  if (!model) return null_arg("model");
  if (!profile) return null_arg("profile");
  if (!out) return null_arg("out");
  return guard([&] {
    if (l < 0 || j < 1) wlspec::fail(wlspec::ErrorCode::Domain, "mode needs l >= 0 and j >= 1");
    const wlspec::RadialSolver solver(model->model, profile->profile);
    *out = solver.eigenvalue({l, j, to_bc(bc)}, radius);
  });
}

wls_status wls_ball_volume(const wls_model* model, const wls_profile* profile, double radius, double* out) {
  if (!model) return null_arg("model");
  if (!profile) return null_arg("profile");
  if (!out) return null_arg("out");
  return guard([&] { *out = wlspec::ball_weighted_volume(model->model, profile->profile, radius); });
}

wls_status wls_radius_for_volume(const wls_model* model, const wls_profile* profile, double volume,
                                 double* out) {
  if (!model) return null_arg("model");
  if (!profile) return null_arg("profile");
  if (!out) return null_arg("out");
  return guard([&] { *out = wlspec::solve_radius(model->model, profile->profile, volume); });
}

wls_status wls_mesh_generate(const char* shape, double h, const wls_model* model, wls_mesh** out) {
  if (!shape) return null_arg("shape");
  if (!model) return null_arg("model");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] {
    *out = new wls_mesh{wlspec::generate_mesh(wlspec::ShapeSpec::parse(shape), h, model->model)};
  });
}

wls_status wls_mesh_read(const char* path, wls_mesh** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] { *out = new wls_mesh{wlspec::load_mesh(path)}; });
}

wls_status wls_mesh_write(const wls_mesh* mesh, const char* path) {
  if (!mesh) return null_arg("mesh");
  if (!path) return null_arg("path");
  return guard([&] { wlspec::save_mesh(path, mesh->mesh); });
}

void wls_mesh_destroy(wls_mesh* mesh) { delete mesh; }

wls_status wls_mesh_counts(const wls_mesh* mesh, size_t* vertices, size_t* triangles,
                           size_t* boundary_vertices) {
  if (!mesh) return null_arg("mesh");
  if (vertices) *vertices = mesh->mesh.num_vertices();
  if (triangles) *triangles = mesh->mesh.num_triangles();
  if (boundary_vertices) *boundary_vertices = mesh->mesh.boundary_vertices.size();
  return WLS_OK;
}

wls_status wls_mesh_weighted_volume(const wls_mesh* mesh, const wls_model* model,
                                    const wls_profile* profile, double* out) {
  if (!mesh) return null_arg("mesh");
  if (!model) return null_arg("model");
  if (!profile) return null_arg("profile");
  if (!out) return null_arg("out");
  return guard([&] { *out = wlspec::mesh_weighted_volume(mesh->mesh, model->model, profile->profile); });
}

wls_status wls_mesh_eigenvalues(const wls_mesh* mesh, const wls_model* model, const wls_profile* profile,
                                wls_boundary bc, int k, double* out) {
  if (!mesh) return null_arg("mesh");
  if (!model) return null_arg("model");
  if (!profile) return null_arg("profile");
  if (!out) return null_arg("out");
  return guard([&] {
    if (model->model.dimension() != 2) wlspec::fail(wlspec::ErrorCode::Domain, "mesh spectra are two-dimensional");
    const wlspec::FemSystem sys =
        wlspec::assemble(mesh->mesh, wlspec::WeightField{model->model, profile->profile, {}}, to_bc(bc));
    const wlspec::SpectrumResult sp = wlspec::solve_spectrum(sys, k);
    for (int i = 0; i < k; ++i) out[i] = sp.eigenvalues[i];
  });
}

wls_status wls_run_suite(const char* config_path, const char* out_dir, int* exit_code) {
  if (!config_path) return null_arg("config_path");
  if (!out_dir) return null_arg("out_dir");
  if (!exit_code) return null_arg("exit_code");
  *exit_code = 1;
  return guard([&] {
    const wlspec::SuiteOutcome res = wlspec::run_suite(config_path, out_dir);
    *exit_code = res.exit_code;
    if (res.exit_code == 1)
      wlspec::fail(res.error.rfind("cannot ", 0) == 0 ? wlspec::ErrorCode::Io : wlspec::ErrorCode::Config,
                   res.error);
  });
}

}  // extern "C"

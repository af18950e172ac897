// Command-line front end. Talks to the library through the C interface only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wlspec/wlspec.h"

namespace {

struct ModelDeleter {
  void operator()(wls_model* m) const { wls_model_destroy(m); }
};
struct ProfileDeleter {
  void operator()(wls_profile* p) const { wls_profile_destroy(p); }
};
struct MeshDeleter {
  void operator()(wls_mesh* m) const { wls_mesh_destroy(m); }
};
using ModelPtr = std::unique_ptr<wls_model, ModelDeleter>;
using ProfilePtr = std::unique_ptr<wls_profile, ProfileDeleter>;
using MeshPtr = std::unique_ptr<wls_mesh, MeshDeleter>;

struct Failure {
  int code;
};

void check(wls_status s) {
  if (s != WLS_OK) {
    std::cerr << "wlspec: " << wls_status_string(s) << ": " << wls_last_error() << "\n";
    throw Failure{1};
  }
}

ModelPtr make_model(int kappa, int dim) {
  wls_model* m = nullptr;
  check(wls_model_create(kappa, dim, &m));
  return ModelPtr(m);
}

ProfilePtr make_profile(const std::string& spec) {
  wls_profile* p = nullptr;
  check(wls_profile_create(spec.c_str(), &p));
  return ProfilePtr(p);
}

void print(double x) { std::printf("%.12g\n", x); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Laplacian spectra on space-form balls and planar domains"};
  app.require_subcommand(1);

  int kappa = 0, dim = 2;
  std::string weight = "zero";
  auto geometry = [&](CLI::App* sub) {
    sub->add_option("--kappa", kappa, "curvature: -1, 0 or 1")->check(CLI::IsMember({-1, 0, 1}));
    sub->add_option("--dim", dim, "dimension")->check(CLI::PositiveNumber);
    sub->add_option("--weight", weight, "weight NAME[:PARAM]");
  };

  double radius = 1.0;
  std::string bc = "dirichlet", mode = "0,1";
  CLI::App* ball = app.add_subcommand("ball", "eigenvalue of a radial mode on a centered ball");
  geometry(ball);
  ball->add_option("--radius", radius, "ball radius")->required();
  ball->add_option("--bc", bc, "dirichlet or neumann")->check(CLI::IsMember({"dirichlet", "neumann"}));
  ball->add_option("--mode", mode, "l,j (angular index, radial overtone)");

  CLI::App* volume = app.add_subcommand("volume", "weighted volume of a centered ball");
  geometry(volume);
  volume->add_option("--radius", radius, "ball radius")->required();

  double target = 0.0;
  CLI::App* rfv = app.add_subcommand("radius-for-volume", "radius of the centered ball with a given weighted volume");
  geometry(rfv);
  rfv->add_option("--volume", target, "weighted volume")->required();

  std::string config, out_dir = "wlspec_out";
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--config", config, "JSON suite config")->required();
  verify->add_option("--out", out_dir, "directory for report.json and summary.csv");

  std::string shape, mesh_out;
  double h = 0.05;
  CLI::App* mesh = app.add_subcommand("mesh", "triangulate a shape and write the mesh file");
  mesh->add_option("--kappa", kappa, "curvature of the model the shape must fit")->check(CLI::IsMember({-1, 0, 1}));
  mesh->add_option("--shape", shape, "shape, e.g. disk:1 or ellipse:1.4,0.7")->required();
  mesh->set_help_flag("--help", "Print this help message and exit");
  mesh->add_option("--h", h, "target edge length")->check(CLI::PositiveNumber);
  mesh->add_option("--out", mesh_out, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ball) {
      int l = 0, j = 1;
      char comma = 0;
      std::istringstream ms(mode);
      if (!(ms >> l >> comma >> j) || comma != ',') {
        std::cerr << "wlspec: --mode expects l,j\n";
        return 1;
      }
      auto m = make_model(kappa, dim);
      auto p = make_profile(weight);
      double value = 0.0;
      check(wls_ball_eigenvalue(m.get(), p.get(), radius, bc == "neumann" ? WLS_NEUMANN : WLS_DIRICHLET, l, j, &value));
      print(value);
    } else if (*volume) {
      auto m = make_model(kappa, dim);
      auto p = make_profile(weight);
      double value = 0.0;
      check(wls_ball_volume(m.get(), p.get(), radius, &value));
      print(value);
    } else if (*rfv) {
      auto m = make_model(kappa, dim);
      auto p = make_profile(weight);
      double value = 0.0;
      check(wls_radius_for_volume(m.get(), p.get(), target, &value));
      print(value);
    } else if (*verify) {
      int code = 1;
      const wls_status s = wls_run_suite(config.c_str(), out_dir.c_str(), &code);
      if (s != WLS_OK) {
        std::cerr << "wlspec: " << wls_status_string(s) << ": " << wls_last_error() << "\n";
        return code == 0 ? 1 : code;
      }
      std::ifstream csv(out_dir + "/summary.csv");
      std::cout << csv.rdbuf();
      return code;
    } else if (*mesh) {
      auto m = make_model(kappa, 2);
      wls_mesh* raw = nullptr;
      check(wls_mesh_generate(shape.c_str(), h, m.get(), &raw));
      MeshPtr msh(raw);
      check(wls_mesh_write(msh.get(), mesh_out.c_str()));
      size_t nv = 0, nt = 0, nb = 0;
      check(wls_mesh_counts(msh.get(), &nv, &nt, &nb));
      std::printf("%zu vertices, %zu triangles, %zu boundary vertices\n", nv, nt, nb);
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}

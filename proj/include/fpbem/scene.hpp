// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FPBEM_SCENE_HPP
#define FPBEM_SCENE_HPP

#include <string>

#include "fpbem/fmm.hpp"
#include "fpbem/postproc.hpp"
#include "fpbem/solver.hpp"

namespace fpbem::scene {

/// Scene-file parse failure with line/key context.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& key, const std::string& what)
      : std::runtime_error("scene parse error (line " + std::to_string(line) +
                           (key.empty() ? "" : ", key '" + key + "'") + "): " + what),
        line_(line),
        key_(key) {}
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

enum class Method { Dense, Pbem, Fmpbem };

std::string method_name(Method m);
Method parse_method(const std::string& name);  // throws std::invalid_argument

struct Scene {
  // medium
  double sound_speed = 343.0;
  double density = 1.21;

  // geometry
  enum class GeometryType { Sphere, Wall, File } geometry = GeometryType::Sphere;
  double radius = 0.1;
  int refinement = 4;
  double wall_ly = 0.2, wall_lz = 0.2, wall_thickness = 0.1;
  int wall_div = 2;
  std::string mesh_path;
  Complex beta{0.0, 0.0};

  geom::Lattice lattice{{1, 1, 1}, {0.0, 0.0, 0.0}};
  std::optional<geom::HalfSpace> half_space;

  struct Source {
    enum class Kind { Plane, Monopole } kind = Kind::Plane;
    Vec3 vec{1.0, 0.0, 0.0};  // direction or position
    Complex amplitude{1.0, 0.0};
  };
  std::vector<Source> sources;

  // sweep
  double f_min = 100.0, f_max = 100.0;
  int sweep_count = 1;

  // method
  Method method = Method::Fmpbem;
  int n_t = 4;

  // solver
  double tol = 1e-4;
  int restart = 100;
  int max_iter = 1000;

  // output
  std::string output_dir = "out";
  struct IlGrid {
    Vec3 lo, hi;
    std::array<int, 3> counts{1, 1, 1};
  };
  std::optional<IlGrid> il_grid;
  struct FieldPlane {
    int axis = 2;          // plane normal axis
    double offset = 0.0;   // plane coordinate
    double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
    int nu = 10, nv = 10;
  };
  std::optional<FieldPlane> field_plane;
  double mem_cap_gib = 8.0;

  geom::SurfaceMesh build_cell() const;
  kernels::IncidentField build_field() const;
  std::vector<double> frequencies() const;
};

Scene parse_scene_text(const std::string& text);
Scene parse_scene_file(const std::string& path);

struct RunOptions {
  std::optional<Method> method_override;
  std::string output_override;
  int threads = 0;  // 0 keeps the environment default
  bool verbose = false;
};

/// Executes the sweep: assemble, solve, post-process per frequency; writes
/// il.csv, optional field_<f>.csv and a manifest of every resolved setting.
/// Returns 0 on success, 2 on numerical failure.
int run_scene(const Scene& scene, const RunOptions& options = {});

struct BenchRow {
  std::string method;
  int size = 0;
  double assembly_s = 0.0;
  double matvec_s = 0.0;
  size_t memory_bytes = 0;
};

/// Varies one size parameter ("Mx" | "My" | "Mz" | "refinement") and times
/// assembly and products per backend; writes bench.csv and returns the rows.
std::vector<BenchRow> run_benchmark(const Scene& scene, const std::string& vary,
                                    const std::vector<int>& sizes,
                                    const std::vector<Method>& methods, int reps,
                                    const RunOptions& options = {});

}  // namespace fpbem::scene

#endif  // FPBEM_SCENE_HPP

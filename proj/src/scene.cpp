// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fpbem/scene.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fpbem/structured.hpp"

namespace fpbem::scene {

namespace fs = std::filesystem;

std::string method_name(Method m) {
  switch (m) {
    case Method::Dense: return "dense";
    case Method::Pbem: return "pbem";
    default: return "fmpbem";
  }
}

Method parse_method(const std::string& name) {
  if (name == "dense") return Method::Dense;
  if (name == "pbem") return Method::Pbem;
  if (name == "fmpbem") return Method::Fmpbem;
  throw std::invalid_argument("unknown method '" + name + "'");
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Cursor {
  int line = 0;
  std::string key;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_doubles(const Cursor& c, const std::string& value, size_t expected) {
  std::istringstream in(value);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (out.size() != expected || !(in >> std::ws).eof())
    throw ParseError(c.line, c.key,
                     "expected " + std::to_string(expected) + " numbers, got '" + value + "'");
  return out;
}

double parse_double(const Cursor& c, const std::string& value) {
  return parse_doubles(c, value, 1)[0];
}

int parse_int(const Cursor& c, const std::string& value) {
  double v = parse_double(c, value);
  int i = static_cast<int>(std::lround(v));
  if (i != v) throw ParseError(c.line, c.key, "expected an integer, got '" + value + "'");
  return i;
}

Complex parse_complex(const Cursor& c, const std::string& value) {
  auto v = parse_doubles(c, value, 2);
  return Complex{v[0], v[1]};
}

Vec3 parse_vec3(const Cursor& c, const std::string& value) {
  auto v = parse_doubles(c, value, 3);
  return Vec3{v[0], v[1], v[2]};
}

int parse_axis(const Cursor& c, const std::string& value) {
  if (value == "x") return 0;
  if (value == "y") return 1;
  if (value == "z") return 2;
  throw ParseError(c.line, c.key, "expected axis x, y or z, got '" + value + "'");
}

}  // namespace

Scene parse_scene_text(const std::string& text) {
  Scene scene;
  std::istringstream in(text);
  std::string raw, section;
  Cursor cur;
  Scene::Source* source = nullptr;
  bool geometry_type_seen = false;

  while (std::getline(in, raw)) {
    ++cur.line;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(cur.line, "", "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      cur.key.clear();
      if (section == "source") {
        scene.sources.emplace_back();
        source = &scene.sources.back();
      } else if (section != "medium" && section != "geometry" && section != "lattice" &&
                 section != "halfspace" && section != "sweep" && section != "method" &&
                 section != "solver" && section != "output") {
        throw ParseError(cur.line, "", "unknown section '" + section + "'");
      }
      if (section == "halfspace" && !scene.half_space) scene.half_space = geom::HalfSpace{};
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(cur.line, "", "expected 'key = value'");
    cur.key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (cur.key.empty() || value.empty())
      throw ParseError(cur.line, cur.key, "expected 'key = value'");

    try {
      if (section == "medium") {
        if (cur.key == "c") scene.sound_speed = parse_double(cur, value);
        else if (cur.key == "rho") scene.density = parse_double(cur, value);
        else throw ParseError(cur.line, cur.key, "unknown key in [medium]");
      } else if (section == "geometry") {
        if (cur.key == "type") {
          geometry_type_seen = true;
          if (value == "sphere") scene.geometry = Scene::GeometryType::Sphere;
          else if (value == "wall") scene.geometry = Scene::GeometryType::Wall;
          else if (value == "file") scene.geometry = Scene::GeometryType::File;
          else throw ParseError(cur.line, cur.key, "unknown geometry type '" + value + "'");
        } else if (cur.key == "radius") scene.radius = parse_double(cur, value);
        else if (cur.key == "refinement") scene.refinement = parse_int(cur, value);
        else if (cur.key == "layer_size") {
          auto v = parse_doubles(cur, value, 2);
          scene.wall_ly = v[0];
          scene.wall_lz = v[1];
        } else if (cur.key == "thickness") scene.wall_thickness = parse_double(cur, value);
        else if (cur.key == "layer_divisions") scene.wall_div = parse_int(cur, value);
        else if (cur.key == "path") scene.mesh_path = value;
        else if (cur.key == "beta") scene.beta = parse_complex(cur, value);
        else throw ParseError(cur.line, cur.key, "unknown key in [geometry]");
      } else if (section == "lattice") {
        if (cur.key == "counts") {
          auto v = parse_doubles(cur, value, 3);
          for (int d = 0; d < 3; ++d) {
            scene.lattice.counts[d] = static_cast<int>(v[d]);
            if (scene.lattice.counts[d] < 1)
              throw ParseError(cur.line, cur.key, "lattice counts must be >= 1");
          }
        } else if (cur.key == "pitches") {
          Vec3 p = parse_vec3(cur, value);
          scene.lattice.pitches = {p[0], p[1], p[2]};
        } else throw ParseError(cur.line, cur.key, "unknown key in [lattice]");
      } else if (section == "halfspace") {
        if (cur.key == "axis") scene.half_space->axis = parse_axis(cur, value);
        else if (cur.key == "offset") scene.half_space->offset = parse_double(cur, value);
        else if (cur.key == "reflection") scene.half_space->reflection = parse_complex(cur, value);
        else throw ParseError(cur.line, cur.key, "unknown key in [halfspace]");
      } else if (section == "source") {
        if (!source) throw ParseError(cur.line, cur.key, "key outside a [source] section");
        if (cur.key == "type") {
          if (value == "plane") source->kind = Scene::Source::Kind::Plane;
          else if (value == "monopole") source->kind = Scene::Source::Kind::Monopole;
          else throw ParseError(cur.line, cur.key, "unknown source type '" + value + "'");
        } else if (cur.key == "direction" || cur.key == "position")
          source->vec = parse_vec3(cur, value);
        else if (cur.key == "amplitude" || cur.key == "strength")
          source->amplitude = parse_double(cur, value);
        else if (cur.key == "amplitude_c" || cur.key == "strength_c")
          source->amplitude = parse_complex(cur, value);
        else throw ParseError(cur.line, cur.key, "unknown key in [source]");
      } else if (section == "sweep") {
        if (cur.key == "f_min") scene.f_min = parse_double(cur, value);
        else if (cur.key == "f_max") scene.f_max = parse_double(cur, value);
        else if (cur.key == "count") scene.sweep_count = parse_int(cur, value);
        else throw ParseError(cur.line, cur.key, "unknown key in [sweep]");
      } else if (section == "method") {
        if (cur.key == "name") {
          try {
            scene.method = parse_method(value);
          } catch (const std::invalid_argument& e) {
            throw ParseError(cur.line, cur.key, e.what());
          }
        } else if (cur.key == "n_t") scene.n_t = parse_int(cur, value);
        else throw ParseError(cur.line, cur.key, "unknown key in [method]");
      } else if (section == "solver") {
        if (cur.key == "tol") scene.tol = parse_double(cur, value);
        else if (cur.key == "restart") scene.restart = parse_int(cur, value);
        else if (cur.key == "max_iter") scene.max_iter = parse_int(cur, value);
        else throw ParseError(cur.line, cur.key, "unknown key in [solver]");
      } else if (section == "output") {
        if (cur.key == "directory") scene.output_dir = value;
        else if (cur.key == "il_box") {
          auto v = parse_doubles(cur, value, 6);
          if (!scene.il_grid) scene.il_grid = Scene::IlGrid{};
          scene.il_grid->lo = Vec3{v[0], v[1], v[2]};
          scene.il_grid->hi = Vec3{v[3], v[4], v[5]};
        } else if (cur.key == "il_counts") {
          auto v = parse_doubles(cur, value, 3);
          if (!scene.il_grid) scene.il_grid = Scene::IlGrid{};
          for (int d = 0; d < 3; ++d) scene.il_grid->counts[d] = static_cast<int>(v[d]);
        } else if (cur.key == "field_plane") {
          std::istringstream fp(value);
          std::string axis;
          Scene::FieldPlane plane;
          if (!(fp >> axis >> plane.offset >> plane.u0 >> plane.u1 >> plane.nu >> plane.v0 >>
                plane.v1 >> plane.nv))
            throw ParseError(cur.line, cur.key,
                             "expected 'axis offset u0 u1 nu v0 v1 nv', got '" + value + "'");
          plane.axis = parse_axis(cur, axis);
          scene.field_plane = plane;
        } else if (cur.key == "memory_cap_gib") scene.mem_cap_gib = parse_double(cur, value);
        else throw ParseError(cur.line, cur.key, "unknown key in [output]");
      } else {
        throw ParseError(cur.line, cur.key, "key before any section header");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(cur.line, cur.key, e.what());
    }
  }

  if (scene.sources.empty()) throw ParseError(cur.line, "", "at least one [source] is required");
  if (!geometry_type_seen) throw ParseError(cur.line, "", "a [geometry] type is required");
  if (scene.f_min <= 0.0 || scene.f_max < scene.f_min || scene.sweep_count < 1)
    throw ParseError(cur.line, "", "invalid [sweep]: need 0 < f_min <= f_max, count >= 1");
  return scene;
}

Scene parse_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "", "cannot open scene file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scene_text(text.str());
}

// ---------------------------------------------------------------------------
// scene execution

geom::SurfaceMesh Scene::build_cell() const {
  switch (geometry) {
    case GeometryType::Sphere:
      return geom::generate_sphere_mesh(radius, refinement, beta);
    case GeometryType::Wall:
      return geom::generate_wall_cell(wall_ly, wall_lz, wall_thickness, wall_div, beta);
    default:
      return geom::load_mesh(mesh_path);
  }
}

kernels::IncidentField Scene::build_field() const {
  kernels::IncidentField field;
  for (const Source& s : sources) {
    if (s.kind == Source::Kind::Plane)
      field.add_plane_wave(s.vec, s.amplitude);
    else
      field.add_monopole(s.vec, s.amplitude);
  }
  field.half_space = half_space;
  return field;
}

std::vector<double> Scene::frequencies() const {
  std::vector<double> f(sweep_count);
  for (int i = 0; i < sweep_count; ++i)
    f[i] = (sweep_count == 1) ? f_min
                              : f_min + (f_max - f_min) * i / (sweep_count - 1.0);
  return f;
}

namespace {

struct Backend {
  solver::ApplyFn apply;
  size_t bytes = 0;
};

Backend make_backend(Method method, const Scene& scene, const geom::SurfaceMesh& cell,
                     const geom::SurfaceMesh& full, const WaveContext& ctx,
                     const kernels::IncidentField& field) {
  switch (method) {
    case Method::Dense: {
      auto sys = std::make_shared<assembly::DenseSystem>(
          assembly::assemble_dense(full, ctx, field, scene.half_space, scene.mem_cap_gib));
      return {[sys](const VecXc& v) { return (sys->matrix * v).eval(); },
              sizeof(Complex) * static_cast<size_t>(sys->matrix.size())};
    }
    case Method::Pbem: {
      auto periodic = assembly::assemble_periodic_toeplitz(cell, scene.lattice, ctx,
                                                           scene.half_space);
      auto spec = std::make_shared<structured::CirculantSpectrum>(periodic.toeplitz);
      std::shared_ptr<structured::CirculantSpectrum> hspec;
      int level = periodic.hankel ? periodic.hankel->mirrored_level : -1;
      if (periodic.hankel)
        hspec = std::make_shared<structured::CirculantSpectrum>(
            structured::hankel_spectrum(*periodic.hankel));
      size_t bytes = spec->stored_bytes() + (hspec ? hspec->stored_bytes() : 0);
      return {[spec, hspec, level](const VecXc& v) {
                VecXc y = spec->matvec(v);
                if (hspec) y += structured::hankel_matvec(*hspec, level, v);
                return y;
              },
              bytes};
    }
    default: {
      auto ops = std::make_shared<fmm::FmmOperators>(fmm::assemble_periodic_fmm(
          cell, scene.lattice, ctx, fmm::FmmConfig{.n_t = scene.n_t}, scene.half_space));
      return {[ops](const VecXc& v) { return ops->matvec(v); }, ops->stored_bytes()};
    }
  }
}

void apply_thread_option(const RunOptions& options) {
#ifdef _OPENMP
  if (options.threads > 0) omp_set_num_threads(options.threads);
#else
  (void)options;
#endif
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_manifest(const Scene& scene, Method method, const std::string& dir,
                    const RunOptions& options) {
  std::ofstream out(fs::path(dir) / "manifest.txt");
  out << "[medium]\nc = " << format_g17(scene.sound_speed)
      << "\nrho = " << format_g17(scene.density) << "\n\n[geometry]\n";
  switch (scene.geometry) {
    case Scene::GeometryType::Sphere:
      out << "type = sphere\nradius = " << format_g17(scene.radius)
          << "\nrefinement = " << scene.refinement << "\n";
      break;
    case Scene::GeometryType::Wall:
      out << "type = wall\nlayer_size = " << format_g17(scene.wall_ly) << " "
          << format_g17(scene.wall_lz) << "\nthickness = " << format_g17(scene.wall_thickness)
          << "\nlayer_divisions = " << scene.wall_div << "\n";
      break;
    case Scene::GeometryType::File:
      out << "type = file\npath = " << scene.mesh_path << "\n";
      break;
  }
  out << "beta = " << format_g17(scene.beta.real()) << " " << format_g17(scene.beta.imag())
      << "\n\n[lattice]\ncounts = " << scene.lattice.counts[0] << " " << scene.lattice.counts[1]
      << " " << scene.lattice.counts[2] << "\npitches = " << format_g17(scene.lattice.pitches[0])
      << " " << format_g17(scene.lattice.pitches[1]) << " "
      << format_g17(scene.lattice.pitches[2]) << "\n";
  if (scene.half_space) {
    out << "\n[halfspace]\naxis = " << "xyz"[scene.half_space->axis]
        << "\noffset = " << format_g17(scene.half_space->offset)
        << "\nreflection = " << format_g17(scene.half_space->reflection.real()) << " "
        << format_g17(scene.half_space->reflection.imag()) << "\n";
  }
  for (const auto& s : scene.sources) {
    out << "\n[source]\ntype = "
        << (s.kind == Scene::Source::Kind::Plane ? "plane" : "monopole") << "\n"
        << (s.kind == Scene::Source::Kind::Plane ? "direction" : "position") << " = "
        << format_g17(s.vec[0]) << " " << format_g17(s.vec[1]) << " " << format_g17(s.vec[2])
        << "\namplitude_c = " << format_g17(s.amplitude.real()) << " "
        << format_g17(s.amplitude.imag()) << "\n";
  }
  out << "\n[sweep]\nf_min = " << format_g17(scene.f_min)
      << "\nf_max = " << format_g17(scene.f_max) << "\ncount = " << scene.sweep_count
      << "\n\n[method]\nname = " << method_name(method) << "\nn_t = " << scene.n_t
      << "\n\n[solver]\ntol = " << format_g17(scene.tol) << "\nrestart = " << scene.restart
      << "\nmax_iter = " << scene.max_iter << "\n\n[output]\ndirectory = " << dir
      << "\nmemory_cap_gib = " << format_g17(scene.mem_cap_gib) << "\n";
  if (scene.il_grid) {
    out << "il_box =";
    for (int d = 0; d < 3; ++d) out << " " << format_g17(scene.il_grid->lo[d]);
    for (int d = 0; d < 3; ++d) out << " " << format_g17(scene.il_grid->hi[d]);
    out << "\nil_counts = " << scene.il_grid->counts[0] << " " << scene.il_grid->counts[1] << " "
        << scene.il_grid->counts[2] << "\n";
  }
  if (scene.field_plane) {
    const auto& p = *scene.field_plane;
    out << "field_plane = " << "xyz"[p.axis] << " " << format_g17(p.offset) << " "
        << format_g17(p.u0) << " " << format_g17(p.u1) << " " << p.nu << " " << format_g17(p.v0)
        << " " << format_g17(p.v1) << " " << p.nv << "\n";
  }
  out << "threads = " << options.threads << "\n";
}

std::vector<Vec3> field_plane_points(const Scene::FieldPlane& p) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<size_t>(p.nu) * p.nv);
  int ua = (p.axis + 1) % 3, va = (p.axis + 2) % 3;
  for (int j = 0; j < p.nv; ++j)
    for (int i = 0; i < p.nu; ++i) {
      Vec3 x;
      x[p.axis] = p.offset;
      x[ua] = (p.nu == 1) ? p.u0 : p.u0 + (p.u1 - p.u0) * i / (p.nu - 1.0);
      x[va] = (p.nv == 1) ? p.v0 : p.v0 + (p.v1 - p.v0) * j / (p.nv - 1.0);
      pts.push_back(x);
    }
  return pts;
}

}  // namespace

int run_scene(const Scene& scene, const RunOptions& options) {
  apply_thread_option(options);
  Method method = options.method_override.value_or(scene.method);
  std::string dir = options.output_override.empty() ? scene.output_dir : options.output_override;
  fs::create_directories(dir);
  write_manifest(scene, method, dir, options);

  geom::SurfaceMesh cell = scene.build_cell();
  geom::SurfaceMesh full = geom::replicate_lattice(cell, scene.lattice);
  kernels::IncidentField field = scene.build_field();

  std::vector<Vec3> il_points;
  if (scene.il_grid)
    il_points = postproc::grid_points(scene.il_grid->lo, scene.il_grid->hi,
                                      scene.il_grid->counts);

  std::ofstream il_csv(fs::path(dir) / "il.csv");
  il_csv << "frequency_hz,il_db,iterations,residual,wall_time_s\n";

  int exit_code = 0;
  for (double f : scene.frequencies()) {
    auto t0 = std::chrono::steady_clock::now();
    try {
      WaveContext ctx = WaveContext::make(f, scene.sound_speed, scene.density);
      Backend backend = make_backend(method, scene, cell, full, ctx, field);
      VecXc rhs = assembly::assemble_rhs(full, ctx, field);
      solver::SolveReport report = solver::gmres(
          backend.apply, rhs, {.tol = scene.tol, .restart = scene.restart,
                               .max_iter = scene.max_iter});
      if (!report.converged && options.verbose)
        std::cerr << "warning: " << f << " Hz did not converge (residual "
                  << (report.residual_history.empty() ? 1.0 : report.residual_history.back())
                  << ")\n";

      double il = std::numeric_limits<double>::quiet_NaN();
      if (!il_points.empty()) {
        VecXc p_inc(static_cast<Eigen::Index>(il_points.size()));
        for (size_t i = 0; i < il_points.size(); ++i)
          p_inc(static_cast<Eigen::Index>(i)) =
              kernels::incident_values(field, ctx, il_points[i], Vec3{0, 0, 1}).first;
        VecXc p_tot = postproc::evaluate_field(full, report.solution, ctx, field, il_points,
                                               scene.half_space);
        il = postproc::insertion_loss(p_inc, p_tot);
      }

      if (scene.field_plane) {
        std::vector<Vec3> pts = field_plane_points(*scene.field_plane);
        VecXc p = postproc::evaluate_field(full, report.solution, ctx, field, pts,
                                           scene.half_space);
        char name[64];
        std::snprintf(name, sizeof(name), "field_%g.csv", f);
        std::ofstream fcsv(fs::path(dir) / name);
        fcsv << "x,y,z,re_p,im_p,abs_p\n";
        for (size_t i = 0; i < pts.size(); ++i) {
          Complex v = p(static_cast<Eigen::Index>(i));
          fcsv << format_g17(pts[i].x()) << "," << format_g17(pts[i].y()) << ","
               << format_g17(pts[i].z()) << "," << format_g17(v.real()) << ","
               << format_g17(v.imag()) << "," << format_g17(std::abs(v)) << "\n";
        }
      }

      double res = report.residual_history.empty() ? 0.0 : report.residual_history.back();
      double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      il_csv << format_g17(f) << "," << format_g17(il) << "," << report.iterations << ","
             << format_g17(res) << "," << format_g17(wall) << "\n";
      il_csv.flush();
    } catch (const std::exception& e) {
      std::cerr << "error at " << f << " Hz: " << e.what() << "\n";
      exit_code = 2;
    }
  }
  return exit_code;
}

std::vector<BenchRow> run_benchmark(const Scene& scene, const std::string& vary,
                                    const std::vector<int>& sizes,
                                    const std::vector<Method>& methods, int reps,
                                    const RunOptions& options) {
  apply_thread_option(options);
  std::string dir = options.output_override.empty() ? scene.output_dir : options.output_override;
  fs::create_directories(dir);

  std::vector<BenchRow> rows;
  for (int size : sizes) {
    Scene sized = scene;
    if (vary == "Mx") sized.lattice.counts[0] = size;
    else if (vary == "My") sized.lattice.counts[1] = size;
    else if (vary == "Mz") sized.lattice.counts[2] = size;
    else if (vary == "refinement") sized.refinement = size;
    else throw std::invalid_argument("run_benchmark: vary must be Mx, My, Mz or refinement");

    geom::SurfaceMesh cell = sized.build_cell();
    geom::SurfaceMesh full = geom::replicate_lattice(cell, sized.lattice);
    kernels::IncidentField field = sized.build_field();
    WaveContext ctx = WaveContext::make(sized.f_min, sized.sound_speed, sized.density);

    for (Method m : methods) {
      BenchRow row;
      row.method = method_name(m);
      row.size = size;
      auto ta = std::chrono::steady_clock::now();
      Backend backend = make_backend(m, sized, cell, full, ctx, field);
      row.assembly_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - ta).count();
      row.memory_bytes = backend.bytes;

      VecXc p = VecXc::Ones(full.size());
      VecXc y = backend.apply(p);  // warmup
      auto tw = std::chrono::steady_clock::now();
      y += backend.apply(p);
      double once =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - tw).count();
      // batches of at least ~20 ms keep tiny products measurable
      int batch = std::max(reps, static_cast<int>(0.02 / std::max(once, 1e-9)));
      double best = std::numeric_limits<double>::max();
      for (int trial = 0; trial < 5; ++trial) {
        auto t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < batch; ++r) y += backend.apply(p);
        double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / batch;
        best = std::min(best, dt);
      }
      row.matvec_s = best;
      rows.push_back(row);
    }
  }

  std::ofstream csv(fs::path(dir) / "bench.csv");
  csv << "method,size,assembly_s,matvec_s,memory_bytes\n";
  for (const BenchRow& r : rows)
    csv << r.method << "," << r.size << "," << format_g17(r.assembly_s) << ","
        << format_g17(r.matvec_s) << "," << r.memory_bytes << "\n";
  return rows;
}

}  // namespace fpbem::scene

// Acceptance suite: one self-contained check per criterion, each printing a
// single PASS/FAIL line. Run all with no arguments or a subset by number.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fpbem/fmm.hpp"
#include "fpbem/postproc.hpp"
#include "fpbem/scene.hpp"
#include "fpbem/solver.hpp"
#include "oracles.hpp"

using namespace fpbem;
namespace sf = fpbem::specfun;
using assembly::assemble_dense;
using assembly::assemble_periodic_toeplitz;
using assembly::assemble_rhs;
using geom::HalfSpace;
using geom::Lattice;
using geom::SurfaceMesh;
using kernels::IncidentField;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

WaveContext air(double f) { return WaveContext::make(f, 343.0, 1.21); }

SurfaceMesh raised_sphere(double radius, int refinement, const Vec3& shift) {
  SurfaceMesh m = geom::generate_sphere_mesh(radius, refinement);
  for (auto& e : m.elements) {
    for (auto& c : e.corners) c += shift;
    e.centroid += shift;
  }
  return m;
}

VecXc solve(const solver::ApplyFn& apply, const VecXc& rhs, double tol, int max_iter = 2000) {
  auto rep = solver::gmres(apply, rhs, {.tol = tol, .restart = 200, .max_iter = max_iter});
  if (!rep.converged) throw std::runtime_error("solver did not converge");
  return rep.solution;
}

double fit_loglog_slope(const std::vector<double>& sizes, const std::vector<double>& values) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t n = sizes.size();
  for (size_t i = 0; i < n; ++i) {
    double x = std::log(sizes[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------

void criterion1() {
  // PBEM exactness on a 3x3x1 array of coarse spheres
  SurfaceMesh cell = geom::generate_sphere_mesh(0.1, 4);  // 96 elements
  Lattice lat{{3, 3, 1}, {0.35, 0.35, 0.35}};
  WaveContext ctx = air(500.0);
  IncidentField pw = IncidentField::plane_wave(Vec3{1, 0, 0}, 1.0);

  SurfaceMesh full = geom::replicate_lattice(cell, lat);
  auto dense = assemble_dense(full, ctx, pw);
  auto periodic = assemble_periodic_toeplitz(cell, lat, ctx);
  structured::CirculantSpectrum spec(periodic.toeplitz);

  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  VecXc p(dense.matrix.rows());
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = Complex{g(rng), g(rng)};
  VecXc ref = dense.matrix * p;
  double matvec_err = (spec.matvec(p) - ref).norm() / ref.norm();

  VecXc direct = dense.matrix.partialPivLu().solve(dense.rhs);
  VecXc iterative = solve([&](const VecXc& v) { return spec.matvec(v); }, dense.rhs, 1e-10);
  double solve_err = (iterative - direct).norm() / direct.norm();

  bool pass = matvec_err < 1e-12 && solve_err < 1e-8;
  report(1, "PBEM exactness",
         pass, fmt("toeplitz fft vs dense matvec %.2e (< 1e-12); pbem+gmres vs lu %.2e (< 1e-8)",
                   matvec_err, solve_err));
}

void criterion2() {
  // FMPBEM matvec accuracy at n_t = 4 on the 5x5 sphere array
  SurfaceMesh cell = geom::generate_sphere_mesh(0.1, 4);
  Lattice lat{{5, 5, 1}, {0.35, 0.35, 0.35}};
  WaveContext ctx = air(500.0);
  IncidentField pw = IncidentField::plane_wave(Vec3{1, 0, 0}, 1.0);

  SurfaceMesh full = geom::replicate_lattice(cell, lat);
  auto dense = assemble_dense(full, ctx, pw);
  fmm::FmmOperators ops = fmm::assemble_periodic_fmm(cell, lat, ctx, {.n_t = 4});

  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  VecXc p(dense.matrix.rows());
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = Complex{g(rng), g(rng)};
  VecXc ref = dense.matrix * p;
  double err = (ops.matvec(p) - ref).norm() / ref.norm();
  report(2, "FMPBEM accuracy", err < 1e-4,
         fmt("fmpbem vs dense matvec at n_t=4, 500 Hz: %.3e (< 1e-4)", err));
}

void criterion3() {
  // truncation study on a 1x8 line array against the PBEM reference
  SurfaceMesh cell = geom::generate_sphere_mesh(0.1, 4);
  Lattice lat{{1, 8, 1}, {0.0, 0.35, 0.0}};
  SurfaceMesh full = geom::replicate_lattice(cell, lat);
  IncidentField pw = IncidentField::plane_wave(Vec3{0, 1, 0}, 1.0);

  auto solve_pbem = [&](const WaveContext& ctx) {
    auto periodic = assemble_periodic_toeplitz(cell, lat, ctx);
    structured::CirculantSpectrum spec(periodic.toeplitz);
    return solve([&](const VecXc& v) { return spec.matvec(v); },
                 assemble_rhs(full, ctx, pw), 1e-14, 4000);
  };
  auto solve_fm = [&](const WaveContext& ctx, int n_t) {
    fmm::FmmOperators ops = fmm::assemble_periodic_fmm(cell, lat, ctx, {.n_t = n_t});
    return solve([&](const VecXc& v) { return ops.matvec(v); },
                 assemble_rhs(full, ctx, pw), 1e-14, 4000);
  };

  // kL = 3.2 with L = 0.35
  double f1 = 3.2 / 0.35 * 343.0 / (2.0 * pi);
  WaveContext c1 = air(f1);
  VecXc ref1 = solve_pbem(c1);
  std::vector<double> errors;
  bool monotone = true;
  std::string detail = "errors at kL=3.2:";
  for (int n_t : {2, 4, 6, 8}) {
    VecXc p = solve_fm(c1, n_t);
    errors.push_back((p - ref1).norm() / ref1.norm());
    detail += fmt(" %.2e", errors.back());
    if (errors.size() > 1 && errors.back() >= errors[errors.size() - 2]) monotone = false;
  }

  // kL = 6.4 at n_t = 6; absolute threshold within the 10x allowance
  double f2 = 6.4 / 0.35 * 343.0 / (2.0 * pi);
  WaveContext c2 = air(f2);
  VecXc ref2 = solve_pbem(c2);
  VecXc p6 = solve_fm(c2, 6);
  double err64 = (p6 - ref2).norm() / ref2.norm();
  detail += fmt("; n_t=6 at kL=6.4: %.2e (< 1e-3)", err64);

  report(3, "truncation study trend", monotone && err64 < 1e-3, detail);
}

void criterion4() {
  // dense BEM on a 600-element rigid sphere against the partial-wave series
  double a = 0.1;
  double f = 343.0 / (2.0 * pi * a);  // ka = 1
  WaveContext ctx = air(f);
  SurfaceMesh mesh = geom::generate_sphere_mesh(a, 10);  // 600 elements
  IncidentField pw = IncidentField::plane_wave(Vec3{1, 0, 0}, 1.0);
  auto sys = assemble_dense(mesh, ctx, pw);
  VecXc p = solve([&](const VecXc& v) { return (sys.matrix * v).eval(); }, sys.rhs, 1e-8);

  double num = 0.0, den = 0.0;
  for (int i = 0; i < mesh.size(); ++i) {
    Vec3 dir = mesh.elements[i].centroid.normalized();
    Complex ref = postproc::rigid_sphere_reference(ctx, a, 1.0, a * dir, Vec3{1, 0, 0});
    num += std::norm(p(i) - ref);
    den += std::norm(ref);
  }
  double surface_err = std::sqrt(num / den);

  Vec3 obs{5.0 * a, 0.0, 0.0};
  VecXc field = postproc::evaluate_field(mesh, p, ctx, pw, {obs});
  Complex ref = postproc::rigid_sphere_reference(ctx, a, 1.0, obs, Vec3{1, 0, 0});
  double field_err = std::abs(field(0) - ref) / std::abs(ref);

  report(4, "physical accuracy vs partial-wave series",
         surface_err < 0.02 && field_err < 0.01,
         fmt("surface l2 %.3f%% (< 2%%); exterior at 5a %.3f%% (< 1%%)", 100.0 * surface_err,
             100.0 * field_err));
}

void criterion5() {
  // half-space split: 2x2 array above a rigid plane, periodicity
  // perpendicular to the mirror
  SurfaceMesh cell = raised_sphere(0.1, 4, Vec3{0.0, 0.0, 0.25});
  Lattice lat{{1, 2, 2}, {0.0, 0.35, 0.35}};
  HalfSpace ground{2, 0.0, Complex{1.0, 0.0}};
  WaveContext ctx = air(500.0);
  IncidentField pw = IncidentField::plane_wave(Vec3{0, 1, 0}, 1.0);
  pw.half_space = ground;

  SurfaceMesh full = geom::replicate_lattice(cell, lat);
  auto dense = assemble_dense(full, ctx, pw, ground);

  auto periodic = assemble_periodic_toeplitz(cell, lat, ctx, ground);
  structured::CirculantSpectrum tspec(periodic.toeplitz);
  structured::CirculantSpectrum hspec = structured::hankel_spectrum(*periodic.hankel);
  int level = periodic.hankel->mirrored_level;

  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  VecXc p(dense.matrix.rows());
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = Complex{g(rng), g(rng)};
  VecXc ref = dense.matrix * p;
  VecXc split = tspec.matvec(p) + structured::hankel_matvec(hspec, level, p);
  double structured_err = (split - ref).norm() / ref.norm();

  fmm::FmmOperators ops = fmm::assemble_periodic_fmm(cell, lat, ctx, {.n_t = 4}, ground);
  double fmm_err = (ops.matvec(p) - ref).norm() / ref.norm();

  report(5, "half-space split correctness",
         structured_err < 1e-12 && fmm_err < 1e-4,
         fmt("(T+That) fft vs dense %.2e (< 1e-12); hatted fmm %.2e (< 1e-4)", structured_err,
             fmm_err));
}

void criterion6() {
  // scaling trends over My in {8,16,32,64} with a 24-element cell
  scene::Scene sc;
  sc.geometry = scene::Scene::GeometryType::Sphere;
  sc.radius = 0.1;
  sc.refinement = 2;
  sc.lattice = Lattice{{1, 8, 1}, {0.35, 0.35, 0.35}};
  sc.sources.push_back({});
  sc.f_min = sc.f_max = 500.0;
  sc.n_t = 4;
  sc.output_dir = "acceptance_bench";

  std::vector<int> sizes{8, 16, 32, 64};
  auto rows = scene::run_benchmark(
      sc, "My", sizes, {scene::Method::Dense, scene::Method::Pbem, scene::Method::Fmpbem}, 10);

  std::vector<double> s_d, t_dense, t_pbem, t_fm, bytes_pbem;
  for (const auto& r : rows) {
    if (r.method == "dense") {
      s_d.push_back(r.size);
      t_dense.push_back(r.matvec_s);
    } else if (r.method == "pbem") {
      t_pbem.push_back(r.matvec_s);
      bytes_pbem.push_back(static_cast<double>(r.memory_bytes));
    } else {
      t_fm.push_back(r.matvec_s);
    }
  }
  double e_dense = fit_loglog_slope(s_d, t_dense);
  double e_pbem = fit_loglog_slope(s_d, t_pbem);
  double e_fm = fit_loglog_slope(s_d, t_fm);

  // proportionality of pbem bytes to My within 10 percent
  double c_sum = 0.0;
  for (size_t i = 0; i < sizes.size(); ++i) c_sum += bytes_pbem[i] / sizes[i];
  double c_fit = c_sum / sizes.size();
  double max_dev = 0.0;
  for (size_t i = 0; i < sizes.size(); ++i)
    max_dev = std::max(max_dev, std::abs(bytes_pbem[i] - c_fit * sizes[i]) / (c_fit * sizes[i]));

  bool pass = e_pbem < 1.3 && e_fm < 1.3 && e_dense > 1.7 && e_dense < 2.3 && max_dev < 0.10;
  report(6, "scaling trends", pass,
         fmt("matvec exponents: pbem %.2f, fmpbem %.2f (< 1.3), dense %.2f (in [1.7, 2.3]); "
             "pbem bytes vs My deviation %.1f%% (< 10%%)",
             e_pbem, e_fm, e_dense, 100.0 * max_dev));
}

void criterion7() {
  // recentering within 10x truncation error over 50 random configurations
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto unit = [&] {
    Vec3 v{u(rng), u(rng), u(rng)};
    while (v.norm() < 0.1) v = Vec3{u(rng), u(rng), u(rng)};
    return (v / v.norm()).eval();
  };
  WaveContext ctx = air(500.0);
  double k = ctx.wavenumber;

  // the truncation error of one expansion is estimated as the rms deviation
  // from the exact kernel over a batch of evaluation points; a single point
  // can sit on an angular node of the error and make ratios meaningless
  int bad = 0;
  for (int cfg = 0; cfg < 50; ++cfg) {
    int n_t = (cfg % 2) ? 8 : 4;
    int pc = sf::coeff_count(n_t);
    Vec3 yc{0.1 * u(rng), 0.1 * u(rng), 0.1 * u(rng)};
    Vec3 y = yc + 0.1 * unit();
    Vec3 shift = 0.025 * unit();
    std::vector<Vec3> xs;
    for (int i = 0; i < 8; ++i) xs.push_back(yc + (1.0 + 0.4 * std::abs(u(rng))) * unit());

    VecXc mom(pc);
    std::vector<Complex> iy(pc);
    sf::solid_regular_all(n_t, y - yc, k, iy.data());
    for (int i = 0; i < pc; ++i) mom(i) = std::conj(iy[i]);

    auto eval_mult = [&](const Vec3& x, const Vec3& center, const VecXc& m) {
      std::vector<Complex> o(pc);
      sf::solid_singular_all(n_t, x - center, k, o.data());
      Complex acc{0.0, 0.0};
      for (int n = 0; n <= n_t; ++n)
        for (int mm = -n; mm <= n; ++mm)
          acc += (2.0 * n + 1.0) * o[sf::flatten(n, mm)] * m(sf::flatten(n, mm));
      return Complex{acc * iu * k / (4.0 * pi)};
    };
    fmm::MultipoleCoefficients src{yc, n_t, mom};
    fmm::MultipoleCoefficients moved = fmm::m2m_translate(src, yc + shift, ctx);
    double e_before = 0.0, e_after = 0.0, scale = 0.0;
    for (const Vec3& x : xs) {
      Complex exact = std::exp(iu * k * (x - y).norm()) / (4.0 * pi * (x - y).norm());
      e_before += std::norm(eval_mult(x, yc, mom) - exact);
      e_after += std::norm(eval_mult(x, yc + shift, moved.coeffs) - exact);
      scale += std::norm(exact);
    }
    e_before = std::sqrt(e_before);
    e_after = std::sqrt(e_after);
    if (e_after > std::max(10.0 * e_before, 1e-13 * std::sqrt(scale))) ++bad;

    // local recentering: coefficients about xc from a far source box
    Vec3 x0 = xs[0];
    Vec3 xc = x0 - 0.02 * unit();
    MatXc m2l = fmm::m2l_block(xc - yc, ctx, n_t, 0.0);
    VecXc local = m2l * mom;
    fmm::MultipoleCoefficients lsrc{xc, n_t, local};
    fmm::MultipoleCoefficients lmoved = fmm::l2l_translate(lsrc, xc + 0.01 * unit(), ctx);
    auto eval_local = [&](const Vec3& x, const Vec3& center, const VecXc& l) {
      std::vector<Complex> ix(pc);
      sf::solid_regular_all(n_t, x - center, k, ix.data());
      Complex acc{0.0, 0.0};
      for (int n = 0; n <= n_t; ++n)
        for (int mm = -n; mm <= n; ++mm)
          acc += (2.0 * n + 1.0) * std::conj(ix[sf::flatten(n, mm)]) * l(sf::flatten(n, mm));
      return Complex{acc * iu * k / (4.0 * pi)};
    };
    double l_before = 0.0, l_after = 0.0, l_scale = 0.0;
    for (int i = 0; i < 8; ++i) {
      Vec3 xeval = xc + 0.03 * unit();
      Complex exact = std::exp(iu * k * (xeval - y).norm()) / (4.0 * pi * (xeval - y).norm());
      l_before += std::norm(eval_local(xeval, xc, local) - exact);
      l_after += std::norm(eval_local(xeval, lmoved.center, lmoved.coeffs) - exact);
      l_scale += std::norm(exact);
    }
    if (std::sqrt(l_after) > std::max(10.0 * std::sqrt(l_before), 1e-13 * std::sqrt(l_scale)))
      ++bad;
  }

  // wigner 3j against the exact rational oracle for all j <= 6
  double w_err = 0.0;
  for (int j1 = 0; j1 <= 6; ++j1)
    for (int j2 = 0; j2 <= 6; ++j2)
      for (int j3 = 0; j3 <= 6; ++j3)
        for (int m1 = -j1; m1 <= j1; ++m1)
          for (int m2 = -j2; m2 <= j2; ++m2) {
            int m3 = -m1 - m2;
            if (std::abs(m3) > j3) continue;
            double ref = oracles::exact_wigner3j(j1, j2, j3, m1, m2, m3);
            w_err = std::max(w_err, std::abs(sf::wigner3j(j1, j2, j3, m1, m2, m3) - ref));
          }

  double bragg = postproc::bragg_frequency(343.0, 0.4, pi / 2, 1);
  bool bragg_exact = (bragg == 428.75);

  report(7, "appendix operator properties", bad == 0 && w_err < 1e-12 && bragg_exact,
         fmt("recentering violations %d/100 (0 allowed); wigner3j max |err| %.1e (< 1e-12); "
             "bragg %.10g %s",
             bad, w_err, bragg, bragg_exact ? "(exact)" : "(NOT exact)"));
}

void criterion8() {
  // barrier study: qualitative wall IL with the fmpbem, dense agreement on a
  // reduced wall
  auto wall_scene = [](int my, int mz) {
    scene::Scene sc;
    sc.geometry = scene::Scene::GeometryType::Wall;
    sc.wall_ly = 0.2;
    sc.wall_lz = 0.2;
    sc.wall_thickness = 0.1;
    sc.wall_div = 2;
    sc.lattice = Lattice{{1, my, mz}, {0.0, 0.2, 0.2}};
    sc.half_space = HalfSpace{2, 0.0, Complex{1.0, 0.0}};
    sc.n_t = 4;
    sc.tol = 1e-6;
    sc.restart = 200;
    sc.max_iter = 3000;
    return sc;
  };

  // full-scale wall: 10 m long, 2 m high, sources 1 m above the ground
  scene::Scene full = wall_scene(50, 10);
  full.sources.push_back({scene::Scene::Source::Kind::Monopole, Vec3{-5.0, 6.4, 1.0}, 2.0});
  full.sources.push_back({scene::Scene::Source::Kind::Monopole, Vec3{-5.0, 3.4, 1.0}, 1.0});
  full.il_grid = scene::Scene::IlGrid{Vec3{2.0, 1.0, 0.1}, Vec3{8.0, 8.8, 1.8}, {20, 20, 8}};

  SurfaceMesh cell = full.build_cell();
  SurfaceMesh mesh = geom::replicate_lattice(cell, full.lattice);
  IncidentField field = full.build_field();
  std::vector<Vec3> pts =
      postproc::grid_points(full.il_grid->lo, full.il_grid->hi, full.il_grid->counts);

  std::vector<double> freqs, ils;
  for (int i = 0; i <= 10; ++i) freqs.push_back(100.0 + 20.0 * i);
  bool above_10 = true;
  for (double f : freqs) {
    WaveContext ctx = air(f);
    fmm::FmmOperators ops =
        fmm::assemble_periodic_fmm(cell, full.lattice, ctx, {.n_t = 4}, full.half_space);
    VecXc rhs = assemble_rhs(mesh, ctx, field);
    VecXc p = solve([&](const VecXc& v) { return ops.matvec(v); }, rhs, 1e-6, 3000);
    VecXc p_inc(static_cast<Eigen::Index>(pts.size()));
    for (size_t i = 0; i < pts.size(); ++i)
      p_inc(static_cast<Eigen::Index>(i)) =
          kernels::incident_values(field, ctx, pts[i], Vec3{0, 0, 1}).first;
    VecXc p_tot = postproc::evaluate_field(mesh, p, ctx, field, pts, full.half_space);
    double il = postproc::insertion_loss(p_inc, p_tot);
    ils.push_back(il);
    if (il <= 10.0) above_10 = false;
  }
  // peak position and single-peak shape over the sweep
  size_t peak = std::max_element(ils.begin(), ils.end()) - ils.begin();
  bool peak_in_window = freqs[peak] >= 180.0 && freqs[peak] <= 240.0;
  int local_maxima = 0;
  for (size_t i = 1; i + 1 < ils.size(); ++i)
    if (ils[i] > ils[i - 1] && ils[i] > ils[i + 1]) ++local_maxima;
  bool single_peak = local_maxima == 1;

  // reduced wall: dense vs fmpbem agreement per frequency
  scene::Scene reduced = wall_scene(10, 4);
  reduced.sources.push_back({scene::Scene::Source::Kind::Monopole, Vec3{-1.5, 0.9, 0.4}, 1.0});
  SurfaceMesh rcell = reduced.build_cell();
  SurfaceMesh rmesh = geom::replicate_lattice(rcell, reduced.lattice);
  IncidentField rfield = reduced.build_field();
  std::vector<Vec3> rpts = postproc::grid_points(Vec3{0.6, 0.1, 0.1}, Vec3{2.4, 1.7, 0.7},
                                                 {6, 6, 4});
  double max_dil = 0.0;
  for (double f : freqs) {
    WaveContext ctx = air(f);
    auto dense = assemble_dense(rmesh, ctx, rfield, reduced.half_space);
    VecXc pd = solve([&](const VecXc& v) { return (dense.matrix * v).eval(); }, dense.rhs, 1e-8);
    fmm::FmmOperators ops =
        fmm::assemble_periodic_fmm(rcell, reduced.lattice, ctx, {.n_t = 4}, reduced.half_space);
    VecXc pf = solve([&](const VecXc& v) { return ops.matvec(v); }, dense.rhs, 1e-8);

    VecXc p_inc(static_cast<Eigen::Index>(rpts.size()));
    for (size_t i = 0; i < rpts.size(); ++i)
      p_inc(static_cast<Eigen::Index>(i)) =
          kernels::incident_values(rfield, ctx, rpts[i], Vec3{0, 0, 1}).first;
    VecXc td = postproc::evaluate_field(rmesh, pd, ctx, rfield, rpts, reduced.half_space);
    VecXc tf = postproc::evaluate_field(rmesh, pf, ctx, rfield, rpts, reduced.half_space);
    double il_d = postproc::insertion_loss(p_inc, td);
    double il_f = postproc::insertion_loss(p_inc, tf);
    max_dil = std::max(max_dil, std::abs(il_d - il_f));
  }

  bool pass = above_10 && peak_in_window && single_peak && max_dil < 0.1;
  report(8, "barrier study", pass,
         fmt("wall IL min %.1f dB (> 10), peak %.1f dB at %g Hz (in [180, 240], %d local max); "
             "reduced wall |dense - fmpbem| IL max %.3f dB (< 0.1)",
             *std::min_element(ils.begin(), ils.end()), ils[peak], freqs[peak], local_maxima,
             max_dil));
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  auto wanted = [&](int id) {
    return which.empty() || std::find(which.begin(), which.end(), id) != which.end();
  };

  using CriterionFn = void (*)();
  const CriterionFn criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                  criterion5, criterion6, criterion7, criterion8};
  for (int id = 1; id <= 8; ++id) {
    if (!wanted(id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[id - 1]();
    } catch (const std::exception& e) {
      report(id, "criterion threw", false, e.what());
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("        criterion %d runtime: %.1f s\n", id, dt);
  }
  std::printf("%s\n", failures ? "ACCEPTANCE: FAILURES PRESENT" : "ACCEPTANCE: ALL PASS");
  return failures ? 1 : 0;
}

// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fpbem/postproc.hpp"

#include <cmath>
#include <stdexcept>

#include "fpbem/specfun.hpp"

namespace fpbem::postproc {

using geom::Element;
using geom::HalfSpace;
using geom::SurfaceMesh;

namespace {

// representation-formula contribution of one BIE-oriented element
Complex element_contribution(const WaveContext& ctx, const Element& e, const Vec3& x,
                             Complex pressure) {
  double k = ctx.wavenumber;
  Complex ikb_p = iu * k * e.beta * pressure;
  std::vector<kernels::QuadPoint> pts;
  kernels::influence_quadrature(e, x, kernels::kRegularOrder, pts);
  Complex acc{0.0, 0.0};
  for (const auto& qp : pts) {
    Vec3 d = x - qp.y;
    double r = d.norm();
    Complex g = std::exp(iu * k * r) / (4.0 * pi * r);
    Complex dgdn = -(iu * k - 1.0 / r) * g * (d.dot(e.normal) / r);
    acc += qp.w * (-dgdn * pressure + g * ikb_p);
  }
  return acc;
}

}  // namespace

VecXc evaluate_field(const SurfaceMesh& mesh, const VecXc& solution, const WaveContext& ctx,
                     const kernels::IncidentField& field, const std::vector<Vec3>& points,
                     const std::optional<HalfSpace>& hs) {
  if (solution.size() != mesh.size())
    throw std::invalid_argument("evaluate_field: solution length mismatch");
  SurfaceMesh bie = assembly::bie_oriented(mesh);
  std::optional<SurfaceMesh> image;
  if (hs && hs->reflection != Complex{0.0, 0.0}) image = geom::mirror_mesh(bie, *hs);

  VecXc out(static_cast<Eigen::Index>(points.size()));
#pragma omp parallel for schedule(dynamic, 8)
  for (size_t ip = 0; ip < points.size(); ++ip) {
    const Vec3& x = points[ip];
    auto [p_inc, dpdn] = kernels::incident_values(field, ctx, x, Vec3{0, 0, 1});
    Complex acc = p_inc;
    for (int j = 0; j < bie.size(); ++j) {
      acc += element_contribution(ctx, bie.elements[j], x, solution(j));
      if (image)
        acc += hs->reflection * element_contribution(ctx, image->elements[j], x, solution(j));
    }
    out(static_cast<Eigen::Index>(ip)) = acc;
  }
  return out;
}

double insertion_loss(const VecXc& p_inc_values, const VecXc& p_values) {
  if (p_inc_values.size() != p_values.size() || p_inc_values.size() == 0)
    throw std::invalid_argument("insertion_loss: paired non-empty vectors required");
  double num = p_inc_values.cwiseAbs().sum();
  double den = p_values.cwiseAbs().sum();
  if (den == 0.0) throw std::domain_error("insertion_loss: vanishing total pressure");
  return 20.0 * std::log10(num / den);
}

double bragg_frequency(double sound_speed, double pitch, double theta, int order) {
  if (theta <= 0.0 || theta > 0.5 * pi)
    throw std::domain_error("bragg_frequency: incidence angle in (0, pi/2] required");
  if (pitch <= 0.0 || order < 1)
    throw std::domain_error("bragg_frequency: positive pitch and order required");
  return order * sound_speed / (2.0 * pitch * std::sin(theta));
}

Complex rigid_sphere_reference(const WaveContext& ctx, double radius, Complex p0,
                               const Vec3& point, const Vec3& direction) {
  double k = ctx.wavenumber;
  double ka = k * radius;
  double r = point.norm();
  if (r < radius * (1.0 - 1e-12))
    throw std::domain_error("rigid_sphere_reference: point inside the sphere");
  double kr = k * r;
  double ct = (r > 0.0) ? direction.normalized().dot(point / r) : 1.0;

  Complex acc{0.0, 0.0};
  double p_prev2 = 1.0, p_prev = ct;  // Legendre P_0, P_1
  Complex i_pow{1.0, 0.0};
  for (int n = 0; n <= 200; ++n) {
    double pn = (n == 0) ? 1.0 : (n == 1 ? ct : p_prev);
    double ja = specfun::sph_bessel_j(n, ka);
    Complex ha = specfun::sph_hankel1(n, ka);
    double japrime =
        (n == 0) ? -specfun::sph_bessel_j(1, ka)
                 : specfun::sph_bessel_j(n - 1, ka) - (n + 1.0) / ka * ja;
    Complex haprime = (n == 0) ? -specfun::sph_hankel1(1, ka)
                               : specfun::sph_hankel1(n - 1, ka) - (n + 1.0) / ka * ha;
    Complex jr{specfun::sph_bessel_j(n, kr), 0.0};
    Complex hr = specfun::sph_hankel1(n, kr);
    Complex term = i_pow * (2.0 * n + 1.0) * (jr - japrime / haprime * hr) * pn;
    acc += term;
    if (n >= 4 && std::abs(term) < 1e-12 * std::abs(acc)) return p0 * acc;
    i_pow *= iu;
    if (n >= 1) {
      double p_next = ((2.0 * n + 1.0) * ct * p_prev - n * p_prev2) / (n + 1.0);
      p_prev2 = p_prev;
      p_prev = p_next;
    }
  }
  throw std::runtime_error("rigid_sphere_reference: series did not converge in 200 terms");
}

std::vector<Vec3> grid_points(const Vec3& lo, const Vec3& hi, const std::array<int, 3>& counts) {
  for (int d = 0; d < 3; ++d)
    if (counts[d] < 1) throw std::invalid_argument("grid_points: counts must be >= 1");
  std::vector<Vec3> pts;
  pts.reserve(static_cast<size_t>(counts[0]) * counts[1] * counts[2]);
  for (int iz = 0; iz < counts[2]; ++iz)
    for (int iy = 0; iy < counts[1]; ++iy)
      for (int ix = 0; ix < counts[0]; ++ix) {
        Vec3 t;
        int idx[3] = {ix, iy, iz};
        for (int d = 0; d < 3; ++d)
          t[d] = (counts[d] == 1) ? 0.5 * (lo[d] + hi[d])
                                  : lo[d] + (hi[d] - lo[d]) * idx[d] / (counts[d] - 1.0);
        pts.push_back(t);
      }
  return pts;
}

}  // namespace fpbem::postproc

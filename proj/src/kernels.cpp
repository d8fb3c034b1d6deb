// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fpbem/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace fpbem::kernels {

namespace {

// (e^{ikr} - 1)/(4 pi r); series branch below kr = 0.5 to avoid cancellation
Complex single_layer_remainder(double k, double r) {
  double kr = k * r;
  if (kr >= 0.5) {
    return (std::exp(iu * kr) - 1.0) / (4.0 * pi * r);
  }
  Complex acc{0.0, 0.0};
  Complex ikr = iu * kr;
  Complex power{1.0, 0.0};
  double fact = 1.0;
  for (int j = 1; j <= 24; ++j) {
    fact *= j;
    acc += power / fact;  // (ikr)^{j-1} / j!
    power *= ikr;
  }
  return iu * k / (4.0 * pi) * acc;
}

// [e^{ikr}(1 - ikr) - 1 - (kr)^2/2] / (4 pi r^3): the smooth remainder of the
// self-plane hypersingular kernel after removing 1/(4 pi r^3) + k^2/(8 pi r)
Complex hyper_remainder(double k, double r) {
  double kr = k * r;
  if (kr >= 0.5) {
    Complex e = std::exp(iu * kr);
    return (e * (1.0 - iu * kr) - 1.0 - 0.5 * kr * kr) / (4.0 * pi * r * r * r);
  }
  // sum_{j>=3} (1-j)/j! (ik)^j r^{j-3}
  Complex acc{0.0, 0.0};
  Complex ik = iu * k;
  Complex power = ik * ik * ik;  // (ik)^3 r^0 term base
  double fact = 2.0;             // (j-1)! running
  for (int j = 3; j <= 26; ++j) {
    fact *= j;  // now j!
    acc += (1.0 - j) / fact * power;
    power *= ik * r;
  }
  return acc / (4.0 * pi);
}

struct EdgeGeometry {
  double h;        // signed in-plane distance from x to the edge line
  double lambda;   // ln((d_b + s_b)/(d_a + s_a))
  double fp_term;  // (s_b/d_b - s_a/d_a)/h
};

EdgeGeometry edge_geometry(const Vec3& x, const Vec3& n, const Vec3& a_pt, const Vec3& b_pt) {
  Vec3 a = a_pt - x, b = b_pt - x;
  Vec3 t = (b - a).normalized();
  double sa = a.dot(t), sb = b.dot(t);
  double da = a.norm(), db = b.norm();
  EdgeGeometry eg;
  eg.h = n.dot(a.cross(b)) / (b - a).norm();
  eg.lambda = std::log((db + sb) / (da + sa));
  eg.fp_term = (sb / db - sa / da) / eg.h;
  return eg;
}

// plane normal consistent with the corner loop, independent of the stored
// (possibly BIE-flipped) element normal
Vec3 loop_normal(const geom::Element& e) {
  return ((e.corners[2] - e.corners[0]).cross(e.corners[3] - e.corners[1])).normalized();
}

// polar (Duffy) rule over the triangle fan around the centroid; the radial
// coordinate absorbs one power of r, so 1/r integrands become smooth
void fan_quadrature(const geom::Element& e, const Vec3& ng, int order,
                    std::vector<QuadPoint>& out) {
  const QuadRule& rule = gauss_rule(order);
  const Vec3& x = e.centroid;
  size_t nq = rule.nodes.size();
  for (int edge = 0; edge < 4; ++edge) {
    Vec3 a = e.corners[edge] - x;
    Vec3 b = e.corners[(edge + 1) % 4] - x;
    double jac2 = a.cross(b).dot(ng);  // twice the signed triangle area
    for (size_t i = 0; i < nq; ++i) {
      double u = 0.5 * (rule.nodes[i] + 1.0);
      for (size_t j = 0; j < nq; ++j) {
        double v = 0.5 * (rule.nodes[j] + 1.0);
        Vec3 y = x + u * ((1.0 - v) * a + v * b);
        out.push_back({y, 0.25 * rule.weights[i] * rule.weights[j] * u * jac2});
      }
    }
  }
}

void tensor_points(const std::array<Vec3, 4>& c, int order, std::vector<QuadPoint>& out) {
  const QuadRule& rule = gauss_rule(order);
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double u = rule.nodes[i];
    for (size_t j = 0; j < rule.nodes.size(); ++j) {
      double v = rule.nodes[j];
      std::array<double, 4> n{0.25 * (1 - u) * (1 - v), 0.25 * (1 + u) * (1 - v),
                              0.25 * (1 + u) * (1 + v), 0.25 * (1 - u) * (1 + v)};
      Vec3 y = n[0] * c[0] + n[1] * c[1] + n[2] * c[2] + n[3] * c[3];
      Vec3 du = 0.25 * (-(1 - v) * c[0] + (1 - v) * c[1] + (1 + v) * c[2] - (1 + v) * c[3]);
      Vec3 dv = 0.25 * (-(1 - u) * c[0] - (1 + u) * c[1] + (1 + u) * c[2] + (1 - u) * c[3]);
      out.push_back({y, rule.weights[i] * rule.weights[j] * du.cross(dv).norm()});
    }
  }
}

void subdivide_points(const std::array<Vec3, 4>& c, const Vec3& x, int order, int depth,
                      std::vector<QuadPoint>& out) {
  Vec3 mid = 0.25 * (c[0] + c[1] + c[2] + c[3]);
  double diameter = std::max((c[2] - c[0]).norm(), (c[3] - c[1]).norm());
  if (depth <= 0 || (x - mid).norm() >= kNearFactor * diameter) {
    tensor_points(c, order, out);
    return;
  }
  Vec3 m01 = 0.5 * (c[0] + c[1]), m12 = 0.5 * (c[1] + c[2]);
  Vec3 m23 = 0.5 * (c[2] + c[3]), m30 = 0.5 * (c[3] + c[0]);
  subdivide_points({c[0], m01, mid, m30}, x, order, depth - 1, out);
  subdivide_points({m01, c[1], m12, mid}, x, order, depth - 1, out);
  subdivide_points({mid, m12, c[2], m23}, x, order, depth - 1, out);
  subdivide_points({m30, mid, m23, c[3]}, x, order, depth - 1, out);
}

}  // namespace

Complex green_full(const WaveContext& ctx, const Vec3& x, const Vec3& y) {
  double r = (x - y).norm();
  if (r <= 0.0) throw std::domain_error("green_full: coincident points");
  return std::exp(iu * ctx.wavenumber * r) / (4.0 * pi * r);
}

Complex green_half(const WaveContext& ctx, const Vec3& x, const Vec3& y,
                   const geom::HalfSpace& hs) {
  return green_full(ctx, x, y) + hs.reflection * green_full(ctx, x, geom::mirror_point(y, hs));
}

KernelValues kernel_derivatives(const WaveContext& ctx, const Vec3& x, const Vec3& y,
                                const Vec3& n_x, const Vec3& n_y) {
  Vec3 d = x - y;
  double r = d.norm();
  if (r <= 0.0) throw std::domain_error("kernel_derivatives: coincident points");
  double k = ctx.wavenumber;
  Vec3 rh = d / r;
  Complex g = std::exp(iu * k * r) / (4.0 * pi * r);
  Complex q = iu * k - 1.0 / r;  // dG/dr = q G
  double cx = rh.dot(n_x), cy = rh.dot(n_y);
  KernelValues kv;
  kv.g = g;
  kv.dg_dny = -q * g * cy;
  kv.dg_dnx = q * g * cx;
  kv.d2g = g * (k * k + 3.0 * iu * k / r - 3.0 / (r * r)) * cx * cy -
           g * q / r * n_x.dot(n_y);
  return kv;
}

const QuadRule& gauss_rule(int order) {
  static const std::vector<QuadRule> rules = [] {
    std::vector<QuadRule> all(17);
    for (int n = 1; n <= 16; ++n) {
      QuadRule& r = all[n];
      r.nodes.resize(n);
      r.weights.resize(n);
      for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
          double p0 = 1.0, p1 = 0.0;
          for (int j = 0; j < n; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1);
          }
          pp = n * (x * p0 - p1) / (x * x - 1.0);
          double dx = p0 / pp;
          x -= dx;
          if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
      }
    }
    return all;
  }();
  if (order < 1 || order > 16) throw std::invalid_argument("gauss_rule: order in [1,16]");
  return rules[order];
}

void element_quadrature(const geom::Element& elem, int order, std::vector<QuadPoint>& out) {
  tensor_points(elem.corners, order, out);
}

void element_quadrature_near(const geom::Element& elem, const Vec3& x, int order,
                             std::vector<QuadPoint>& out) {
  subdivide_points(elem.corners, x, order, kMaxSubdivision, out);
}

void influence_quadrature(const geom::Element& elem, const Vec3& x, int order,
                          std::vector<QuadPoint>& out) {
  if ((x - elem.centroid).norm() < kNearFactor * elem.diameter) {
    element_quadrature_near(elem, x, order, out);
  } else {
    element_quadrature(elem, order, out);
  }
}

InfluencePair element_influence(const WaveContext& ctx, const geom::Element& elem,
                                const Vec3& x, const Vec3& n_x) {
  std::vector<QuadPoint> pts;
  pts.reserve(64);
  influence_quadrature(elem, x, kRegularOrder, pts);
  InfluencePair out;
  for (const QuadPoint& qp : pts) {
    KernelValues kv = kernel_derivatives(ctx, x, qp.y, n_x, elem.normal);
    out.h += qp.w * (kv.dg_dny + ctx.alpha * kv.d2g);
    out.g += qp.w * (kv.g + ctx.alpha * kv.dg_dnx);
  }
  return out;
}

InfluencePair element_influence_self(const WaveContext& ctx, const geom::Element& elem) {
  const Vec3& x = elem.centroid;
  double k = ctx.wavenumber;
  Vec3 ng = loop_normal(elem);

  // closed-form static parts over the planar polygon
  double sl0 = 0.0;      // int 1/(4 pi r)
  double hyper0 = 0.0;   // f.p. int 1/(4 pi r^3)
  for (int edge = 0; edge < 4; ++edge) {
    EdgeGeometry eg = edge_geometry(x, ng, elem.corners[edge], elem.corners[(edge + 1) % 4]);
    sl0 += eg.h * eg.lambda;
    hyper0 -= eg.fp_term;
  }
  sl0 /= 4.0 * pi;
  hyper0 /= 4.0 * pi;

  // smooth remainders over the corner fan; in the element plane the kernel
  // reduces to its radial part, dG/dn terms vanish identically
  Complex g_rem{0.0, 0.0}, h_rem{0.0, 0.0};
  std::vector<QuadPoint> pts;
  pts.reserve(4 * kSelfOrder * kSelfOrder);
  fan_quadrature(elem, ng, kSelfOrder, pts);
  for (const QuadPoint& qp : pts) {
    double r = (qp.y - x).norm();
    g_rem += qp.w * single_layer_remainder(k, r);
    h_rem += qp.w * hyper_remainder(k, r);
  }

  InfluencePair out;
  out.g = sl0 + g_rem;
  // d2G/dn dn on the self plane integrates to 1/(4 pi r^3) + k^2/(8 pi r) + remainder
  out.h = ctx.alpha * (hyper0 + 0.5 * k * k * sl0 + h_rem);
  return out;
}

IncidentField IncidentField::plane_wave(const Vec3& direction, Complex p0) {
  IncidentField f;
  f.add_plane_wave(direction, p0);
  return f;
}

IncidentField IncidentField::monopole(const Vec3& position, Complex strength) {
  IncidentField f;
  f.add_monopole(position, strength);
  return f;
}

void IncidentField::add_plane_wave(const Vec3& direction, Complex p0) {
  double n = direction.norm();
  if (n <= 0.0) throw std::invalid_argument("plane wave: zero direction");
  sources.push_back({Source::Kind::PlaneWave, direction / n, p0});
}

void IncidentField::add_monopole(const Vec3& position, Complex strength) {
  sources.push_back({Source::Kind::Monopole, position, strength});
}

namespace {

void accumulate_source(const IncidentField::Source& s, double k, const Vec3& x, const Vec3& n_x,
                       Complex& p, Complex& dpdn) {
  if (s.kind == IncidentField::Source::Kind::PlaneWave) {
    Complex e = s.amplitude * std::exp(iu * k * s.vec.dot(x));
    p += e;
    dpdn += iu * k * s.vec.dot(n_x) * e;
  } else {
    Vec3 d = x - s.vec;
    double r = d.norm();
    if (r <= 0.0) throw std::domain_error("incident_values: point coincides with a monopole");
    Complex e = s.amplitude * std::exp(iu * k * r) / r;
    p += e;
    dpdn += (iu * k - 1.0 / r) * e * (d.dot(n_x) / r);
  }
}

}  // namespace

std::pair<Complex, Complex> incident_values(const IncidentField& field, const WaveContext& ctx,
                                            const Vec3& x, const Vec3& n_x) {
  Complex p{0.0, 0.0}, dpdn{0.0, 0.0};
  for (const auto& s : field.sources) {
    accumulate_source(s, ctx.wavenumber, x, n_x, p, dpdn);
    if (field.half_space && field.half_space->reflection != Complex{0.0, 0.0}) {
      IncidentField::Source img = s;
      img.amplitude *= field.half_space->reflection;
      if (s.kind == IncidentField::Source::Kind::PlaneWave) {
        // reflected plane wave: mirrored direction with the plane-offset phase
        img.vec[field.half_space->axis] = -img.vec[field.half_space->axis];
        img.amplitude *= std::exp(iu * ctx.wavenumber * 2.0 * field.half_space->offset *
                                  s.vec[field.half_space->axis]);
      } else {
        img.vec = geom::mirror_point(s.vec, *field.half_space);
      }
      accumulate_source(img, ctx.wavenumber, x, n_x, p, dpdn);
    }
  }
  return {p, dpdn};
}

}  // namespace fpbem::kernels

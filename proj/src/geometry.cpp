// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fpbem/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fpbem::geom {

Element make_element(const std::array<Vec3, 4>& c, Complex beta) {
  Element e;
  e.corners = c;
  Vec3 n1 = (c[1] - c[0]).cross(c[2] - c[0]);
  Vec3 n2 = (c[2] - c[0]).cross(c[3] - c[0]);
  double a1 = 0.5 * n1.norm();
  double a2 = 0.5 * n2.norm();
  e.area = a1 + a2;
  if (e.area <= 0.0) throw std::runtime_error("make_element: degenerate element");
  e.normal = (n1 + n2).normalized();
  e.centroid = (a1 * (c[0] + c[1] + c[2]) + a2 * (c[0] + c[2] + c[3])) / (3.0 * e.area);
  e.diameter = std::max((c[2] - c[0]).norm(), (c[3] - c[1]).norm());
  e.beta = beta;
  return e;
}

double SurfaceMesh::total_area() const {
  double a = 0.0;
  for (const Element& e : elements) a += e.area;
  return a;
}

void SurfaceMesh::bounding_box(Vec3& lo, Vec3& hi) const {
  lo = Vec3::Constant(std::numeric_limits<double>::max());
  hi = Vec3::Constant(std::numeric_limits<double>::lowest());
  for (const Element& e : elements)
    for (const Vec3& c : e.corners) {
      lo = lo.cwiseMin(c);
      hi = hi.cwiseMax(c);
    }
}

Vec3 SurfaceMesh::extent() const {
  Vec3 lo, hi;
  bounding_box(lo, hi);
  return hi - lo;
}

void SurfaceMesh::validate(double tol) const {
  for (size_t i = 0; i < elements.size(); ++i) {
    const Element& e = elements[i];
    if (std::abs(e.normal.norm() - 1.0) > tol)
      throw std::runtime_error("mesh: non-unit normal at element " + std::to_string(i));
    if (!(e.area > 0.0))
      throw std::runtime_error("mesh: non-positive area at element " + std::to_string(i));
    double scale = std::max(1.0, e.diameter);
    for (const Vec3& c : e.corners)
      if (std::abs(e.normal.dot(c - e.centroid)) > tol * scale)
        throw std::runtime_error("mesh: corner off the element plane at element " +
                                 std::to_string(i));
  }
}

SurfaceMesh generate_sphere_mesh(double radius, int refinement, Complex beta) {
  if (radius <= 0.0 || refinement < 1)
    throw std::invalid_argument("generate_sphere_mesh: radius > 0 and refinement >= 1 required");
  SurfaceMesh mesh;
  mesh.elements.reserve(6 * refinement * refinement);

  // axes per cube face: (u, v, w) with the face at w = +1 or -1
  struct Face {
    int u, v, w;
    double sign;
  };
  const std::array<Face, 6> faces{{{0, 1, 2, 1.0},
                                   {1, 0, 2, -1.0},
                                   {2, 0, 1, 1.0},
                                   {0, 2, 1, -1.0},
                                   {1, 2, 0, 1.0},
                                   {2, 1, 0, -1.0}}};
  // face u/v order above is chosen so the corner loop is outward-oriented
  for (const Face& f : faces) {
    for (int i = 0; i < refinement; ++i) {
      for (int j = 0; j < refinement; ++j) {
        auto grid = [&](int a, int b) {
          Vec3 p;
          p[f.u] = -1.0 + 2.0 * a / refinement;
          p[f.v] = -1.0 + 2.0 * b / refinement;
          p[f.w] = f.sign;
          return (radius * p.normalized()).eval();
        };
        std::array<Vec3, 4> c{grid(i, j), grid(i + 1, j), grid(i + 1, j + 1), grid(i, j + 1)};
        // flatten the projected corners onto the panel's centroid plane
        Vec3 mid = 0.25 * (c[0] + c[1] + c[2] + c[3]);
        Vec3 n = ((c[2] - c[0]).cross(c[3] - c[1])).normalized();
        if (n.dot(mid) < 0.0) {
          std::swap(c[1], c[3]);
          n = -n;
        }
        for (Vec3& p : c) p -= n * n.dot(p - mid);
        mesh.elements.push_back(make_element(c, beta));
      }
    }
  }
  return mesh;
}

SurfaceMesh generate_wall_cell(double ly, double lz, double thickness, int div, Complex beta) {
  if (ly <= 0.0 || lz <= 0.0 || thickness <= 0.0 || div < 1)
    throw std::invalid_argument("generate_wall_cell: positive dimensions and div >= 1 required");
  SurfaceMesh mesh;
  mesh.elements.reserve(2 * div * div);
  double dy = ly / div, dz = lz / div;
  for (int layer = 0; layer < 2; ++layer) {
    double x = (layer == 0) ? -0.5 * thickness : 0.5 * thickness;
    for (int j = 0; j < div; ++j) {
      for (int i = 0; i < div; ++i) {
        double y0 = -0.5 * ly + i * dy, y1 = y0 + dy;
        double z0 = j * dz, z1 = z0 + dz;
        std::array<Vec3, 4> c;
        if (layer == 0) {
          // front layer, normal -x
          c = {Vec3{x, y0, z0}, Vec3{x, y0, z1}, Vec3{x, y1, z1}, Vec3{x, y1, z0}};
        } else {
          c = {Vec3{x, y0, z0}, Vec3{x, y1, z0}, Vec3{x, y1, z1}, Vec3{x, y0, z1}};
        }
        mesh.elements.push_back(make_element(c, beta));
      }
    }
  }
  return mesh;
}

SurfaceMesh replicate_lattice(const SurfaceMesh& cell, const Lattice& lattice) {
  for (int d = 0; d < 3; ++d)
    if (lattice.counts[d] < 1)
      throw std::invalid_argument("replicate_lattice: counts must be >= 1");
  SurfaceMesh mesh;
  mesh.elements.reserve(static_cast<size_t>(lattice.cell_count()) * cell.elements.size());
  for (int iz = 0; iz < lattice.counts[2]; ++iz)
    for (int iy = 0; iy < lattice.counts[1]; ++iy)
      for (int ix = 0; ix < lattice.counts[0]; ++ix) {
        Vec3 shift = lattice.cell_shift(ix, iy, iz);
        for (const Element& e : cell.elements) {
          Element t = e;
          for (Vec3& c : t.corners) c += shift;
          t.centroid += shift;
          mesh.elements.push_back(t);
        }
      }
  return mesh;
}

Vec3 mirror_point(const Vec3& p, const HalfSpace& hs) {
  Vec3 q = p;
  q[hs.axis] = 2.0 * hs.offset - p[hs.axis];
  return q;
}

SurfaceMesh mirror_mesh(const SurfaceMesh& mesh, const HalfSpace& hs) {
  SurfaceMesh out;
  out.elements.reserve(mesh.elements.size());
  for (const Element& e : mesh.elements) {
    std::array<Vec3, 4> c{mirror_point(e.corners[0], hs), mirror_point(e.corners[3], hs),
                          mirror_point(e.corners[2], hs), mirror_point(e.corners[1], hs)};
    Element m = make_element(c, e.beta);
    // the stored orientation follows the source mesh even when its normals
    // were flipped relative to the corner loop
    Vec3 n = e.normal;
    n[hs.axis] = -n[hs.axis];
    m.normal = n;
    out.elements.push_back(m);
  }
  return out;
}

BoxGrid make_box_grid(const SurfaceMesh& cell, const Lattice& lattice) {
  Vec3 lo, hi;
  cell.bounding_box(lo, hi);
  Vec3 size;
  for (int d = 0; d < 3; ++d)
    size[d] = (lattice.counts[d] > 1) ? lattice.pitches[d] : (hi[d] - lo[d]);
  BoxGrid grid;
  grid.base_center = 0.5 * (lo + hi);
  grid.lattice = lattice;
  grid.radius = 0.5 * size.norm();
  return grid;
}

bool admissible(const Vec3& a, const Vec3& b, double r) {
  if (r <= 0.0) throw std::invalid_argument("admissible: r > 0 required");
  return (a - b).norm() >= 2.0 * r;
}

SurfaceMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_mesh: cannot open " + path);
  int count = 0;
  if (!(in >> count) || count < 0) throw std::runtime_error("load_mesh: bad header in " + path);
  SurfaceMesh mesh;
  mesh.elements.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::array<Vec3, 4> c;
    double br, bi;
    for (int j = 0; j < 4; ++j)
      if (!(in >> c[j].x() >> c[j].y() >> c[j].z()))
        throw std::runtime_error("load_mesh: truncated element " + std::to_string(i));
    if (!(in >> br >> bi))
      throw std::runtime_error("load_mesh: truncated admittance at element " + std::to_string(i));
    mesh.elements.push_back(make_element(c, Complex{br, bi}));
  }
  return mesh;
}

void save_mesh(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_mesh: cannot open " + path);
  out << mesh.size() << "\n";
  char buf[64];
  for (const Element& e : mesh.elements) {
    std::string line;
    for (const Vec3& c : e.corners)
      for (int d = 0; d < 3; ++d) {
        std::snprintf(buf, sizeof(buf), "%.17g ", c[d]);
        line += buf;
      }
    std::snprintf(buf, sizeof(buf), "%.17g %.17g", e.beta.real(), e.beta.imag());
    line += buf;
    out << line << "\n";
  }
}

}  // namespace fpbem::geom

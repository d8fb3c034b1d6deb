// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FPBEM_GEOMETRY_HPP
#define FPBEM_GEOMETRY_HPP

#include <array>
#include <string>
#include <vector>

#include "fpbem/types.hpp"

namespace fpbem::geom {

/// Flat quadrilateral boundary element with a constant collocation unknown.
/// Corner order is counter-clockwise when viewed from the normal side.
struct Element {
  std::array<Vec3, 4> corners;
  Vec3 centroid;   // area centroid, lies in the element plane
  Vec3 normal;     // unit, right-hand rule from the corner order
  double area;     // m^2
  double diameter; // longest diagonal, m
  Complex beta;    // normalized surface admittance; 0 = rigid
};

/// Builds the derived fields from corners; corners must be coplanar.
Element make_element(const std::array<Vec3, 4>& corners, Complex beta);

struct SurfaceMesh {
  std::vector<Element> elements;

  int size() const { return static_cast<int>(elements.size()); }
  double total_area() const;
  void bounding_box(Vec3& lo, Vec3& hi) const;
  Vec3 extent() const;

  /// Throws std::runtime_error on the first violated mesh invariant
  /// (non-unit normal, non-positive area, off-plane corner or centroid).
  void validate(double tol = 1e-12) const;
};

/// Cube-projected sphere of 6*refinement^2 flat panels centred at the origin.
/// Corners are projected radially onto the sphere, then flattened onto each
/// panel's centroid plane so every element is exactly planar.
SurfaceMesh generate_sphere_mesh(double radius, int refinement, Complex beta = Complex{0, 0});

/// Two parallel square element layers modelling a wall slice: layer size
/// ly x lz with div x div elements each, thickness t along x, spanning
/// y in [-ly/2, ly/2] and z in [0, lz]. Normals face away from the slab.
SurfaceMesh generate_wall_cell(double ly, double lz, double thickness, int div,
                               Complex beta = Complex{0, 0});

/// Axis-aligned finite lattice. Element ordering after replication is
/// cell-major with the x index fastest, then y, then z.
struct Lattice {
  std::array<int, 3> counts{1, 1, 1};
  std::array<double, 3> pitches{0.0, 0.0, 0.0};

  int cell_count() const { return counts[0] * counts[1] * counts[2]; }
  int cell_index(int ix, int iy, int iz) const {
    return ix + counts[0] * (iy + counts[1] * iz);
  }
  Vec3 cell_shift(int ix, int iy, int iz) const {
    return Vec3{ix * pitches[0], iy * pitches[1], iz * pitches[2]};
  }
};

SurfaceMesh replicate_lattice(const SurfaceMesh& cell, const Lattice& lattice);

/// Axis-aligned mirror plane with a constant complex reflection coefficient.
struct HalfSpace {
  int axis = 2;          // 0:x, 1:y, 2:z
  double offset = 0.0;   // plane coordinate along the axis
  Complex reflection{0.0, 0.0};
};

Vec3 mirror_point(const Vec3& p, const HalfSpace& hs);

/// Mirrored copy with reversed corner order, so normals are the mirrored
/// normals and the element indexing matches the source mesh.
SurfaceMesh mirror_mesh(const SurfaceMesh& mesh, const HalfSpace& hs);

/// One box per unit cell. The box size along a periodic direction is the
/// pitch, along a non-periodic direction the cell extent; r is half the
/// box diagonal. This reproduces the 9-block near field of square 2D cells.
struct BoxGrid {
  Vec3 base_center;  // center of the cell (0,0,0) box
  Lattice lattice;
  double radius;     // characteristic box size r

  Vec3 center(int ix, int iy, int iz) const {
    return base_center + lattice.cell_shift(ix, iy, iz);
  }
};

BoxGrid make_box_grid(const SurfaceMesh& cell, const Lattice& lattice);

/// Far-field test |a - b| >= 2r, inclusive.
bool admissible(const Vec3& center_a, const Vec3& center_b, double r);

/// Plain-text mesh exchange: a header line with the element count, then one
/// line per element holding 4 corners and beta (14 numbers).
SurfaceMesh load_mesh(const std::string& path);
void save_mesh(const SurfaceMesh& mesh, const std::string& path);

}  // namespace fpbem::geom

#endif  // FPBEM_GEOMETRY_HPP

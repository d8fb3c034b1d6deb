// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FPBEM_KERNELS_HPP
#define FPBEM_KERNELS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "fpbem/geometry.hpp"
#include "fpbem/types.hpp"

namespace fpbem::kernels {

// quadrature defaults shared by assembly and field evaluation
inline constexpr int kRegularOrder = 6;
inline constexpr int kSelfOrder = 8;
inline constexpr double kNearFactor = 3.0;
inline constexpr int kMaxSubdivision = 6;

/// Full-space kernel e^{ikr}/(4 pi r); r = 0 is a singularity error.
Complex green_full(const WaveContext& ctx, const Vec3& x, const Vec3& y);

/// Half-space kernel: full-space part plus the reflection-weighted image.
Complex green_half(const WaveContext& ctx, const Vec3& x, const Vec3& y,
                   const geom::HalfSpace& hs);

struct KernelValues {
  Complex g;        // G
  Complex dg_dny;   // dG/dn(y)
  Complex dg_dnx;   // dG/dn(x)
  Complex d2g;      // d2G/dn(x)dn(y)
};

/// Closed-form kernel derivatives along the given unit normals.
KernelValues kernel_derivatives(const WaveContext& ctx, const Vec3& x, const Vec3& y,
                                const Vec3& n_x, const Vec3& n_y);

/// Combined-equation influence coefficients of one constant element:
///   h = int [dG/dn_y + alpha d2G/dn_x dn_y] dGamma(y)
///   g = int [G + alpha dG/dn_x] dGamma(y)
/// The element's stored normal is n_y. Quadrature switches automatically to
/// 4-fold adaptive subdivision when x is closer than kNearFactor diameters.
struct InfluencePair {
  Complex h{0.0, 0.0};
  Complex g{0.0, 0.0};
};
InfluencePair element_influence(const WaveContext& ctx, const geom::Element& elem,
                                const Vec3& x, const Vec3& n_x);

/// Self-term path: x is the element's own centroid and n_x its normal.
/// Static parts use closed-form planar potentials (single layer and the
/// finite-part hypersingular integral); the smooth oscillatory remainders
/// use polar (Duffy) quadrature over the corner fan.
InfluencePair element_influence_self(const WaveContext& ctx, const geom::Element& elem);

/// Superposition of plane waves and monopoles, with optional mirror images.
struct IncidentField {
  struct Source {
    enum class Kind { PlaneWave, Monopole } kind;
    Vec3 vec;           // unit direction (plane wave) or position (monopole)
    Complex amplitude;  // p0 in Pa, or monopole strength in Pa at 1 m
  };
  std::vector<Source> sources;
  std::optional<geom::HalfSpace> half_space;

  static IncidentField plane_wave(const Vec3& direction, Complex p0);
  static IncidentField monopole(const Vec3& position, Complex strength);
  void add_plane_wave(const Vec3& direction, Complex p0);
  void add_monopole(const Vec3& position, Complex strength);
};

/// (p_inc, dp_inc/dn) at x; image contributions are added when a half space
/// is attached to the field.
std::pair<Complex, Complex> incident_values(const IncidentField& field, const WaveContext& ctx,
                                            const Vec3& x, const Vec3& n_x);

/// 1D Gauss-Legendre rule on [-1, 1]; order up to 16.
struct QuadRule {
  std::vector<double> nodes, weights;
};
const QuadRule& gauss_rule(int order);

struct QuadPoint {
  Vec3 y;
  double w;  // includes the surface Jacobian
};

/// Tensor-product points of the flat bilinear patch.
void element_quadrature(const geom::Element& elem, int order, std::vector<QuadPoint>& out);

/// Adaptive variant: parameter-space quartering until every leaf is at least
/// kNearFactor leaf-diameters away from x (or the depth cap is reached).
void element_quadrature_near(const geom::Element& elem, const Vec3& x, int order,
                             std::vector<QuadPoint>& out);

/// Quadrature for the whole influence integral of one element as seen from x:
/// regular tensor rule, or the adaptive rule when x is near.
void influence_quadrature(const geom::Element& elem, const Vec3& x, int order,
                          std::vector<QuadPoint>& out);

}  // namespace fpbem::kernels

#endif  // FPBEM_KERNELS_HPP

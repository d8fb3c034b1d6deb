// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FPBEM_POSTPROC_HPP
#define FPBEM_POSTPROC_HPP

#include "fpbem/assembly.hpp"

namespace fpbem::postproc {

/// Exterior total pressure by the representation formula
///   p(x) = p_inc(x) - int dG/dn_y p dGamma + int G (ik beta p) dGamma,
/// with the half-space kernel when a mirror plane is present. Points closer
/// than one element diameter to the surface fall back to the adaptive
/// near-singular quadrature.
VecXc evaluate_field(const geom::SurfaceMesh& mesh, const VecXc& solution,
                     const WaveContext& ctx, const kernels::IncidentField& field,
                     const std::vector<Vec3>& points,
                     const std::optional<geom::HalfSpace>& hs = std::nullopt);

/// IL = 20 log10( sum |p_inc| / sum |p| ) over paired observation values.
double insertion_loss(const VecXc& p_inc_values, const VecXc& p_values);

/// f = n c / (2 d sin(theta)).
double bragg_frequency(double sound_speed, double pitch, double theta, int order);

/// Total pressure of a plane wave (direction d, amplitude p0) scattered by a
/// rigid sphere of the given radius centred at the origin; partial-wave
/// series truncated at 1e-12 relative term size.
Complex rigid_sphere_reference(const WaveContext& ctx, double radius, Complex p0,
                               const Vec3& point, const Vec3& direction);

/// Uniform rectangular observation grid spanning [lo, hi].
std::vector<Vec3> grid_points(const Vec3& lo, const Vec3& hi, const std::array<int, 3>& counts);

}  // namespace fpbem::postproc

#endif  // FPBEM_POSTPROC_HPP

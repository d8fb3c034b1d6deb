// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FPBEM_FMM_HPP
#define FPBEM_FMM_HPP

#include "fpbem/specfun.hpp"
#include "fpbem/structured.hpp"

namespace fpbem::fmm {

struct FmmConfig {
  int n_t = 4;       // far-field truncation degree
  int n_t_near = 6;  // reserved for the standalone recentering translations
};

struct MultipoleCoefficients {
  Vec3 center;
  int n_t = 0;
  VecXc coeffs;  // (n_t+1)^2 entries, flattened harmonic layout
};

/// Shared P2M operator of one unit cell about its box center: row (n,m) and
/// column j hold int_j [d conj(I_n^m)(y-c)/dn(y) - ik beta_j conj(I_n^m)(y-c)] dGamma.
/// The mesh must be BIE-oriented (assembly::bie_oriented).
MatXc p2m_matrix(const geom::SurfaceMesh& cell_bie, const WaveContext& ctx, int n_t,
                 const Vec3& center);

/// Shared L2P operator: row i, column (n,m) hold
/// (ik/4pi)(2n+1) [conj(I_n^m)(x_i-c) + alpha d conj(I_n^m)/dn(x_i)].
MatXc l2p_matrix(const geom::SurfaceMesh& cell_bie, const WaveContext& ctx, int n_t,
                 const Vec3& center);

/// Multipole-to-local bank for a box pair separated by delta = x_c - y_c.
/// Throws std::domain_error when |delta| < 2 box_radius.
MatXc m2l_block(const Vec3& delta, const WaveContext& ctx, int n_t, double box_radius);

/// Moment recentering (M2M) and local recentering (L2L).
MultipoleCoefficients m2m_translate(const MultipoleCoefficients& src, const Vec3& new_center,
                                    const WaveContext& ctx);
MultipoleCoefficients l2l_translate(const MultipoleCoefficients& src, const Vec3& new_center,
                                    const WaveContext& ctx);

/// Action of an axis-aligned mirror on moment vectors: the moments of the
/// mirrored cell about the mirrored center are D times the original moments.
MatXc mirror_parity_map(int n_t, int axis);

/// Assembled periodic single-level fast multipole operators. The near field
/// S is a banded block Toeplitz matrix of exact influence blocks, K is the
/// block Toeplitz M2L bank kept only through its circulant spectrum, and
/// U0/V0 are shared by all cells. A half space whose mirror axis is periodic
/// adds the block Hankel image pair (S_hat, K_hat); a mirror parallel to all
/// periodic directions folds the image terms into S and K instead.
struct FmmOperators {
  geom::BoxGrid grid;
  FmmConfig config;
  int n_dof = 0;

  assembly::BlockToeplitzMatrix near_field;  // S
  MatXc u0;                                  // n_dof x (n_t+1)^2
  MatXc v0;                                  // (n_t+1)^2 x n_dof
  structured::CirculantSpectrum k_spectrum;  // spectrum of K
  int k_nonzero_offsets = 0;

  std::optional<assembly::BlockHankelMatrix> near_field_image;        // S_hat
  std::optional<structured::CirculantSpectrum> k_image_spectrum;      // spectrum of K_hat P
  int mirrored_level = -1;

  VecXc matvec(const VecXc& p) const;
  size_t stored_bytes() const;
};

FmmOperators assemble_periodic_fmm(const geom::SurfaceMesh& cell, const geom::Lattice& lattice,
                                   const WaveContext& ctx, const FmmConfig& cfg,
                                   const std::optional<geom::HalfSpace>& hs = std::nullopt);

}  // namespace fpbem::fmm

#endif  // FPBEM_FMM_HPP

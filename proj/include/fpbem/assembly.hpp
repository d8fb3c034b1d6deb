// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FPBEM_ASSEMBLY_HPP
#define FPBEM_ASSEMBLY_HPP

#include <optional>

#include "fpbem/kernels.hpp"

namespace fpbem::assembly {

// Meshes carry body-outward normals; the boundary integral equations are
// written with normals pointing out of the acoustic domain. bie_oriented
// performs that flip exactly once, and every assembly path works on the
// flipped orientation.
geom::SurfaceMesh bie_oriented(const geom::SurfaceMesh& mesh);

struct DenseSystem {
  MatXc matrix;
  VecXc rhs;
};

/// Multilevel block Toeplitz matrix over an axis-aligned lattice. A block is
/// stored per offset tuple o = target_cell - source_cell (componentwise, each
/// offset in [1-M, M-1]); absent offsets act as zero blocks, which makes the
/// same container serve both the full system matrix and the banded near field.
struct BlockToeplitzMatrix {
  std::array<int, 3> counts{1, 1, 1};
  int block_dim = 0;
  std::vector<std::array<int, 3>> offsets;
  std::vector<MatXc> blocks;

  int level_size(int d) const { return 2 * counts[d] - 1; }
  int cell_count() const { return counts[0] * counts[1] * counts[2]; }
  bool full() const;

  const MatXc* block_at(const std::array<int, 3>& offset) const;
  void set_block(const std::array<int, 3>& offset, MatXc block);

  /// Direct product, linear in the number of stored offsets.
  VecXc matvec(const VecXc& p) const;
  MatXc expand_dense() const;
  size_t stored_bytes() const;

 private:
  std::vector<int> index_;  // offset tuple -> slot, -1 when absent
  int offset_slot(const std::array<int, 3>& offset) const;
  void ensure_index();
};

/// Block Hankel along exactly one (mirrored) level, block Toeplitz along the
/// others. The mirrored level is indexed by the cell-index sum in [0, 2M-2].
struct BlockHankelMatrix {
  std::array<int, 3> counts{1, 1, 1};
  int block_dim = 0;
  int mirrored_level = 2;
  std::vector<std::array<int, 3>> indices;
  std::vector<MatXc> blocks;

  const MatXc* block_at(const std::array<int, 3>& idx) const;
  void set_block(const std::array<int, 3>& idx, MatXc block);

  VecXc matvec(const VecXc& p) const;
  MatXc expand_dense() const;
  size_t stored_bytes() const;

 private:
  std::vector<int> index_;
  int slot(const std::array<int, 3>& idx) const;
  void ensure_index();
};

struct PeriodicSystem {
  BlockToeplitzMatrix toeplitz;
  std::optional<BlockHankelMatrix> hankel;

  size_t stored_bytes() const {
    return toeplitz.stored_bytes() + (hankel ? hankel->stored_bytes() : 0);
  }
};

/// One combined-equation matrix entry of a BIE-oriented source element seen
/// from collocation point x with BIE normal n_x. self engages the singular
/// path and the 1/2 jump terms.
Complex bm_entry(const WaveContext& ctx, const geom::Element& source_bie, const Vec3& x,
                 const Vec3& n_x, bool self);

/// Cell-to-cell interaction block: rows are collocation points of target_bie
/// shifted by target_shift, columns the elements of source_bie in place.
MatXc interaction_block(const WaveContext& ctx, const geom::SurfaceMesh& target_bie,
                        const Vec3& target_shift, const geom::SurfaceMesh& source_bie,
                        bool self_terms);

/// Dense reference assembly; throws when the matrix would exceed the cap.
DenseSystem assemble_dense(const geom::SurfaceMesh& mesh, const WaveContext& ctx,
                           const kernels::IncidentField& field,
                           const std::optional<geom::HalfSpace>& hs = std::nullopt,
                           double mem_cap_gib = 8.0);

/// Unique-block assembly of the periodic system. For a half space whose
/// mirror axis is periodic the image part is returned as the separate block
/// Hankel summand; otherwise the image folds into the Toeplitz blocks.
PeriodicSystem assemble_periodic_toeplitz(const geom::SurfaceMesh& cell,
                                          const geom::Lattice& lattice, const WaveContext& ctx,
                                          const std::optional<geom::HalfSpace>& hs = std::nullopt);

/// Right-hand side p_inc + alpha dp_inc/dn at the collocation points.
VecXc assemble_rhs(const geom::SurfaceMesh& mesh, const WaveContext& ctx,
                   const kernels::IncidentField& field);

}  // namespace fpbem::assembly

#endif  // FPBEM_ASSEMBLY_HPP

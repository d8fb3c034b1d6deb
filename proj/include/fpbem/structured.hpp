// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FPBEM_STRUCTURED_HPP
#define FPBEM_STRUCTURED_HPP

#include <memory>

#include "fpbem/assembly.hpp"

namespace fpbem::structured {

/// Embedding order of one level: column index q in [0, 2M-2] maps to the
/// Toeplitz offset q for q < M and q - (2M-1) otherwise.
inline int embed_offset(int q, int m) { return q < m ? q : q - (2 * m - 1); }

/// First block column of the circulant embedding, blocks in row-major
/// (z, y, x) order over the embedded sizes; absent offsets give zero blocks.
std::vector<MatXc> circulant_embed(const assembly::BlockToeplitzMatrix& t);

/// Block-diagonal DFT image of the circulant embedding. After construction
/// the Toeplitz blocks are no longer needed; products run as zero-pad, FFT,
/// per-frequency block multiply, inverse FFT, truncate.
class CirculantSpectrum {
 public:
  explicit CirculantSpectrum(const assembly::BlockToeplitzMatrix& t);
  ~CirculantSpectrum();
  CirculantSpectrum(CirculantSpectrum&&) noexcept;
  CirculantSpectrum& operator=(CirculantSpectrum&&) noexcept;
  CirculantSpectrum(const CirculantSpectrum&) = delete;
  CirculantSpectrum& operator=(const CirculantSpectrum&) = delete;

  /// p is cell-major (x fastest) with block_dim entries per cell.
  VecXc matvec(const VecXc& p) const;

  const std::array<int, 3>& counts() const { return counts_; }
  int block_dim() const { return block_dim_; }
  size_t stored_bytes() const;

  /// Raw spectrum block at a frequency multi-index (row-major z, y, x).
  Eigen::Map<const MatXc> lambda(int qx, int qy, int qz) const;

 private:
  struct Plans;
  std::array<int, 3> counts_{1, 1, 1};
  std::array<int, 3> sizes_{1, 1, 1};
  int block_dim_ = 0;
  std::vector<Complex> lambda_;
  std::unique_ptr<Plans> plans_;
};

/// Column-reversal permutation along one lattice level, applied blockwise to
/// a cell-major vector. Involution; turns block Hankel indexing into block
/// Toeplitz indexing.
VecXc mirror_permute(const std::array<int, 3>& counts, int level, int block_dim, const VecXc& p);

/// Spectrum of the column-permuted Hankel matrix H P (a Toeplitz matrix).
CirculantSpectrum hankel_spectrum(const assembly::BlockHankelMatrix& h);

/// H p computed as (H P)(P p) through the permuted spectrum.
VecXc hankel_matvec(const CirculantSpectrum& permuted, int mirrored_level, const VecXc& p);

}  // namespace fpbem::structured

#endif  // FPBEM_STRUCTURED_HPP

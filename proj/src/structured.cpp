// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fpbem/structured.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace fpbem::structured {

namespace {

// FFTW planning is not thread safe; execution through the new-array
// interface is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// smallest 7-smooth integer >= n; prime embedding lengths would force the
// planner onto slow generic codelets
int fft_friendly(int n) {
  for (int m = n;; ++m) {
    int r = m;
    for (int f : {2, 3, 5, 7})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

}  // namespace

struct CirculantSpectrum::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plans() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

std::vector<MatXc> circulant_embed(const assembly::BlockToeplitzMatrix& t) {
  std::array<int, 3> l{2 * t.counts[0] - 1, 2 * t.counts[1] - 1, 2 * t.counts[2] - 1};
  std::vector<MatXc> column;
  column.reserve(static_cast<size_t>(l[0]) * l[1] * l[2]);
  for (int qz = 0; qz < l[2]; ++qz)
    for (int qy = 0; qy < l[1]; ++qy)
      for (int qx = 0; qx < l[0]; ++qx) {
        std::array<int, 3> o{embed_offset(qx, t.counts[0]), embed_offset(qy, t.counts[1]),
                             embed_offset(qz, t.counts[2])};
        const MatXc* blk = t.block_at(o);
        column.push_back(blk ? *blk : MatXc::Zero(t.block_dim, t.block_dim));
      }
  return column;
}

CirculantSpectrum::CirculantSpectrum(const assembly::BlockToeplitzMatrix& t)
    : counts_(t.counts), block_dim_(t.block_dim) {
  // embedding length per level: at least 2M-1, rounded up to an FFT-friendly
  // size (the padded slots stay zero and drop out after truncation)
  for (int d = 0; d < 3; ++d)
    sizes_[d] = counts_[d] == 1 ? 1 : fft_friendly(2 * counts_[d] - 1);
  const size_t q_total = static_cast<size_t>(sizes_[0]) * sizes_[1] * sizes_[2];
  const int b = block_dim_;
  const size_t b2 = static_cast<size_t>(b) * b;

  auto offset_of = [&](int q, int d) {
    if (q < counts_[d]) return q;
    int o = q - sizes_[d];
    return (o > -counts_[d]) ? o : counts_[d];  // padded slot: out-of-range marker
  };
  lambda_.assign(q_total * b2, Complex{0.0, 0.0});
  size_t q = 0;
  for (int qz = 0; qz < sizes_[2]; ++qz)
    for (int qy = 0; qy < sizes_[1]; ++qy)
      for (int qx = 0; qx < sizes_[0]; ++qx, ++q) {
        std::array<int, 3> o{offset_of(qx, 0), offset_of(qy, 1), offset_of(qz, 2)};
        const MatXc* blk = t.block_at(o);
        if (blk) Eigen::Map<MatXc>(lambda_.data() + q * b2, b, b) = *blk;
      }

  // lattice DFT across all b^2 block entries, then per-field plans
  int n[3] = {sizes_[2], sizes_[1], sizes_[0]};
  plans_ = std::make_unique<Plans>();
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_plan spec = fftw_plan_many_dft(3, n, static_cast<int>(b2), as_fftw(lambda_.data()),
                                        nullptr, static_cast<int>(b2), 1, as_fftw(lambda_.data()),
                                        nullptr, static_cast<int>(b2), 1, FFTW_FORWARD,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_execute(spec);
    fftw_destroy_plan(spec);

    std::vector<Complex> dummy(q_total * b);
    plans_->forward = fftw_plan_many_dft(3, n, b, as_fftw(dummy.data()), nullptr, b, 1,
                                         as_fftw(dummy.data()), nullptr, b, 1, FFTW_FORWARD,
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_->backward = fftw_plan_many_dft(3, n, b, as_fftw(dummy.data()), nullptr, b, 1,
                                          as_fftw(dummy.data()), nullptr, b, 1, FFTW_BACKWARD,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
}

CirculantSpectrum::~CirculantSpectrum() = default;
CirculantSpectrum::CirculantSpectrum(CirculantSpectrum&&) noexcept = default;
CirculantSpectrum& CirculantSpectrum::operator=(CirculantSpectrum&&) noexcept = default;

Eigen::Map<const MatXc> CirculantSpectrum::lambda(int qx, int qy, int qz) const {
  const size_t b2 = static_cast<size_t>(block_dim_) * block_dim_;
  size_t q = (static_cast<size_t>(qz) * sizes_[1] + qy) * sizes_[0] + qx;
  return Eigen::Map<const MatXc>(lambda_.data() + q * b2, block_dim_, block_dim_);
}

size_t CirculantSpectrum::stored_bytes() const { return lambda_.size() * sizeof(Complex); }

VecXc CirculantSpectrum::matvec(const VecXc& p) const {
  const int b = block_dim_;
  const auto& m = counts_;
  const auto& l = sizes_;
  const Eigen::Index n_cells = static_cast<Eigen::Index>(m[0]) * m[1] * m[2];
  if (p.size() != n_cells * b)
    throw std::invalid_argument("circulant matvec: dimension mismatch");

  const size_t q_total = static_cast<size_t>(l[0]) * l[1] * l[2];
  std::vector<Complex> field(q_total * b, Complex{0.0, 0.0});
  std::vector<Complex> image(q_total * b);

  // zero-pad the cell-major vector into the embedded lattice
  for (int iz = 0; iz < m[2]; ++iz)
    for (int iy = 0; iy < m[1]; ++iy)
      for (int ix = 0; ix < m[0]; ++ix) {
        size_t q = (static_cast<size_t>(iz) * l[1] + iy) * l[0] + ix;
        Eigen::Index cell = ix + static_cast<Eigen::Index>(m[0]) * (iy + m[1] * iz);
        std::copy_n(p.data() + cell * b, b, field.data() + q * b);
      }

  fftw_execute_dft(plans_->forward, as_fftw(field.data()), as_fftw(field.data()));

  const size_t b2 = static_cast<size_t>(b) * b;
#pragma omp parallel for schedule(static)
  for (long long q = 0; q < static_cast<long long>(q_total); ++q) {
    Eigen::Map<const MatXc> blk(lambda_.data() + q * b2, b, b);
    Eigen::Map<const VecXc> in(field.data() + q * b, b);
    Eigen::Map<VecXc> out(image.data() + q * b, b);
    out.noalias() = blk * in;
  }

  fftw_execute_dft(plans_->backward, as_fftw(image.data()), as_fftw(image.data()));

  VecXc y(n_cells * b);
  double scale = 1.0 / static_cast<double>(q_total);
  for (int iz = 0; iz < m[2]; ++iz)
    for (int iy = 0; iy < m[1]; ++iy)
      for (int ix = 0; ix < m[0]; ++ix) {
        size_t q = (static_cast<size_t>(iz) * l[1] + iy) * l[0] + ix;
        Eigen::Index cell = ix + static_cast<Eigen::Index>(m[0]) * (iy + m[1] * iz);
        for (int c = 0; c < b; ++c) y(cell * b + c) = scale * image[q * b + c];
      }
  return y;
}

VecXc mirror_permute(const std::array<int, 3>& counts, int level, int block_dim, const VecXc& p) {
  const auto& m = counts;
  if (p.size() != static_cast<Eigen::Index>(m[0]) * m[1] * m[2] * block_dim)
    throw std::invalid_argument("mirror_permute: dimension mismatch");
  VecXc out(p.size());
  for (int iz = 0; iz < m[2]; ++iz)
    for (int iy = 0; iy < m[1]; ++iy)
      for (int ix = 0; ix < m[0]; ++ix) {
        int src[3] = {ix, iy, iz};
        src[level] = m[level] - 1 - src[level];
        Eigen::Index from = src[0] + static_cast<Eigen::Index>(m[0]) * (src[1] + m[1] * src[2]);
        Eigen::Index to = ix + static_cast<Eigen::Index>(m[0]) * (iy + m[1] * iz);
        out.segment(to * block_dim, block_dim) = p.segment(from * block_dim, block_dim);
      }
  return out;
}

CirculantSpectrum hankel_spectrum(const assembly::BlockHankelMatrix& h) {
  // H P is block Toeplitz along the mirrored level: offset o maps to the
  // anti-diagonal index o + M - 1
  assembly::BlockToeplitzMatrix t;
  t.counts = h.counts;
  t.block_dim = h.block_dim;
  const int a = h.mirrored_level;
  for (size_t s = 0; s < h.indices.size(); ++s) {
    std::array<int, 3> o = h.indices[s];
    o[a] = h.indices[s][a] - (h.counts[a] - 1);
    t.set_block(o, h.blocks[s]);
  }
  return CirculantSpectrum(t);
}

VecXc hankel_matvec(const CirculantSpectrum& permuted, int mirrored_level, const VecXc& p) {
  return permuted.matvec(
      mirror_permute(permuted.counts(), mirrored_level, permuted.block_dim(), p));
}

}  // namespace fpbem::structured

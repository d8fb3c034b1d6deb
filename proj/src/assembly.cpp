// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fpbem/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace fpbem::assembly {

using geom::Element;
using geom::HalfSpace;
using geom::Lattice;
using geom::SurfaceMesh;
using kernels::InfluencePair;

geom::SurfaceMesh bie_oriented(const SurfaceMesh& mesh) {
  SurfaceMesh out = mesh;
  for (Element& e : out.elements) e.normal = -e.normal;
  return out;
}

// ---------------------------------------------------------------------------
// BlockToeplitzMatrix

void BlockToeplitzMatrix::ensure_index() {
  size_t total = static_cast<size_t>(level_size(0)) * level_size(1) * level_size(2);
  if (index_.size() != total) index_.assign(total, -1);
}

int BlockToeplitzMatrix::offset_slot(const std::array<int, 3>& o) const {
  int ix = o[0] + counts[0] - 1;
  int iy = o[1] + counts[1] - 1;
  int iz = o[2] + counts[2] - 1;
  return (iz * level_size(1) + iy) * level_size(0) + ix;
}

bool BlockToeplitzMatrix::full() const {
  return static_cast<int>(offsets.size()) == level_size(0) * level_size(1) * level_size(2);
}

const MatXc* BlockToeplitzMatrix::block_at(const std::array<int, 3>& o) const {
  if (index_.empty()) return nullptr;
  for (int d = 0; d < 3; ++d)
    if (o[d] <= -counts[d] || o[d] >= counts[d]) return nullptr;
  int slot = index_[offset_slot(o)];
  return slot < 0 ? nullptr : &blocks[slot];
}

void BlockToeplitzMatrix::set_block(const std::array<int, 3>& o, MatXc block) {
  ensure_index();
  int& slot = index_[offset_slot(o)];
  if (slot >= 0) {
    blocks[slot] = std::move(block);
    return;
  }
  slot = static_cast<int>(blocks.size());
  offsets.push_back(o);
  blocks.push_back(std::move(block));
}

VecXc BlockToeplitzMatrix::matvec(const VecXc& p) const {
  const int b = block_dim;
  if (p.size() != static_cast<Eigen::Index>(cell_count()) * b)
    throw std::invalid_argument("block toeplitz matvec: dimension mismatch");
  VecXc y = VecXc::Zero(p.size());
  const auto& m = counts;
#pragma omp parallel for collapse(3) schedule(static)
  for (int tz = 0; tz < m[2]; ++tz)
    for (int ty = 0; ty < m[1]; ++ty)
      for (int tx = 0; tx < m[0]; ++tx) {
        int t = tx + m[0] * (ty + m[1] * tz);
        auto out = y.segment(static_cast<Eigen::Index>(t) * b, b);
        for (size_t s = 0; s < offsets.size(); ++s) {
          int sx = tx - offsets[s][0];
          int sy = ty - offsets[s][1];
          int sz = tz - offsets[s][2];
          if (sx < 0 || sx >= m[0] || sy < 0 || sy >= m[1] || sz < 0 || sz >= m[2]) continue;
          int src = sx + m[0] * (sy + m[1] * sz);
          out.noalias() += blocks[s] * p.segment(static_cast<Eigen::Index>(src) * b, b);
        }
      }
  return y;
}

MatXc BlockToeplitzMatrix::expand_dense() const {
  const int b = block_dim;
  const int n = cell_count();
  MatXc a = MatXc::Zero(static_cast<Eigen::Index>(n) * b, static_cast<Eigen::Index>(n) * b);
  const auto& m = counts;
  for (int tz = 0; tz < m[2]; ++tz)
    for (int ty = 0; ty < m[1]; ++ty)
      for (int tx = 0; tx < m[0]; ++tx)
        for (int sz = 0; sz < m[2]; ++sz)
          for (int sy = 0; sy < m[1]; ++sy)
            for (int sx = 0; sx < m[0]; ++sx) {
              const MatXc* blk = block_at({tx - sx, ty - sy, tz - sz});
              if (!blk) continue;
              int t = tx + m[0] * (ty + m[1] * tz);
              int s = sx + m[0] * (sy + m[1] * sz);
              a.block(static_cast<Eigen::Index>(t) * b, static_cast<Eigen::Index>(s) * b, b, b) =
                  *blk;
            }
  return a;
}

size_t BlockToeplitzMatrix::stored_bytes() const {
  size_t bytes = 0;
  for (const MatXc& blk : blocks) bytes += sizeof(Complex) * blk.size();
  return bytes;
}

// ---------------------------------------------------------------------------
// BlockHankelMatrix

void BlockHankelMatrix::ensure_index() {
  size_t total = 1;
  for (int d = 0; d < 3; ++d) total *= static_cast<size_t>(2 * counts[d] - 1);
  if (index_.size() != total) index_.assign(total, -1);
}

int BlockHankelMatrix::slot(const std::array<int, 3>& idx) const {
  // mirrored level: sum index in [0, 2M-2]; others shifted offsets
  int c[3];
  for (int d = 0; d < 3; ++d) c[d] = (d == mirrored_level) ? idx[d] : idx[d] + counts[d] - 1;
  return (c[2] * (2 * counts[1] - 1) + c[1]) * (2 * counts[0] - 1) + c[0];
}

const MatXc* BlockHankelMatrix::block_at(const std::array<int, 3>& idx) const {
  if (index_.empty()) return nullptr;
  for (int d = 0; d < 3; ++d) {
    int lo = (d == mirrored_level) ? 0 : 1 - counts[d];
    int hi = (d == mirrored_level) ? 2 * counts[d] - 2 : counts[d] - 1;
    if (idx[d] < lo || idx[d] > hi) return nullptr;
  }
  int s = index_[slot(idx)];
  return s < 0 ? nullptr : &blocks[s];
}

void BlockHankelMatrix::set_block(const std::array<int, 3>& idx, MatXc block) {
  ensure_index();
  int& s = index_[slot(idx)];
  if (s >= 0) {
    blocks[s] = std::move(block);
    return;
  }
  s = static_cast<int>(blocks.size());
  indices.push_back(idx);
  blocks.push_back(std::move(block));
}

VecXc BlockHankelMatrix::matvec(const VecXc& p) const {
  const int b = block_dim;
  const auto& m = counts;
  if (p.size() != static_cast<Eigen::Index>(m[0]) * m[1] * m[2] * b)
    throw std::invalid_argument("block hankel matvec: dimension mismatch");
  VecXc y = VecXc::Zero(p.size());
#pragma omp parallel for collapse(3) schedule(static)
  for (int tz = 0; tz < m[2]; ++tz)
    for (int ty = 0; ty < m[1]; ++ty)
      for (int tx = 0; tx < m[0]; ++tx) {
        int t[3] = {tx, ty, tz};
        int tcell = tx + m[0] * (ty + m[1] * tz);
        auto out = y.segment(static_cast<Eigen::Index>(tcell) * b, b);
        for (size_t s = 0; s < indices.size(); ++s) {
          int src[3];
          bool ok = true;
          for (int d = 0; d < 3 && ok; ++d) {
            src[d] = (d == mirrored_level) ? indices[s][d] - t[d] : t[d] - indices[s][d];
            ok = src[d] >= 0 && src[d] < m[d];
          }
          if (!ok) continue;
          int scell = src[0] + m[0] * (src[1] + m[1] * src[2]);
          out.noalias() += blocks[s] * p.segment(static_cast<Eigen::Index>(scell) * b, b);
        }
      }
  return y;
}

MatXc BlockHankelMatrix::expand_dense() const {
  const int b = block_dim;
  const auto& m = counts;
  const int n = m[0] * m[1] * m[2];
  MatXc a = MatXc::Zero(static_cast<Eigen::Index>(n) * b, static_cast<Eigen::Index>(n) * b);
  for (int tz = 0; tz < m[2]; ++tz)
    for (int ty = 0; ty < m[1]; ++ty)
      for (int tx = 0; tx < m[0]; ++tx)
        for (int sz = 0; sz < m[2]; ++sz)
          for (int sy = 0; sy < m[1]; ++sy)
            for (int sx = 0; sx < m[0]; ++sx) {
              int t[3] = {tx, ty, tz}, s[3] = {sx, sy, sz};
              std::array<int, 3> idx;
              for (int d = 0; d < 3; ++d)
                idx[d] = (d == mirrored_level) ? t[d] + s[d] : t[d] - s[d];
              const MatXc* blk = block_at(idx);
              if (!blk) continue;
              int tc = tx + m[0] * (ty + m[1] * tz);
              int sc = sx + m[0] * (sy + m[1] * sz);
              a.block(static_cast<Eigen::Index>(tc) * b, static_cast<Eigen::Index>(sc) * b, b, b) =
                  *blk;
            }
  return a;
}

size_t BlockHankelMatrix::stored_bytes() const {
  size_t bytes = 0;
  for (const MatXc& blk : blocks) bytes += sizeof(Complex) * blk.size();
  return bytes;
}

// ---------------------------------------------------------------------------
// assembly

Complex bm_entry(const WaveContext& ctx, const Element& source_bie, const Vec3& x,
                 const Vec3& n_x, bool self) {
  Complex ikb = iu * ctx.wavenumber * source_bie.beta;
  if (self) {
    InfluencePair s = kernels::element_influence_self(ctx, source_bie);
    return 0.5 + 0.5 * ctx.alpha * ikb + s.h - ikb * s.g;
  }
  InfluencePair p = kernels::element_influence(ctx, source_bie, x, n_x);
  return p.h - ikb * p.g;
}

MatXc interaction_block(const WaveContext& ctx, const SurfaceMesh& target_bie,
                        const Vec3& target_shift, const SurfaceMesh& source_bie,
                        bool self_terms) {
  const int rows = target_bie.size();
  const int cols = source_bie.size();
  MatXc block(rows, cols);
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < rows; ++i) {
    Vec3 x = target_bie.elements[i].centroid + target_shift;
    const Vec3& n_x = target_bie.elements[i].normal;
    for (int j = 0; j < cols; ++j)
      block(i, j) = bm_entry(ctx, source_bie.elements[j], x, n_x, self_terms && i == j);
  }
  return block;
}

VecXc assemble_rhs(const SurfaceMesh& mesh, const WaveContext& ctx,
                   const kernels::IncidentField& field) {
  VecXc rhs(mesh.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < mesh.size(); ++i) {
    const Element& e = mesh.elements[i];
    auto [p, dpdn] = kernels::incident_values(field, ctx, e.centroid, (-e.normal).eval());
    rhs(i) = p + ctx.alpha * dpdn;
  }
  return rhs;
}

DenseSystem assemble_dense(const SurfaceMesh& mesh, const WaveContext& ctx,
                           const kernels::IncidentField& field,
                           const std::optional<HalfSpace>& hs, double mem_cap_gib) {
  const int n = mesh.size();
  double bytes = 16.0 * static_cast<double>(n) * n;
  if (bytes > mem_cap_gib * (1ull << 30))
    throw std::runtime_error("assemble_dense: matrix would exceed the memory cap");

  SurfaceMesh bie = bie_oriented(mesh);
  DenseSystem sys;
  sys.matrix = interaction_block(ctx, bie, Vec3::Zero(), bie, true);
  if (hs && hs->reflection != Complex{0.0, 0.0}) {
    SurfaceMesh image = geom::mirror_mesh(bie, *hs);
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < n; ++i) {
      Vec3 x = bie.elements[i].centroid;
      const Vec3& n_x = bie.elements[i].normal;
      for (int j = 0; j < n; ++j)
        sys.matrix(i, j) += hs->reflection * bm_entry(ctx, image.elements[j], x, n_x, false);
    }
  }
  sys.rhs = assemble_rhs(mesh, ctx, field);
  return sys;
}

PeriodicSystem assemble_periodic_toeplitz(const SurfaceMesh& cell, const Lattice& lattice,
                                          const WaveContext& ctx,
                                          const std::optional<HalfSpace>& hs) {
  for (int d = 0; d < 3; ++d)
    if (lattice.counts[d] < 1)
      throw std::invalid_argument("assemble_periodic_toeplitz: counts must be >= 1");

  SurfaceMesh bie = bie_oriented(cell);
  const bool with_image = hs && hs->reflection != Complex{0.0, 0.0};
  const bool split = with_image && lattice.counts[hs->axis] > 1;
  const bool folded_image = with_image && !split;

  PeriodicSystem sys;
  BlockToeplitzMatrix& t = sys.toeplitz;
  t.counts = lattice.counts;
  t.block_dim = cell.size();

  std::optional<SurfaceMesh> image_cell;
  if (with_image) image_cell = geom::mirror_mesh(bie, *hs);

  const auto& m = lattice.counts;
  for (int oz = 1 - m[2]; oz <= m[2] - 1; ++oz)
    for (int oy = 1 - m[1]; oy <= m[1] - 1; ++oy)
      for (int ox = 1 - m[0]; ox <= m[0] - 1; ++ox) {
        Vec3 shift = lattice.cell_shift(ox, oy, oz);
        bool self = ox == 0 && oy == 0 && oz == 0;
        MatXc block = interaction_block(ctx, bie, shift, bie, self);
        if (folded_image)
          block += hs->reflection * interaction_block(ctx, bie, shift, *image_cell, false);
        t.set_block({ox, oy, oz}, std::move(block));
      }

  if (split) {
    BlockHankelMatrix h;
    h.counts = lattice.counts;
    h.block_dim = cell.size();
    h.mirrored_level = hs->axis;
    int a = hs->axis;
    int lo[3], hi[3];
    for (int d = 0; d < 3; ++d) {
      lo[d] = (d == a) ? 0 : 1 - m[d];
      hi[d] = (d == a) ? 2 * m[d] - 2 : m[d] - 1;
    }
    for (int i2 = lo[2]; i2 <= hi[2]; ++i2)
      for (int i1 = lo[1]; i1 <= hi[1]; ++i1)
        for (int i0 = lo[0]; i0 <= hi[0]; ++i0) {
          std::array<int, 3> idx{i0, i1, i2};
          // representative pair along the mirrored level: target + source = idx[a]
          int ta = std::min(idx[a], m[a] - 1);
          int sa = idx[a] - ta;
          std::array<int, 3> tgt{idx[0], idx[1], idx[2]};
          std::array<int, 3> src{0, 0, 0};
          tgt[a] = ta;
          src[a] = sa;
          Vec3 tshift = lattice.cell_shift(tgt[0], tgt[1], tgt[2]);
          Vec3 sshift = lattice.cell_shift(src[0], src[1], src[2]);
          SurfaceMesh src_cell = bie;
          for (Element& e : src_cell.elements) {
            for (Vec3& c : e.corners) c += sshift;
            e.centroid += sshift;
          }
          SurfaceMesh src_image = geom::mirror_mesh(src_cell, *hs);
          MatXc block =
              hs->reflection * interaction_block(ctx, bie, tshift, src_image, false);
          h.set_block(idx, std::move(block));
        }
    sys.hankel = std::move(h);
  }
  return sys;
}

}  // namespace fpbem::assembly

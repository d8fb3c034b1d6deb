// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fpbem/fmm.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace fpbem::fmm {

namespace sf = fpbem::specfun;
using assembly::BlockHankelMatrix;
using assembly::BlockToeplitzMatrix;
using geom::Element;
using geom::HalfSpace;
using geom::Lattice;
using geom::SurfaceMesh;

MatXc p2m_matrix(const SurfaceMesh& cell_bie, const WaveContext& ctx, int n_t,
                 const Vec3& center) {
  const int p = sf::coeff_count(n_t);
  const int n = cell_bie.size();
  const double k = ctx.wavenumber;
  MatXc v0 = MatXc::Zero(p, n);
#pragma omp parallel for schedule(dynamic, 4)
  for (int j = 0; j < n; ++j) {
    const Element& e = cell_bie.elements[j];
    Complex ikb = iu * k * e.beta;
    std::vector<kernels::QuadPoint> pts;
    kernels::element_quadrature(e, kernels::kRegularOrder, pts);
    for (const auto& qp : pts) {
      sf::SolidRegularGradients g = sf::solid_regular_gradients(n_t, qp.y - center, k);
      for (int idx = 0; idx < p; ++idx) {
        Complex dn = g.ddx[idx] * e.normal.x() + g.ddy[idx] * e.normal.y() +
                     g.ddz[idx] * e.normal.z();
        v0(idx, j) += qp.w * (std::conj(dn) - ikb * std::conj(g.value[idx]));
      }
    }
  }
  return v0;
}

MatXc l2p_matrix(const SurfaceMesh& cell_bie, const WaveContext& ctx, int n_t,
                 const Vec3& center) {
  const int p = sf::coeff_count(n_t);
  const int n = cell_bie.size();
  const double k = ctx.wavenumber;
  MatXc u0(n, p);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const Element& e = cell_bie.elements[i];
    sf::SolidRegularGradients g = sf::solid_regular_gradients(n_t, e.centroid - center, k);
    for (int idx = 0; idx < p; ++idx) {
      auto [deg, ord] = sf::unflatten(idx);
      Complex dn =
          g.ddx[idx] * e.normal.x() + g.ddy[idx] * e.normal.y() + g.ddz[idx] * e.normal.z();
      u0(i, idx) = iu * k / (4.0 * pi) * (2.0 * deg + 1.0) *
                   (std::conj(g.value[idx]) + ctx.alpha * std::conj(dn));
    }
  }
  return u0;
}

namespace {

const sf::TranslationTable& shared_table(int n_t) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<sf::TranslationTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n_t];
  if (!slot) slot = std::make_unique<sf::TranslationTable>(n_t);
  return *slot;
}

}  // namespace

MatXc m2l_block(const Vec3& delta, const WaveContext& ctx, int n_t, double box_radius) {
  if (delta.norm() < 2.0 * box_radius)
    throw std::domain_error("m2l_block: box pair violates the admissibility criterion");
  return shared_table(n_t).m2l(delta, ctx.wavenumber);
}

MultipoleCoefficients m2m_translate(const MultipoleCoefficients& src, const Vec3& new_center,
                                    const WaveContext& ctx) {
  MultipoleCoefficients out;
  out.center = new_center;
  out.n_t = src.n_t;
  out.coeffs =
      shared_table(src.n_t).regular_shift(new_center - src.center, ctx.wavenumber) * src.coeffs;
  return out;
}

MultipoleCoefficients l2l_translate(const MultipoleCoefficients& src, const Vec3& new_center,
                                    const WaveContext& ctx) {
  MultipoleCoefficients out;
  out.center = new_center;
  out.n_t = src.n_t;
  out.coeffs = shared_table(src.n_t)
                   .regular_shift(new_center - src.center, ctx.wavenumber)
                   .conjugate() *
               src.coeffs;
  return out;
}

MatXc mirror_parity_map(int n_t, int axis) {
  const int p = sf::coeff_count(n_t);
  MatXc d = MatXc::Zero(p, p);
  for (int n = 0; n <= n_t; ++n)
    for (int m = -n; m <= n; ++m) {
      int row = sf::flatten(n, m);
      if (axis == 2) {
        d(row, row) = ((n + m) & 1) ? -1.0 : 1.0;
      } else if (axis == 0) {
        d(row, sf::flatten(n, -m)) = (m & 1) ? -1.0 : 1.0;
      } else {
        d(row, sf::flatten(n, -m)) = 1.0;
      }
    }
  return d;
}

FmmOperators assemble_periodic_fmm(const SurfaceMesh& cell, const Lattice& lattice,
                                   const WaveContext& ctx, const FmmConfig& cfg,
                                   const std::optional<HalfSpace>& hs) {
  if (cfg.n_t < 0 || cfg.n_t > 30)
    throw std::invalid_argument("assemble_periodic_fmm: n_t in [0, 30] required");
  const SurfaceMesh bie = assembly::bie_oriented(cell);
  const geom::BoxGrid grid = geom::make_box_grid(cell, lattice);
  const double k = ctx.wavenumber;
  const auto& m = lattice.counts;
  const sf::TranslationTable& table = shared_table(cfg.n_t);

  const bool with_image = hs && hs->reflection != Complex{0.0, 0.0};
  const bool split = with_image && lattice.counts[hs->axis] > 1;
  const bool folded = with_image && !split;

  std::optional<SurfaceMesh> image_cell;
  MatXc parity;
  if (with_image) {
    image_cell = geom::mirror_mesh(bie, *hs);
    parity = mirror_parity_map(cfg.n_t, hs->axis);
  }

  // near field S and the M2L bank share complementary offset supports
  BlockToeplitzMatrix s;
  s.counts = m;
  s.block_dim = cell.size();
  BlockToeplitzMatrix kbank;
  kbank.counts = m;
  kbank.block_dim = sf::coeff_count(cfg.n_t);
  int k_count = 0;

  for (int oz = 1 - m[2]; oz <= m[2] - 1; ++oz)
    for (int oy = 1 - m[1]; oy <= m[1] - 1; ++oy)
      for (int ox = 1 - m[0]; ox <= m[0] - 1; ++ox) {
        Vec3 delta = lattice.cell_shift(ox, oy, oz);
        bool self = ox == 0 && oy == 0 && oz == 0;
        if (geom::admissible(grid.center(ox, oy, oz), grid.base_center, grid.radius)) {
          MatXc blk = table.m2l(delta, k);
          if (folded) {
            // image boxes of far cells are at least as far as the cells
            Vec3 delta_img = grid.center(ox, oy, oz) -
                             geom::mirror_point(grid.base_center, *hs);
            blk += hs->reflection * table.m2l(delta_img, k) * parity;
          }
          kbank.set_block({ox, oy, oz}, std::move(blk));
          ++k_count;
        } else {
          MatXc blk = assembly::interaction_block(ctx, bie, delta, bie, self);
          if (folded) {
            blk += hs->reflection *
                   assembly::interaction_block(ctx, bie, delta, *image_cell, false);
          }
          s.set_block({ox, oy, oz}, std::move(blk));
        }
      }

  FmmOperators ops{
      .grid = grid,
      .config = cfg,
      .n_dof = cell.size(),
      .near_field = std::move(s),
      .u0 = l2p_matrix(bie, ctx, cfg.n_t, grid.base_center),
      .v0 = p2m_matrix(bie, ctx, cfg.n_t, grid.base_center),
      .k_spectrum = structured::CirculantSpectrum(kbank),
      .k_nonzero_offsets = k_count,
  };

  if (split) {
    const int a = hs->axis;
    ops.mirrored_level = a;
    BlockHankelMatrix s_hat;
    s_hat.counts = m;
    s_hat.block_dim = cell.size();
    s_hat.mirrored_level = a;
    BlockHankelMatrix k_hat;
    k_hat.counts = m;
    k_hat.block_dim = sf::coeff_count(cfg.n_t);
    k_hat.mirrored_level = a;

    int lo[3], hi[3];
    for (int d = 0; d < 3; ++d) {
      lo[d] = (d == a) ? 0 : 1 - m[d];
      hi[d] = (d == a) ? 2 * m[d] - 2 : m[d] - 1;
    }
    Vec3 base_image = geom::mirror_point(grid.base_center, *hs);
    for (int i2 = lo[2]; i2 <= hi[2]; ++i2)
      for (int i1 = lo[1]; i1 <= hi[1]; ++i1)
        for (int i0 = lo[0]; i0 <= hi[0]; ++i0) {
          std::array<int, 3> idx{i0, i1, i2};
          int ta = std::min(idx[a], m[a] - 1);
          int sa = idx[a] - ta;
          std::array<int, 3> tgt = idx, src{0, 0, 0};
          tgt[a] = ta;
          src[a] = sa;
          Vec3 tshift = lattice.cell_shift(tgt[0], tgt[1], tgt[2]);
          Vec3 sshift = lattice.cell_shift(src[0], src[1], src[2]);
          Vec3 target_center = grid.base_center + tshift;
          Vec3 image_center = base_image;
          image_center[a] -= sshift[a];  // mirrored source box center
          for (int d = 0; d < 3; ++d)
            if (d != a) image_center[d] += sshift[d];
          Vec3 delta_img = target_center - image_center;
          if (geom::admissible(target_center, image_center, grid.radius)) {
            k_hat.set_block(idx, hs->reflection * table.m2l(delta_img, k) * parity);
          } else {
            SurfaceMesh src_cell = bie;
            for (Element& e : src_cell.elements) {
              for (Vec3& c : e.corners) c += sshift;
              e.centroid += sshift;
            }
            SurfaceMesh src_image = geom::mirror_mesh(src_cell, *hs);
            s_hat.set_block(idx, hs->reflection * assembly::interaction_block(
                                                      ctx, bie, tshift, src_image, false));
          }
        }
    ops.near_field_image = std::move(s_hat);
    ops.k_image_spectrum = structured::hankel_spectrum(k_hat);
  }
  return ops;
}

VecXc FmmOperators::matvec(const VecXc& p) const {
  const int b = n_dof;
  const auto& m = grid.lattice.counts;
  const Eigen::Index n_cells = static_cast<Eigen::Index>(m[0]) * m[1] * m[2];
  if (p.size() != n_cells * b) throw std::invalid_argument("fmm matvec: dimension mismatch");
  const int pc = sf::coeff_count(config.n_t);

  VecXc y = near_field.matvec(p);

  // shared P2M on every cell, spectral M2L product, shared L2P back
  VecXc moments(n_cells * pc);
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < n_cells; ++c)
    moments.segment(c * pc, pc).noalias() = v0 * p.segment(c * b, b);

  VecXc local = k_spectrum.matvec(moments);
  if (k_image_spectrum)
    local += structured::hankel_matvec(*k_image_spectrum, mirrored_level, moments);

#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < n_cells; ++c)
    y.segment(c * b, b).noalias() += u0 * local.segment(c * pc, pc);

  if (near_field_image) y += near_field_image->matvec(p);
  return y;
}

size_t FmmOperators::stored_bytes() const {
  size_t bytes = near_field.stored_bytes() + k_spectrum.stored_bytes();
  bytes += sizeof(Complex) * (u0.size() + v0.size());
  if (near_field_image) bytes += near_field_image->stored_bytes();
  if (k_image_spectrum) bytes += k_image_spectrum->stored_bytes();
  return bytes;
}

}  // namespace fpbem::fmm

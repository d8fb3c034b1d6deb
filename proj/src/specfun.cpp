// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fpbem/specfun.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace fpbem::specfun {

namespace {

// s(m) relates the normalization used here to orthonormal harmonics:
// Y~_n^m = s(m) sqrt((2n+1)/4pi) Y_n^m.
inline double phase_s(int m) { return (m >= 0 && (m & 1)) ? -1.0 : 1.0; }

inline Complex ipow(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

const std::array<double, 171>& factorials() {
  static const std::array<double, 171> table = [] {
    std::array<double, 171> f{};
    f[0] = 1.0;
    for (int i = 1; i < 171; ++i) f[i] = f[i - 1] * i;
    return f;
  }();
  return table;
}

// One downward Miller pass producing j_0..j_n_max; values normalized
// against whichever of j_0, j_1 is better conditioned at x.
void bessel_j_all(int n_max, double x, double* out) {
  if (x == 0.0) {
    out[0] = 1.0;
    for (int n = 1; n <= n_max; ++n) out[n] = 0.0;
    return;
  }
  double s0 = std::sin(x) / x;
  if (n_max == 0) {
    out[0] = s0;
    return;
  }
  double xeff = std::max<double>(n_max, x);
  int m0 = static_cast<int>(xeff + 16.0 + 2.0 * std::sqrt(xeff));
  double jp = 0.0;
  double jc = 1.0e-300;
  for (int n = 0; n <= n_max; ++n) out[n] = 0.0;
  for (int m = m0; m >= 1; --m) {
    double jm = (2.0 * m + 1.0) / x * jc - jp;
    jp = jc;
    jc = jm;
    if (std::abs(jc) > 1.0e250) {
      jc *= 1.0e-250;
      jp *= 1.0e-250;
      for (int n = 0; n <= n_max; ++n) out[n] *= 1.0e-250;
    }
    if (m - 1 <= n_max) out[m - 1] = jc;
  }
  double s1 = s0 / x - std::cos(x) / x;
  double scale = (std::abs(s0) >= std::abs(s1)) ? s0 / out[0] : s1 / out[1];
  for (int n = 0; n <= n_max; ++n) out[n] *= scale;
}

void bessel_y_all(int n_max, double x, double* out) {
  if (x <= 0.0) throw std::domain_error("sph_bessel_y: argument must be positive");
  out[0] = -std::cos(x) / x;
  if (n_max == 0) return;
  out[1] = out[0] / x - std::sin(x) / x;
  for (int n = 1; n < n_max; ++n)
    out[n + 1] = (2.0 * n + 1.0) / x * out[n] - out[n - 1];
}

// P_n^m(ct) for 0 <= m <= n <= n_max, no Condon-Shortley phase, packed
// triangularly at n(n+1)/2 + m. st = sin(theta) >= 0.
void legendre_all(int n_max, double ct, double st, double* p) {
  p[0] = 1.0;
  double pmm = 1.0;
  for (int m = 0; m <= n_max; ++m) {
    int im = m * (m + 1) / 2 + m;
    if (m > 0) {
      pmm *= (2.0 * m - 1.0) * st;
      p[im] = pmm;
    }
    if (m < n_max) p[(m + 1) * (m + 2) / 2 + m] = (2.0 * m + 1.0) * ct * p[im];
    for (int n = m + 2; n <= n_max; ++n) {
      p[n * (n + 1) / 2 + m] =
          ((2.0 * n - 1.0) * ct * p[(n - 1) * n / 2 + m] -
           (n + m - 1.0) * p[(n - 2) * (n - 1) / 2 + m]) /
          (n - m);
    }
  }
}

}  // namespace

std::pair<int, int> unflatten(int idx) {
  if (idx < 0) throw std::domain_error("unflatten: negative index");
  int n = static_cast<int>(std::sqrt(static_cast<double>(idx)));
  while ((n + 1) * (n + 1) <= idx) ++n;
  while (n * n > idx) --n;
  return {n, idx - n * n - n};
}

double sph_bessel_j(int n, double x) {
  if (n < 0 || x < 0.0) throw std::domain_error("sph_bessel_j: n >= 0 and x >= 0 required");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n == 0) return std::sin(x) / x;
  std::vector<double> buf(n + 1);
  bessel_j_all(n, x, buf.data());
  return buf[n];
}

double sph_bessel_y(int n, double x) {
  if (n < 0) throw std::domain_error("sph_bessel_y: n >= 0 required");
  std::vector<double> buf(n + 1);
  bessel_y_all(n, x, buf.data());
  return buf[n];
}

Complex sph_hankel1(int n, double x) {
  if (x <= 0.0) throw std::domain_error("sph_hankel1: argument must be positive");
  return {sph_bessel_j(n, x), sph_bessel_y(n, x)};
}

double assoc_legendre(int n, int m, double x) {
  if (m < 0 || m > n) throw std::domain_error("assoc_legendre: 0 <= m <= n required");
  std::vector<double> p((n + 1) * (n + 2) / 2);
  double st = std::sqrt(std::max(0.0, 1.0 - x * x));
  legendre_all(n, x, st, p.data());
  return p[n * (n + 1) / 2 + m];
}

Complex sph_harmonic(int n, int m, double theta, double phi) {
  if (std::abs(m) > n) throw std::domain_error("sph_harmonic: |m| <= n required");
  int ma = std::abs(m);
  double norm = 1.0;
  for (int j = n - ma + 1; j <= n + ma; ++j) norm /= j;
  norm = std::sqrt(norm);
  double p = assoc_legendre(n, ma, std::cos(theta));
  Complex e = std::exp(Complex{0.0, m * phi});
  return norm * p * e;
}

void sph_harmonics_all(int n_max, const Vec3& v, Complex* out) {
  double r = v.norm();
  if (r <= 0.0) throw std::domain_error("sph_harmonics_all: zero direction");
  double ct = v.z() / r;
  double st = std::hypot(v.x(), v.y()) / r;
  double phi = (st > 0.0) ? std::atan2(v.y(), v.x()) : 0.0;

  std::vector<double> p((n_max + 1) * (n_max + 2) / 2);
  legendre_all(n_max, ct, st, p.data());

  Complex e1 = std::exp(Complex{0.0, phi});
  std::vector<Complex> em(n_max + 1);
  em[0] = 1.0;
  for (int m = 1; m <= n_max; ++m) em[m] = em[m - 1] * e1;

  for (int n = 0; n <= n_max; ++n) {
    double norm = 1.0;
    out[flatten(n, 0)] = p[n * (n + 1) / 2];
    for (int m = 1; m <= n; ++m) {
      norm /= std::sqrt(static_cast<double>((n - m + 1) * (n + m)));
      Complex y = norm * p[n * (n + 1) / 2 + m] * em[m];
      out[flatten(n, m)] = y;
      out[flatten(n, -m)] = std::conj(y);
    }
  }
}

Complex solid_regular(int n, int m, const Vec3& v, double k) {
  if (std::abs(m) > n) throw std::domain_error("solid_regular: |m| <= n required");
  double r = v.norm();
  if (r == 0.0) return (n == 0 && m == 0) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
  double theta = std::acos(std::clamp(v.z() / r, -1.0, 1.0));
  double phi = std::atan2(v.y(), v.x());
  return sph_bessel_j(n, k * r) * sph_harmonic(n, m, theta, phi);
}

Complex solid_singular(int n, int m, const Vec3& v, double k) {
  if (std::abs(m) > n) throw std::domain_error("solid_singular: |m| <= n required");
  double r = v.norm();
  if (r <= 0.0) throw std::domain_error("solid_singular: evaluation point at the singularity");
  double theta = std::acos(std::clamp(v.z() / r, -1.0, 1.0));
  double phi = std::atan2(v.y(), v.x());
  return sph_hankel1(n, k * r) * sph_harmonic(n, m, theta, phi);
}

void solid_regular_all(int n_max, const Vec3& v, double k, Complex* out) {
  double r = v.norm();
  int count = coeff_count(n_max);
  if (r == 0.0) {
    out[0] = 1.0;
    for (int i = 1; i < count; ++i) out[i] = 0.0;
    return;
  }
  std::vector<double> j(n_max + 1);
  bessel_j_all(n_max, k * r, j.data());
  sph_harmonics_all(n_max, v, out);
  for (int n = 0; n <= n_max; ++n)
    for (int m = -n; m <= n; ++m) out[flatten(n, m)] *= j[n];
}

void solid_singular_all(int n_max, const Vec3& v, double k, Complex* out) {
  double r = v.norm();
  if (r <= 0.0) throw std::domain_error("solid_singular_all: evaluation point at the singularity");
  std::vector<double> j(n_max + 1), y(n_max + 1);
  bessel_j_all(n_max, k * r, j.data());
  bessel_y_all(n_max, k * r, y.data());
  sph_harmonics_all(n_max, v, out);
  for (int n = 0; n <= n_max; ++n) {
    Complex h{j[n], y[n]};
    for (int m = -n; m <= n; ++m) out[flatten(n, m)] *= h;
  }
}

double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (j1 < 0 || j2 < 0 || j3 < 0) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  if (m1 + m2 + m3 != 0) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;

  const auto& f = factorials();
  double delta = f[j1 + j2 - j3] * f[j1 - j2 + j3] * f[-j1 + j2 + j3] / f[j1 + j2 + j3 + 1];
  double pref = delta * f[j1 + m1] * f[j1 - m1] * f[j2 + m2] * f[j2 - m2] * f[j3 + m3] * f[j3 - m3];

  int t_min = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  int t_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  double sum = 0.0;
  for (int t = t_min; t <= t_max; ++t) {
    double den = f[t] * f[j1 + j2 - j3 - t] * f[j1 - m1 - t] * f[j2 + m2 - t] *
                 f[j3 - j2 + m1 + t] * f[j3 - j1 - m2 + t];
    sum += ((t & 1) ? -1.0 : 1.0) / den;
  }
  double sign = ((j1 - j2 - m3) & 1) ? -1.0 : 1.0;
  return sign * std::sqrt(pref) * sum;
}

Complex coupling_w(int np, int n, int mp, int m, int l) {
  double w0 = wigner3j(n, np, l, 0, 0, 0);
  if (w0 == 0.0) return {0.0, 0.0};
  double w1 = wigner3j(n, np, l, m, mp, -m - mp);
  return (2.0 * l + 1.0) * ipow(np - n + l) * w0 * w1;
}

double trans_coeff(int n, int m, int np, int mp, int l) {
  double w0 = wigner3j(n, l, np, 0, 0, 0);
  if (w0 == 0.0) return 0.0;
  double w1 = wigner3j(n, l, np, -m, m - mp, mp);
  if (w1 == 0.0) return 0.0;
  // i^{l+n-np} is real on the parity support of the first 3j factor
  double re = (((l + n - np) % 4 + 4) % 4 == 0) ? 1.0 : -1.0;
  return re * (2.0 * l + 1.0) * phase_s(-m) * phase_s(m - mp) * phase_s(mp) * w0 * w1;
}

SolidRegularGradients solid_regular_gradients(int n_max, const Vec3& v, double k) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  int count = coeff_count(n_max);
  SolidRegularGradients g;
  g.value.resize(count);
  g.ddx.assign(count, Complex{0.0, 0.0});
  g.ddy.assign(count, Complex{0.0, 0.0});
  g.ddz.assign(count, Complex{0.0, 0.0});

  std::vector<Complex> ext(coeff_count(n_max + 1));
  solid_regular_all(n_max + 1, v, k, ext.data());
  for (int i = 0; i < count; ++i) g.value[i] = ext[i];

  for (int np = 0; np <= n_max; ++np) {
    for (int mp = -np; mp <= np; ++mp) {
      int row = flatten(np, mp);
      for (int n : {np - 1, np + 1}) {
        if (n < 0) continue;
        double w = (k / 3.0) * (2.0 * n + 1.0);
        // m = mp: z-ladder; m = mp -/+ 1: x/y-ladders
        if (std::abs(mp) <= n) {
          double c = w * trans_coeff(n, mp, np, mp, 1);
          g.ddz[row] += c * ext[flatten(n, mp)];
        }
        if (std::abs(mp - 1) <= n) {
          double c = w * trans_coeff(n, mp - 1, np, mp, 1) * inv_sqrt2;
          Complex val = ext[flatten(n, mp - 1)];
          g.ddx[row] += c * val;
          g.ddy[row] += Complex{0.0, c} * val;
        }
        if (std::abs(mp + 1) <= n) {
          double c = w * trans_coeff(n, mp + 1, np, mp, 1) * inv_sqrt2;
          Complex val = ext[flatten(n, mp + 1)];
          g.ddx[row] += c * val;
          g.ddy[row] -= Complex{0.0, c} * val;
        }
      }
    }
  }
  return g;
}

TranslationTable::TranslationTable(int n_t) : n_t_(n_t) {
  int p = coeff_count(n_t);
  m2l_terms_.resize(static_cast<size_t>(p) * p);
  shift_terms_.resize(static_cast<size_t>(p) * p);
  for (int n = 0; n <= n_t; ++n) {
    for (int m = -n; m <= n; ++m) {
      for (int np = 0; np <= n_t; ++np) {
        for (int mp = -np; mp <= np; ++mp) {
          size_t idx = static_cast<size_t>(flatten(n, m)) * p + flatten(np, mp);
          double w = 2.0 * np + 1.0;
          for (int l = std::abs(n - np); l <= n + np; ++l) {
            if ((n + np + l) & 1) continue;
            if (std::abs(m + mp) <= l) {
              double c = w * trans_coeff(n, -m, np, mp, l);
              if (c != 0.0) m2l_terms_[idx].push_back({l, c});
            }
            if (std::abs(mp - m) <= l) {
              double c = w * trans_coeff(n, m, np, mp, l);
              if (c != 0.0) shift_terms_[idx].push_back({l, c});
            }
          }
        }
      }
    }
  }
}

MatXc TranslationTable::m2l(const Vec3& delta, double k) const {
  int p = coeff_count(n_t_);
  std::vector<Complex> o(coeff_count(2 * n_t_));
  solid_singular_all(2 * n_t_, delta, k, o.data());
  MatXc block(p, p);
  for (int n = 0; n <= n_t_; ++n) {
    for (int m = -n; m <= n; ++m) {
      int row = flatten(n, m);
      for (int np = 0; np <= n_t_; ++np) {
        for (int mp = -np; mp <= np; ++mp) {
          Complex acc{0.0, 0.0};
          for (const Term& t : m2l_terms_[static_cast<size_t>(row) * p + flatten(np, mp)])
            acc += t.c * o[flatten(t.l, m + mp)];
          block(row, flatten(np, mp)) = acc;
        }
      }
    }
  }
  return block;
}

MatXc TranslationTable::regular_shift(const Vec3& shift, double k) const {
  int p = coeff_count(n_t_);
  std::vector<Complex> ivals(coeff_count(2 * n_t_));
  solid_regular_all(2 * n_t_, shift, k, ivals.data());
  MatXc a(p, p);
  for (int n = 0; n <= n_t_; ++n) {
    for (int m = -n; m <= n; ++m) {
      int row = flatten(n, m);
      for (int np = 0; np <= n_t_; ++np) {
        for (int mp = -np; mp <= np; ++mp) {
          Complex acc{0.0, 0.0};
          for (const Term& t : shift_terms_[static_cast<size_t>(row) * p + flatten(np, mp)])
            acc += t.c * ivals[flatten(t.l, mp - m)];
          a(row, flatten(np, mp)) = acc;
        }
      }
    }
  }
  return a;
}

}  // namespace fpbem::specfun

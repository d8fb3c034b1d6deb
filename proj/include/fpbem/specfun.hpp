// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FPBEM_SPECFUN_HPP
#define FPBEM_SPECFUN_HPP

#include <utility>
#include <vector>

#include "fpbem/types.hpp"

namespace fpbem::specfun {

/// Dense enumeration of harmonic indices (n, m), |m| <= n.
/// flatten(n, m) = n^2 + n + m; degrees n <= n_t occupy (n_t+1)^2 slots.
constexpr int flatten(int n, int m) noexcept { return n * n + n + m; }
std::pair<int, int> unflatten(int idx);
constexpr int coeff_count(int n_t) noexcept { return (n_t + 1) * (n_t + 1); }

/// Spherical Bessel function of the first kind, j_n(x).
/// Downward (Miller) recurrence normalized against j_0/j_1; total on n >= 0, x >= 0.
double sph_bessel_j(int n, double x);

/// Spherical Bessel function of the second kind, y_n(x), by upward recurrence.
/// Throws std::domain_error for x <= 0.
double sph_bessel_y(int n, double x);

/// Spherical Hankel function of the first kind, h_n^(1)(x) = j_n(x) + i y_n(x).
Complex sph_hankel1(int n, double x);

/// Associated Legendre P_n^m(x) for 0 <= m <= n, WITHOUT the Condon-Shortley phase.
double assoc_legendre(int n, int m, double x);

/// Y_n^m(theta, phi) = sqrt((n-|m|)!/(n+|m|)!) P_n^{|m|}(cos theta) e^{i m phi}.
Complex sph_harmonic(int n, int m, double theta, double phi);

/// All Y_n^m for n <= n_max at the direction of v (|v| > 0), flattened layout.
void sph_harmonics_all(int n_max, const Vec3& v, Complex* out);

/// Regular solid harmonic I_n^m(v; k) = j_n(k|v|) Y_n^m(v/|v|); at v = 0 only (0,0) is 1.
Complex solid_regular(int n, int m, const Vec3& v, double k);

/// Singular solid harmonic O_n^m(v; k) = h_n^(1)(k|v|) Y_n^m(v/|v|); |v| = 0 is a domain error.
Complex solid_singular(int n, int m, const Vec3& v, double k);

/// Batch evaluation over all (n, m) with n <= n_max, flattened layout.
void solid_regular_all(int n_max, const Vec3& v, double k, Complex* out);
void solid_singular_all(int n_max, const Vec3& v, double k, Complex* out);

/// Values and Cartesian gradients of I_n^m(v; k) for all n <= n_max.
/// Gradients come from the degree-(n±1) ladder of the translation theorem,
/// which stays regular on the polar axis and at v = 0.
struct SolidRegularGradients {
  std::vector<Complex> value;
  std::vector<Complex> ddx, ddy, ddz;
};
SolidRegularGradients solid_regular_gradients(int n_max, const Vec3& v, double k);

/// Wigner 3j symbol by the Racah single-sum formula; exact zeros for
/// violated selection rules. Reliable for j up to ~20.
double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3);

/// W coupling factor (2l+1) i^{np-n+l} (n np l; 0 0 0)(n np l; m mp -m-mp).
Complex coupling_w(int np, int n, int mp, int m, int l);

/// Translation coefficient between solid-harmonic expansions under the
/// convention above. The coefficient of I_n^m(u) I_l^{mp-m}(s) in the
/// re-expansion of I_np^mp(u+s) is (2n+1) * trans_coeff(n,m,np,mp,l);
/// replacing I_l by O_l gives the singular-to-local variant. Real-valued
/// on its parity support (n + np + l even).
double trans_coeff(int n, int m, int np, int mp, int l);

/// Per-(row, column) contraction table for the translation operators:
/// row (n,m), column (np,mp), terms (l, c) with c real.
class TranslationTable {
 public:
  explicit TranslationTable(int n_t);

  int truncation() const { return n_t_; }

  /// Multipole-to-local block: entry ((n,m),(np,mp)) = sum_l c_l O_l^{m+mp}(delta; k).
  MatXc m2l(const Vec3& delta, double k) const;

  /// Regular-shift matrix A(s): moments about c map to moments about c+s via
  /// M'(c+s) = A(s) M(c). Local coefficients use conj(A(s)) for the same shift.
  MatXc regular_shift(const Vec3& shift, double k) const;

 private:
  struct Term {
    int l;
    double c;
  };
  int n_t_;
  // m2l_terms_[row * P + col] and shift_terms_[row * P + col], P = (n_t+1)^2
  std::vector<std::vector<Term>> m2l_terms_;
  std::vector<std::vector<Term>> shift_terms_;
};

}  // namespace fpbem::specfun

#endif  // FPBEM_SPECFUN_HPP

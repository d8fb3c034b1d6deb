// Test-only reference implementations, independent of the library code paths
// they are used to check.

#ifndef FPBEM_TESTS_ORACLES_HPP
#define FPBEM_TESTS_ORACLES_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>

namespace oracles {

using BigInt = boost::multiprecision::cpp_int;

// Spherical Bessel j_n by the ascending power series in extended precision.
inline double series_sph_bessel_j(int n, double x) {
  long double xl = x;
  long double dfact = 1.0L;  // (2n+1)!!
  for (int j = 1; j <= 2 * n + 1; j += 2) dfact *= j;
  long double lead = 1.0L;
  for (int j = 0; j < n; ++j) lead *= xl;
  lead /= dfact;
  long double term = 1.0L, sum = 1.0L;
  for (int s = 1; s < 400; ++s) {
    term *= -xl * xl / 2.0L / (static_cast<long double>(s) * (2.0L * n + 2.0L * s + 1.0L));
    sum += term;
    if (std::abs(static_cast<double>(term)) < 1e-22 * std::abs(static_cast<double>(sum))) break;
  }
  return static_cast<double>(lead * sum);
}

struct Rational {
  BigInt num{0}, den{1};
  void reduce() {
    if (den < 0) { num = -num; den = -den; }
    BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(num), den);
    if (g > 1) { num /= g; den /= g; }
  }
  Rational operator+(const Rational& o) const {
    Rational r{num * o.den + o.num * den, den * o.den};
    r.reduce();
    return r;
  }
  Rational operator*(const Rational& o) const {
    Rational r{num * o.num, den * o.den};
    r.reduce();
    return r;
  }
  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

inline BigInt big_factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Wigner 3j through the Racah sum with exact rational arithmetic: the
// square-root argument and the alternating sum are kept as exact fractions.
inline double exact_wigner3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (m1 + m2 + m3 != 0) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;

  Rational pref{big_factorial(j1 + j2 - j3) * big_factorial(j1 - j2 + j3) *
                    big_factorial(-j1 + j2 + j3) * big_factorial(j1 + m1) *
                    big_factorial(j1 - m1) * big_factorial(j2 + m2) * big_factorial(j2 - m2) *
                    big_factorial(j3 + m3) * big_factorial(j3 - m3),
                big_factorial(j1 + j2 + j3 + 1)};
  pref.reduce();

  int t_min = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  int t_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  Rational sum{0, 1};
  for (int t = t_min; t <= t_max; ++t) {
    BigInt den = big_factorial(t) * big_factorial(j1 + j2 - j3 - t) * big_factorial(j1 - m1 - t) *
                 big_factorial(j2 + m2 - t) * big_factorial(j3 - j2 + m1 + t) *
                 big_factorial(j3 - j1 - m2 + t);
    Rational term{(t & 1) ? BigInt(-1) : BigInt(1), den};
    sum = sum + term;
  }
  double sign = ((j1 - j2 - m3) & 1) ? -1.0 : 1.0;
  return sign * std::sqrt(pref.to_double()) * sum.to_double();
}

}  // namespace oracles

#endif  // FPBEM_TESTS_ORACLES_HPP

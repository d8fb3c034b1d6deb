// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FPBEM_TYPES_HPP
#define FPBEM_TYPES_HPP

#include <complex>

#include <Eigen/Dense>

namespace fpbem {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using VecXc = Eigen::VectorXcd;
using MatXc = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr Complex iu{0.0, 1.0};

/// Frequency-dependent scalars shared by all operators of one analysis.
struct WaveContext {
  double frequency;    // Hz
  double sound_speed;  // m/s
  double density;      // kg/m^3
  double omega;        // rad/s
  double wavenumber;   // rad/m
  Complex alpha;       // combined-equation coupling, Im(alpha) != 0

  /// alpha defaults to -i/k.
  static WaveContext make(double f, double c, double rho);
  static WaveContext make(double f, double c, double rho, Complex alpha);
};

inline WaveContext WaveContext::make(double f, double c, double rho, Complex alpha) {
  WaveContext ctx;
  ctx.frequency = f;
  ctx.sound_speed = c;
  ctx.density = rho;
  ctx.omega = 2.0 * pi * f;
  ctx.wavenumber = ctx.omega / c;
  ctx.alpha = alpha;
  return ctx;
}

inline WaveContext WaveContext::make(double f, double c, double rho) {
  double k = 2.0 * pi * f / c;
  return make(f, c, rho, Complex{0.0, -1.0 / k});
}

}  // namespace fpbem

#endif  // FPBEM_TYPES_HPP

#pragma once

namespace polaron {

/// sin^2-enveloped carrier, A(t) = -A0 sin^2(wL t / 2 n_cyc) sin(wL t) on [0, t_final].
struct LaserParams {
  double a0 = 0.183;
  double omega_l = 0.002;
  int n_cyc = 5;

  double t_final() const noexcept;
  void validate() const;
};

/// Zero outside [0, t_final].
double vector_potential(double t, const LaserParams& laser);

/// E = -dA/dt, evaluated analytically. Zero outside [0, t_final].
double electric_field(double t, const LaserParams& laser);

}  // namespace polaron

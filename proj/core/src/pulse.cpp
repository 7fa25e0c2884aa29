#include "polaron_hhg/pulse.hpp"

#include <cmath>
#include <numbers>

#include "polaron_hhg/errors.hpp"

namespace polaron {

double LaserParams::t_final() const noexcept {
  return 2.0 * std::numbers::pi * n_cyc / omega_l;
}

void LaserParams::validate() const {
  if (!std::isfinite(a0)) throw InvalidParameterError("a0: must be finite");
  if (!(std::isfinite(omega_l) && omega_l > 0.0)) {
    throw InvalidParameterError("omega_l: laser frequency must be > 0");
  }
  if (n_cyc < 1) throw InvalidParameterError("n_cyc: need at least one cycle");
}

double vector_potential(double t, const LaserParams& laser) {
  if (t < 0.0 || t > laser.t_final()) return 0.0;
  const double envelope = std::sin(laser.omega_l * t / (2.0 * laser.n_cyc));
  return -laser.a0 * envelope * envelope * std::sin(laser.omega_l * t);
}

double electric_field(double t, const LaserParams& laser) {
  if (t < 0.0 || t > laser.t_final()) return 0.0;
  const double w = laser.omega_l;
  const double phase = w * t / (2.0 * laser.n_cyc);
  const double s = std::sin(phase);
  const double c = std::cos(phase);
  return laser.a0 * ((w / laser.n_cyc) * s * c * std::sin(w * t) + w * s * s * std::cos(w * t));
}

}  // namespace polaron

#include "lbsr/kernels.hpp"

#include "lbsr/errors.hpp"

#include <cmath>
#include <string>

namespace lbsr {

KernelKind parse_kernel(std::string_view name) {
  if (name == "poisson") return KernelKind::poisson;
  if (name == "yukawa") return KernelKind::yukawa;
  throw Error(ErrorKind::parameter, "unknown kernel '" + std::string(name) + "'");
}

std::string_view to_string(KernelKind kind) { return kind == KernelKind::poisson ? "poisson" : "yukawa"; }

double floor_mod(double x, double L) {
  double m = x - L * std::floor(x / L);
  if (m >= L) m -= L;
  if (m < 0.0) m = 0.0;
  return m;
}

namespace {

// Resolves the reduced argument for a derivative evaluation, honoring the
// side at the jump point.
double jump_argument(double x, double L, std::optional<Side> side) {
  const double d = floor_mod(x, L);
  if (d == 0.0) {
    if (!side) throw Error(ErrorKind::jump_point, "kernel derivative evaluated at its jump");
    return *side == Side::right ? 0.0 : L;
  }
  return d;
}

}  // namespace

double g_poisson(double x, double L) {
  const double d = floor_mod(x, L) - 0.5 * L;
  return -d * d / (2.0 * L) + L / 24.0;
}

double g_poisson_deriv(double x, double L, std::optional<Side> side) {
  const double d = jump_argument(x, L, side);
  return -(d - 0.5 * L) / L;
}

double g_yukawa(double x, double L) {
  const double d = floor_mod(x, L);
  return -(std::exp(-d) + std::exp(d - L)) / (2.0 * -std::expm1(-L));
}

double g_yukawa_deriv(double x, double L, std::optional<Side> side) {
  const double d = jump_argument(x, L, side);
  return (std::exp(-d) - std::exp(d - L)) / (2.0 * -std::expm1(-L));
}

double g_yukawa_closed_form(double t, double L) {
  return -0.5 * std::exp(-std::abs(t)) - std::exp(-L) / (-std::expm1(-L)) * std::cosh(t);
}

}  // namespace lbsr

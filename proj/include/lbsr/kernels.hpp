#ifndef LBSR_KERNELS_HPP
#define LBSR_KERNELS_HPP

#include "lbsr/geometry.hpp"

#include <optional>
#include <string_view>

namespace lbsr {

enum class KernelKind { poisson, yukawa };

KernelKind parse_kernel(std::string_view name);
std::string_view to_string(KernelKind kind);

/// Remainder in [0, L), also for negative x.
double floor_mod(double x, double L);

// Periodic Green's function of v'' = f (mean-zero f):
//   G_L(x) = -(mod(x, L) - L/2)^2 / (2L) + L/24.
double g_poisson(double x, double L);

/// G_L'(x) = -(mod(x, L) - L/2) / L. At the jump (x = 0 mod L) a side must
/// be given: the right limit is 1/2 and the left limit -1/2.
double g_poisson_deriv(double x, double L, std::optional<Side> side = std::nullopt);

// Periodic Green's function of v'' - v = f:
//   G_Y(x) = -(e^{-d} + e^{d - L}) / (2 (1 - e^{-L})),  d = mod(x, L),
// which equals -cosh(d - L/2) / (2 sinh(L/2)).
double g_yukawa(double x, double L);
double g_yukawa_deriv(double x, double L, std::optional<Side> side = std::nullopt);

/// The closed form -e^{-|t|}/2 - e^{-L}/(1 - e^{-L}) cosh(t) at a reduced
/// argument t. It reproduces g_yukawa when t = mod(x + L/2, L) - L/2 lies in
/// [-L/2, L/2); other reductions of x do not give a periodic kernel.
double g_yukawa_closed_form(double t, double L);

/// Kernel kind bound to a period.
struct Kernel {
  KernelKind kind = KernelKind::poisson;
  double period = 1.0;

  double value(double x) const {
    return kind == KernelKind::poisson ? g_poisson(x, period) : g_yukawa(x, period);
  }
  double deriv(double x, std::optional<Side> side = std::nullopt) const {
    return kind == KernelKind::poisson ? g_poisson_deriv(x, period, side) : g_yukawa_deriv(x, period, side);
  }
};

}  // namespace lbsr

#endif  // LBSR_KERNELS_HPP

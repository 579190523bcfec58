#ifndef LBSR_HODGE_HPP
#define LBSR_HODGE_HPP

#include "lbsr/surface_solver.hpp"

#include <array>

namespace lbsr {

struct DivergenceOptions {
  /// Resample each panel onto Chebyshev points before differentiating in s.
  bool chebyshev_resample = false;
};

/// div F = (1/r) d(r F^s)/ds + (1/r) dF^theta/dtheta, per panel in s and
/// spectrally in theta.
SurfaceScalarField surface_divergence(const TangentVectorField& F, const DivergenceOptions& options = {});

/// n x F = -F^theta s_hat + F^s theta_hat.
TangentVectorField rotate(const TangentVectorField& F);

/// The two harmonic fields (1/r) s_hat and -(1/r) theta_hat.
std::array<TangentVectorField, 2> harmonic_basis(const DiscretizationPtr& disc);

struct HodgeOptions {
  /// The divergence sources have zero mean only up to discretization error,
  /// so project_mean is enabled on both solves.
  LBOptions lb;
  DivergenceOptions divergence;
};

/// F = grad alpha + n x grad beta + H.
struct HodgeDecomposition {
  LBSolution alpha;
  LBSolution beta;
  TangentVectorField curl_free;        // grad alpha
  TangentVectorField divergence_free;  // n x grad beta
  TangentVectorField harmonic;         // H
};

HodgeDecomposition hodge_decompose(const TangentVectorField& F, const HodgeOptions& options = {});

struct HarmonicProjection {
  std::array<double, 2> coefficients{};
  /// ||H - c1 H1 - c2 H2|| / reference_norm.
  double residual = 0.0;
};

HarmonicProjection project_harmonic(const TangentVectorField& H, const std::array<TangentVectorField, 2>& basis,
                                    double reference_norm);

inline double project_residual(const TangentVectorField& H, const std::array<TangentVectorField, 2>& basis,
                               double reference_norm) {
  return project_harmonic(H, basis, reference_norm).residual;
}

}  // namespace lbsr

#endif  // LBSR_HODGE_HPP

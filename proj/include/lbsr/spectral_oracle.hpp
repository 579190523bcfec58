#ifndef LBSR_SPECTRAL_ORACLE_HPP
#define LBSR_SPECTRAL_ORACLE_HPP

#include <Eigen/Core>

#include <functional>

namespace lbsr::oracle {

/// Trigonometric interpolant of a periodic solution on [0, L).
struct FourierSolution {
  double period = 0.0;
  Eigen::VectorXd values;  // at x_j = j L / N

  double eval(double x) const;
};

/// Fourier collocation for u'' + p u' + q u = f with smooth periodic
/// coefficients and q not identically zero. N must be even.
FourierSolution solve_periodic_collocation(double period, const std::function<double(double)>& p,
                                           const std::function<double(double)>& q,
                                           const std::function<double(double)>& f, int n);

/// First and second Fourier differentiation matrices on N equispaced points.
Eigen::MatrixXd fourier_derivative_matrix(double period, int n, int order);

}  // namespace lbsr::oracle

#endif  // LBSR_SPECTRAL_ORACLE_HPP

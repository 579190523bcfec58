#ifndef LBSR_AZIMUTHAL_HPP
#define LBSR_AZIMUTHAL_HPP

#include <Eigen/Core>

#include <complex>
#include <span>

namespace lbsr {

/// Discrete Fourier coefficients in theta of a field sampled on an
/// N_theta x N_s grid, theta_j = 2 pi j / N_theta:
///   f(theta_j, s) = sum_n c_n(s) e^{i n theta_j},  n = -N/2, ..., N/2 - 1.
/// Row r of coeffs holds mode n = r for r < N/2 and n = r - N otherwise.
class FourierStack {
 public:
  FourierStack() = default;
  FourierStack(int ntheta, Eigen::Index npoints);
  FourierStack(int ntheta, Eigen::MatrixXcd coeffs);

  int ntheta() const { return ntheta_; }
  Eigen::Index npoints() const { return coeffs_.cols(); }
  int min_mode() const { return -ntheta_ / 2; }
  int max_mode() const { return ntheta_ / 2 - 1; }
  /// The unpaired mode n = -N/2.
  int nyquist() const { return -ntheta_ / 2; }

  auto mode(int n) { return coeffs_.row(row_of(n)); }
  auto mode(int n) const { return coeffs_.row(row_of(n)); }

  const Eigen::MatrixXcd& coeffs() const { return coeffs_; }
  Eigen::MatrixXcd& coeffs() { return coeffs_; }

  Eigen::Index row_of(int n) const;

 private:
  int ntheta_ = 0;
  Eigen::MatrixXcd coeffs_;
};

/// Equispaced azimuthal angles 2 pi j / N.
Eigen::VectorXd theta_grid(int ntheta);

/// Forward transform of each column (fixed s) of the grid. N_theta = rows.
FourierStack decompose(const Eigen::MatrixXd& grid);
/// Same, after checking that thetas are the equispaced grid.
FourierStack decompose(const Eigen::MatrixXd& grid, std::span<const double> thetas);

/// Real part of the inverse transform on an N_theta grid. When N_theta
/// differs from the stack's, modes are zero-padded or truncated.
Eigen::MatrixXd synthesize(const FourierStack& stack, int ntheta);
Eigen::MatrixXd synthesize(const FourierStack& stack);

/// Multiplies mode n by i n; the Nyquist mode of real data maps to zero.
FourierStack theta_derivative(const FourierStack& stack);

}  // namespace lbsr

#endif  // LBSR_AZIMUTHAL_HPP

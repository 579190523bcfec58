#ifndef LBSR_PERIODIC_ODE_HPP
#define LBSR_PERIODIC_ODE_HPP

#include "lbsr/kernels.hpp"
#include "lbsr/linalg.hpp"
#include "lbsr/quadrature.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace lbsr {

using Sampler = std::function<double(double)>;

/// Linear side condition  int_0^L u(x) w(x) dx = value.
struct LinearConstraint {
  Sampler weight;
  double value = 0.0;
};

/// u'' + p u' + q u = f on [0, L] with periodic u and u'. Empty samplers mean
/// zero. When q vanishes identically the constraint is mandatory.
struct PeriodicODEProblem {
  double period = 0.0;
  Sampler p;
  Sampler q;
  Sampler f;
  std::optional<LinearConstraint> constraint;
  KernelKind kernel = KernelKind::poisson;
  /// Points where p, q jump or f is singular; each must be a panel boundary.
  std::vector<double> breakpoints;
};

/// Nystrom discretization of the single layer S sigma = int G(x - t) sigma(t) dt
/// and of S' on a panel mesh. Off-panel integrals use the panel Gauss rule;
/// the panel holding the target is split at the target and sigma is
/// interpolated onto the two sub-rules.
class LayerPotential {
 public:
  LayerPotential(PanelMesh mesh, KernelKind kind, bool materialize);

  const PanelMesh& mesh() const { return mesh_; }
  const Kernel& kernel() const { return kernel_; }
  double period() const { return kernel_.period; }
  bool materialized() const { return materialized_; }

  /// N x N matrices of S and S' acting on nodal densities. Only available
  /// when materialized.
  const Eigen::MatrixXd& value_matrix() const;
  const Eigen::MatrixXd& deriv_matrix() const;

  template <typename Scalar>
  VectorX<Scalar> apply_value(const VectorX<Scalar>& sigma) const {
    return apply(sigma, false);
  }
  template <typename Scalar>
  VectorX<Scalar> apply_deriv(const VectorX<Scalar>& sigma) const {
    return apply(sigma, true);
  }

  /// Quadrature weights for S or S' at an arbitrary x in [0, L]: the
  /// potential there is weights . sigma. x is wrapped periodically.
  Eigen::RowVectorXd eval_weights(double x, bool derivative, Side side = Side::right) const;

  template <typename Scalar>
  Scalar eval_value(const VectorX<Scalar>& sigma, double x, Side side = Side::right) const {
    return eval_weights(x, false, side).template cast<Scalar>() * sigma;
  }
  template <typename Scalar>
  Scalar eval_deriv(const VectorX<Scalar>& sigma, double x, Side side = Side::right) const {
    return eval_weights(x, true, side).template cast<Scalar>() * sigma;
  }

 private:
  template <typename Scalar>
  VectorX<Scalar> apply(const VectorX<Scalar>& sigma, bool derivative) const;

  PanelMesh mesh_;
  Kernel kernel_;
  bool materialized_ = false;
  Eigen::MatrixXd value_;
  Eigen::MatrixXd deriv_;
  std::vector<Eigen::MatrixXd> near_value_;  // per panel, k x k
  std::vector<Eigen::MatrixXd> near_deriv_;
};

struct NodalConstraint {
  Eigen::VectorXd weight;  // w(x) at the mesh nodes
  double value = 0.0;
};

struct AssemblyOptions {
  Eigen::Index dense_limit = 2048;  // materialize the operator up to this size
};

/// The square second-kind system in the sqrt(w)-scaled unknowns.
///
/// Poisson kernel, representation u = S[sigma - m] + m with m the mean of sigma:
///   sigma - m + p S' sigma + q S sigma + q m = f
/// Yukawa kernel, representation u = S sigma:
///   sigma + p S' sigma + (q + 1) S sigma = f
/// With a constraint (only when q = 0) the functional int u w - value is added
/// to every equation.
class NystromSystem {
 public:
  NystromSystem(std::shared_ptr<const LayerPotential> layer, Eigen::VectorXd p, Eigen::VectorXd q,
                std::optional<NodalConstraint> constraint, const AssemblyOptions& options = {});

  Eigen::Index size() const { return layer_->mesh().size(); }
  const PanelMesh& mesh() const { return layer_->mesh(); }
  const std::shared_ptr<const LayerPotential>& layer() const { return layer_; }
  KernelKind kernel() const { return layer_->kernel().kind; }
  const WeightedEmbedding& embedding() const { return embedding_; }
  bool constrained() const { return constraint_.has_value(); }
  const Eigen::VectorXd& p() const { return p_; }
  const Eigen::VectorXd& q() const { return q_; }

  bool dense() const { return dense_; }
  /// Scaled operator matrix; only when dense().
  const Eigen::MatrixXd& matrix() const;

  /// Constant C of the representation for a density.
  template <typename Scalar>
  Scalar representation_constant(const VectorX<Scalar>& sigma) const {
    if (kernel() == KernelKind::yukawa) return Scalar(0);
    return mesh().weights().template cast<Scalar>().dot(sigma) / mesh().length();
  }

  /// Unscaled operator applied to a nodal density.
  template <typename Scalar>
  VectorX<Scalar> apply_unscaled(const VectorX<Scalar>& sigma) const;

  /// Scaled operator applied to y = sqrt(w) sigma.
  template <typename Scalar>
  VectorX<Scalar> apply(const VectorX<Scalar>& y) const {
    if (dense_) return (matrix_.template cast<Scalar>() * y).eval();
    return embedding_.scale_in(apply_unscaled<Scalar>(embedding_.scale_out(y)));
  }

  template <typename Scalar>
  LinearOperator<Scalar> op() const {
    return {size(), [this](const VectorX<Scalar>& y) { return apply<Scalar>(y); }};
  }

  /// Scaled right-hand side for nodal data f.
  template <typename Scalar>
  VectorX<Scalar> rhs(const VectorX<Scalar>& f) const {
    VectorX<Scalar> b = f;
    if (constraint_) b.array() += Scalar(constraint_->value);
    return embedding_.scale_in(b);
  }

 private:
  std::shared_ptr<const LayerPotential> layer_;
  Eigen::VectorXd p_;
  Eigen::VectorXd q_;
  std::optional<NodalConstraint> constraint_;
  WeightedEmbedding embedding_;
  bool dense_ = false;
  Eigen::MatrixXd matrix_;
};

/// Samples p, q and the constraint on the mesh and builds the system.
NystromSystem assemble(const PeriodicODEProblem& problem, const PanelMesh& mesh, const AssemblyOptions& options = {});

enum class SolverKind { gmres, dense };

struct SolverOptions {
  SolverKind kind = SolverKind::gmres;
  GmresOptions gmres;
};

template <typename Scalar>
struct OneSidedLimits {
  Scalar u_left, u_right, du_left, du_right;
};

/// Density, representation constant and evaluators of u = S sigma + C.
template <typename Scalar>
class ModeSolution {
 public:
  ModeSolution() = default;
  ModeSolution(std::shared_ptr<const LayerPotential> layer, VectorX<Scalar> sigma, Scalar constant,
               SolveReport report)
      : layer_(std::move(layer)), sigma_(std::move(sigma)), constant_(constant), report_(std::move(report)) {}

  const VectorX<Scalar>& sigma() const { return sigma_; }
  Scalar constant() const { return constant_; }
  const SolveReport& report() const { return report_; }
  const PanelMesh& mesh() const { return layer_->mesh(); }
  const LayerPotential& layer() const { return *layer_; }

  Scalar eval_u(double x, Side side = Side::right) const { return layer_->eval_value(sigma_, x, side) + constant_; }
  Scalar eval_du(double x, Side side = Side::right) const { return layer_->eval_deriv(sigma_, x, side); }

  VectorX<Scalar> nodal_u() const {
    VectorX<Scalar> u = layer_->apply_value(sigma_);
    u.array() += constant_;
    return u;
  }
  VectorX<Scalar> nodal_du() const { return layer_->apply_deriv(sigma_); }

  /// One-sided values of u and u' at a panel boundary, obtained by evaluating
  /// the polynomial interpolants of the nodal u and u' on the two adjacent
  /// panels at their shared endpoint.
  OneSidedLimits<Scalar> one_sided_limits(double x) const;

  /// One-sided values taken from the layer-potential representation itself.
  /// Usable at edges where the data, and hence u'', is singular.
  OneSidedLimits<Scalar> representation_limits(double x) const {
    return {eval_u(x, Side::left), eval_u(x, Side::right), eval_du(x, Side::left), eval_du(x, Side::right)};
  }

 private:
  std::shared_ptr<const LayerPotential> layer_;
  VectorX<Scalar> sigma_;
  Scalar constant_{};
  SolveReport report_;
};

/// Solves the system for nodal data f. Throws on solver failure.
template <typename Scalar>
ModeSolution<Scalar> solve(const NystromSystem& system, const VectorX<Scalar>& f, const SolverOptions& options = {});

/// Samples problem.f at the nodes and solves.
ModeSolution<double> solve(const NystromSystem& system, const PeriodicODEProblem& problem,
                           const SolverOptions& options = {});

/// assemble + solve.
ModeSolution<double> solve_ode(const PeriodicODEProblem& problem, const PanelMesh& mesh,
                               const SolverOptions& options = {}, const AssemblyOptions& assembly = {});

// ---------------------------------------------------------------------------

template <typename Scalar>
VectorX<Scalar> LayerPotential::apply(const VectorX<Scalar>& sigma, bool derivative) const {
  if (materialized_) return ((derivative ? deriv_ : value_).template cast<Scalar>() * sigma).eval();

  const Eigen::Index n = mesh_.size();
  const Eigen::Index k = mesh_.order();
  const Eigen::VectorXd& x = mesh_.nodes();
  const Eigen::VectorXd& w = mesh_.weights();
  const VectorX<Scalar> ws = (w.template cast<Scalar>().array() * sigma.array()).matrix();
  VectorX<Scalar> out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index panel = i / k;
    Scalar acc(0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j / k == panel) {
        j += k - 1;
        continue;
      }
      const double g = derivative ? kernel_.deriv(x(i) - x(j)) : kernel_.value(x(i) - x(j));
      acc += g * ws(j);
    }
    const Eigen::MatrixXd& near = derivative ? near_deriv_[panel] : near_value_[panel];
    acc += (near.row(i - panel * k).template cast<Scalar>() * sigma.segment(panel * k, k)).value();
    out(i) = acc;
  }
  return out;
}

template <typename Scalar>
VectorX<Scalar> NystromSystem::apply_unscaled(const VectorX<Scalar>& sigma) const {
  const VectorX<Scalar> s = layer_->apply_value(sigma);
  const VectorX<Scalar> ds = layer_->apply_deriv(sigma);
  const Scalar c = representation_constant(sigma);
  VectorX<Scalar> out = sigma;
  out.array() += p_.template cast<Scalar>().array() * ds.array();
  if (kernel() == KernelKind::poisson) {
    out.array() += q_.template cast<Scalar>().array() * (s.array() + c) - c;
  } else {
    out.array() += (q_.array() + 1.0).template cast<Scalar>() * s.array();
  }
  if (constraint_) {
    const Eigen::VectorXd wc = mesh().weights().cwiseProduct(constraint_->weight);
    const Scalar functional = wc.template cast<Scalar>().dot(s) + wc.sum() * c;
    out.array() += functional;
  }
  return out;
}

template <typename Scalar>
OneSidedLimits<Scalar> ModeSolution<Scalar>::one_sided_limits(double x) const {
  const PanelMesh& m = mesh();
  const double L = m.length();
  if (!m.is_boundary(x, 1e-13 * L)) throw Error(ErrorKind::parameter, "one-sided limits need a panel boundary");
  const Eigen::Index k = m.order();
  const Eigen::Index right = (x >= L - 1e-13 * L) ? 0 : m.locate(x, Side::right);
  const Eigen::Index left = (x <= 1e-13 * L) ? m.num_panels() - 1 : m.locate(x, Side::left);
  const VectorX<Scalar> u = nodal_u();
  const VectorX<Scalar> du = nodal_du();

  Eigen::VectorXd end(1);
  end(0) = m.panel(left).b;
  const Eigen::RowVectorXd pl = interpolation_matrix(m.panel_nodes(left), end).row(0);
  end(0) = m.panel(right).a;
  const Eigen::RowVectorXd pr = interpolation_matrix(m.panel_nodes(right), end).row(0);
  OneSidedLimits<Scalar> lim;
  lim.u_left = pl.template cast<Scalar>() * u.segment(left * k, k);
  lim.u_right = pr.template cast<Scalar>() * u.segment(right * k, k);
  lim.du_left = pl.template cast<Scalar>() * du.segment(left * k, k);
  lim.du_right = pr.template cast<Scalar>() * du.segment(right * k, k);
  return lim;
}

template <typename Scalar>
ModeSolution<Scalar> solve(const NystromSystem& system, const VectorX<Scalar>& f, const SolverOptions& options) {
  if (f.size() != system.size()) throw Error(ErrorKind::parameter, "right-hand side size mismatch");
  const VectorX<Scalar> b = system.rhs(f);
  VectorX<Scalar> y;
  SolveReport report;
  if (options.kind == SolverKind::dense) {
    if (!system.dense()) throw Error(ErrorKind::parameter, "dense solver needs a materialized system");
    y = dense_solve(system.matrix(), b);
    report.iterations = 0;
    report.residual = b.norm() > 0 ? (system.apply(y) - b).norm() / b.norm() : 0.0;
    report.converged = true;
  } else {
    auto [x, rep] = gmres(system.op<Scalar>(), b, options.gmres);
    if (!rep.converged) {
      throw Error(ErrorKind::solver, "GMRES did not converge: residual " + std::to_string(rep.residual) + " after " +
                                         std::to_string(rep.iterations) + " iterations");
    }
    y = std::move(x);
    report = std::move(rep);
  }
  VectorX<Scalar> sigma = system.embedding().scale_out(y);
  const Scalar c = system.representation_constant(sigma);
  return ModeSolution<Scalar>(system.layer(), std::move(sigma), c, std::move(report));
}

}  // namespace lbsr

#endif  // LBSR_PERIODIC_ODE_HPP

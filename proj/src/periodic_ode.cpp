#include "lbsr/periodic_ode.hpp"

#include <cmath>

namespace lbsr {

LayerPotential::LayerPotential(PanelMesh mesh, KernelKind kind, bool materialize)
    : mesh_(std::move(mesh)), kernel_{kind, mesh_.length()}, materialized_(materialize) {
  const Eigen::Index k = mesh_.order();
  const Eigen::Index panels = mesh_.num_panels();
  near_value_.resize(panels);
  near_deriv_.resize(panels);
  for (Eigen::Index i = 0; i < panels; ++i) {
    const Panel panel = mesh_.panel(i);
    const Eigen::VectorXd nodes = mesh_.panel_nodes(i);
    Eigen::MatrixXd nv(k, k);
    Eigen::MatrixXd nd(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const double x = nodes(j);
      const SplitRule split = split_rule(panel, x, static_cast<int>(k));
      const Eigen::MatrixXd pl = interpolation_matrix(nodes, split.left.nodes);
      const Eigen::MatrixXd pr = interpolation_matrix(nodes, split.right.nodes);
      Eigen::VectorXd gl(k), gr(k), dl(k), dr(k);
      for (Eigen::Index l = 0; l < k; ++l) {
        gl(l) = split.left.weights(l) * kernel_.value(x - split.left.nodes(l));
        gr(l) = split.right.weights(l) * kernel_.value(x - split.right.nodes(l));
        dl(l) = split.left.weights(l) * kernel_.deriv(x - split.left.nodes(l));
        dr(l) = split.right.weights(l) * kernel_.deriv(x - split.right.nodes(l));
      }
      nv.row(j) = gl.transpose() * pl + gr.transpose() * pr;
      nd.row(j) = dl.transpose() * pl + dr.transpose() * pr;
    }
    near_value_[i] = std::move(nv);
    near_deriv_[i] = std::move(nd);
  }

  if (!materialized_) return;
  const Eigen::Index n = mesh_.size();
  const Eigen::VectorXd& x = mesh_.nodes();
  const Eigen::VectorXd& w = mesh_.weights();
  value_.resize(n, n);
  deriv_.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      value_(i, j) = w(j) * kernel_.value(x(i) - x(j));
      deriv_(i, j) = (i / k == j / k) ? 0.0 : w(j) * kernel_.deriv(x(i) - x(j));
    }
  }
  for (Eigen::Index i = 0; i < panels; ++i) {
    value_.block(i * k, i * k, k, k) = near_value_[i];
    deriv_.block(i * k, i * k, k, k) = near_deriv_[i];
  }
}

const Eigen::MatrixXd& LayerPotential::value_matrix() const {
  if (!materialized_) throw Error(ErrorKind::parameter, "layer potential is not materialized");
  return value_;
}

const Eigen::MatrixXd& LayerPotential::deriv_matrix() const {
  if (!materialized_) throw Error(ErrorKind::parameter, "layer potential is not materialized");
  return deriv_;
}

Eigen::RowVectorXd LayerPotential::eval_weights(double x, bool derivative, Side side) const {
  const double L = mesh_.length();
  if (x < 0.0 || x > L) x = floor_mod(x, L);
  const Eigen::Index k = mesh_.order();
  const Eigen::Index target = mesh_.locate(x, side);
  const Eigen::VectorXd& nodes = mesh_.nodes();
  const Eigen::VectorXd& w = mesh_.weights();

  auto kern = [&](double d) { return derivative ? kernel_.deriv(d) : kernel_.value(d); };

  Eigen::RowVectorXd row(mesh_.size());
  for (Eigen::Index j = 0; j < mesh_.size(); ++j) {
    if (j / k == target) continue;
    row(j) = w(j) * kern(x - nodes(j));
  }
  const Panel panel = mesh_.panel(target);
  const Eigen::VectorXd pnodes = mesh_.panel_nodes(target);
  if (panel.a < x && x < panel.b) {
    const SplitRule split = split_rule(panel, x, static_cast<int>(k));
    Eigen::VectorXd gl(k), gr(k);
    for (Eigen::Index l = 0; l < k; ++l) {
      gl(l) = split.left.weights(l) * kern(x - split.left.nodes(l));
      gr(l) = split.right.weights(l) * kern(x - split.right.nodes(l));
    }
    row.segment(target * k, k) = gl.transpose() * interpolation_matrix(pnodes, split.left.nodes) +
                                 gr.transpose() * interpolation_matrix(pnodes, split.right.nodes);
  } else {
    // The kink sits on the panel edge, so the plain rule is already accurate.
    for (Eigen::Index l = 0; l < k; ++l) row(target * k + l) = w(target * k + l) * kern(x - pnodes(l));
  }
  return row;
}

NystromSystem::NystromSystem(std::shared_ptr<const LayerPotential> layer, Eigen::VectorXd p, Eigen::VectorXd q,
                             std::optional<NodalConstraint> constraint, const AssemblyOptions& options)
    : layer_(std::move(layer)), p_(std::move(p)), q_(std::move(q)), constraint_(std::move(constraint)) {
  const Eigen::Index n = size();
  if (p_.size() != n || q_.size() != n) throw Error(ErrorKind::assembly, "coefficient sizes do not match the mesh");
  const bool q_zero = (q_.array() == 0.0).all();
  if (q_zero && !constraint_)
    throw Error(ErrorKind::well_posedness, "q vanishes identically; a linear constraint is required");
  if (!q_zero && constraint_)
    throw Error(ErrorKind::well_posedness, "a constraint may only be combined with q = 0");
  if (constraint_ && constraint_->weight.size() != n)
    throw Error(ErrorKind::assembly, "constraint weight size does not match the mesh");
  if (!p_.allFinite() || !q_.allFinite()) throw Error(ErrorKind::assembly, "coefficients are not finite");

  const PanelMesh& m = mesh();
  embedding_ = weighted_embedding(m.weights());
  dense_ = layer_->materialized() && n <= options.dense_limit;
  if (!dense_) return;

  const Eigen::MatrixXd& S = layer_->value_matrix();
  const Eigen::MatrixXd& dS = layer_->deriv_matrix();
  const double L = m.length();
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  A.noalias() += p_.asDiagonal() * dS;
  Eigen::RowVectorXd mean_row = Eigen::RowVectorXd::Zero(n);
  if (kernel() == KernelKind::poisson) {
    mean_row = m.weights().transpose() / L;
    A.noalias() += q_.asDiagonal() * S;
    A.noalias() += (q_.array() - 1.0).matrix() * mean_row;
  } else {
    A.noalias() += (q_.array() + 1.0).matrix().asDiagonal() * S;
  }
  if (constraint_) {
    const Eigen::VectorXd wc = m.weights().cwiseProduct(constraint_->weight);
    const Eigen::RowVectorXd c = wc.transpose() * S + wc.sum() * mean_row;
    A.rowwise() += c;
  }
  matrix_ = embedding_.conjugate(A);
}

const Eigen::MatrixXd& NystromSystem::matrix() const {
  if (!dense_) throw Error(ErrorKind::parameter, "system is applied matrix-free");
  return matrix_;
}

namespace {

Eigen::VectorXd sample(const Sampler& fn, const Eigen::VectorXd& x) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(x.size());
  if (fn) {
    for (Eigen::Index i = 0; i < x.size(); ++i) v(i) = fn(x(i));
  }
  return v;
}

}  // namespace

NystromSystem assemble(const PeriodicODEProblem& problem, const PanelMesh& mesh, const AssemblyOptions& options) {
  const double L = mesh.length();
  if (!(problem.period > 0.0) || std::abs(problem.period - L) > 1e-12 * L)
    throw Error(ErrorKind::assembly, "mesh length does not match the period");
  for (double b : problem.breakpoints) {
    const double x = floor_mod(b, L);
    if (!mesh.is_boundary(x, 1e-12 * L) && !mesh.is_boundary(x + L, 1e-12 * L))
      throw Error(ErrorKind::assembly, "mesh does not resolve a declared coefficient breakpoint");
  }
  const Eigen::VectorXd& x = mesh.nodes();
  std::optional<NodalConstraint> constraint;
  if (problem.constraint) constraint = NodalConstraint{sample(problem.constraint->weight, x), problem.constraint->value};
  if (problem.constraint && !problem.constraint->weight)
    throw Error(ErrorKind::assembly, "constraint needs a weight function");
  auto layer = std::make_shared<const LayerPotential>(mesh, problem.kernel, mesh.size() <= options.dense_limit);
  return NystromSystem(std::move(layer), sample(problem.p, x), sample(problem.q, x), std::move(constraint), options);
}

ModeSolution<double> solve(const NystromSystem& system, const PeriodicODEProblem& problem,
                           const SolverOptions& options) {
  return solve<double>(system, sample(problem.f, system.mesh().nodes()), options);
}

ModeSolution<double> solve_ode(const PeriodicODEProblem& problem, const PanelMesh& mesh, const SolverOptions& options,
                               const AssemblyOptions& assembly) {
  return solve(assemble(problem, mesh, assembly), problem, options);
}

}  // namespace lbsr

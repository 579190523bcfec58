// End-to-end checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include "lbsr/harness.hpp"
#include "lbsr/kernels.hpp"
#include "lbsr/quadrature.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace lbsr;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

template <typename Fn>
void guarded(int id, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

std::vector<ConvergenceRow> sorted_by_sweep(std::vector<ConvergenceRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.sweep < b.sweep; });
  return rows;
}

void kernel_identities() {
  const double L = 2 * kPi;
  double worst = 0.0;
  worst = std::max(worst, std::abs(g_poisson(0.0, L) + kPi / 6));
  worst = std::max(worst, std::abs(g_poisson(L / 2, L) - kPi / 12));

  // Mean zero: G_L is a quadratic on (0, L), so a Gauss rule on it is exact.
  const GaussRule rule = gauss_legendre(8, 0.0, L);
  double mean = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) mean += rule.weights(i) * g_poisson(rule.nodes(i), L);
  worst = std::max(worst, std::abs(mean));

  // int G_Y(x - t) cos(k t) dt = -cos(k x) / (1 + k^2); the kernel is smooth
  // away from t = x, so integrate over (x - L, x) in pieces.
  const double k = 2 * kPi / L;
  for (double x : {0.0, 0.7, 2.9, 5.5}) {
    double acc = 0.0;
    const int pieces = 8;
    for (int p = 0; p < pieces; ++p) {
      const GaussRule r = gauss_legendre(30, x - L + p * L / pieces, x - L + (p + 1) * L / pieces);
      for (Eigen::Index i = 0; i < r.nodes.size(); ++i)
        acc += r.weights(i) * g_yukawa(x - r.nodes(i), L) * std::cos(k * r.nodes(i));
    }
    worst = std::max(worst, std::abs(acc + std::cos(k * x) / (1 + k * k)));
  }
  report(1, worst <= 1e-12, fmt("max identity defect %.2e (tol 1e-12)", worst));
}

void smooth_ode(OdeComparison& out) {
  out = run_ode_comparison(default_config("ode-compare"));
  const auto p = sorted_by_sweep(out.record.series("poisson"));
  const auto y = sorted_by_sweep(out.record.series("yukawa"));
  bool ok = p.size() == y.size() && !p.empty();
  double best_p = 1.0, best_y = 1.0, ratio = 1.0;
  for (std::size_t i = 0; ok && i < p.size(); ++i) {
    if (p[i].sweep <= 512) {
      best_p = std::min(best_p, p[i].error);
      best_y = std::min(best_y, y[i].error);
    }
    ratio = std::max(ratio, std::max(p[i].error, y[i].error) / std::min(p[i].error, y[i].error));
  }
  ok = ok && best_p <= 1e-11 && best_y <= 1e-11 && ratio <= 10.0;
  report(2, ok,
         fmt("best error poisson %.2e yukawa %.2e (tol 1e-11), worst kernel ratio %.2f (tol 10)", best_p, best_y,
             ratio));
}

void torus(ConvergenceRecord& out) {
  out = run_torus(default_config("torus"));
  std::set<int> nthetas;
  for (const auto& r : out.rows) nthetas.insert(r.ntheta);
  bool monotone = true;
  for (int nt : nthetas) {
    const auto rows = sorted_by_sweep(out.series("torus", nt));
    double floor = 1.0;
    for (const auto& r : rows) floor = std::min(floor, r.error);
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].error > rows[i - 1].error && rows[i - 1].error > 2.0 * floor) monotone = false;
  }
  double final_error = -1.0;
  for (const auto& r : out.rows)
    if (r.ntheta == 64 && r.sweep == 512) final_error = r.error;
  const bool ok = monotone && final_error >= 0.0 && final_error <= 1e-9;
  report(3, ok, fmt("monotone in N_s: %s, error at N_theta=64 N_s=512 %.2e (tol 1e-9)", monotone ? "yes" : "no",
                    final_error));
}

void square_toroid(SquareToroidReport& out) {
  out = run_square_toroid(default_config("square-toroid"));
  bool ok = out.fits.size() == 3;
  std::string detail;
  for (const auto& [alpha, fit] : out.fits) {
    const double dev = std::abs(fit.slope - (1.0 + alpha));
    double seconds = 0.0;
    std::ostringstream name;
    name << "alpha=" << format_double(alpha);
    for (const auto& r : out.record.series(name.str())) seconds += r.seconds;
    ok = ok && dev <= 0.1 && seconds <= 60.0;
    detail += fmt("alpha %.3f order %.4f (want %.4f, %.1fs); ", alpha, fit.slope, 1.0 + alpha, seconds);
  }
  ok = ok && out.smooth_exact_error <= 1e-10 && out.smooth_direct_error <= 1e-10;
  detail += fmt("smooth 1 panel/face %.2e, direct 2 panels/face %.2e (tol 1e-10)", out.smooth_exact_error,
                out.smooth_direct_error);
  report(4, ok, detail);
}

void hodge() {
  const HodgeReport h = run_hodge(default_config("hodge"));
  const double basis = std::max(h.basis_residuals[0], h.basis_residuals[1]);
  const bool ok = h.panels == 2 && h.test_field_residual < 1e-13 && basis < 1e-13;
  report(5, ok, fmt("test-field residual %.2e, basis residual %.2e (tol 1e-13)", h.test_field_residual, basis));
}

void interfaces(const SquareToroidReport& sq) {
  double u = 0.0, du = 0.0;
  for (const auto& j : sq.interfaces) {
    u = std::max(u, j.u_jump);
    du = std::max(du, j.du_jump);
  }
  const bool ok = !sq.interfaces.empty() && u <= 1e-9 && du <= 1e-9;
  report(6, ok,
         fmt("%zu edge checks, max relative jump u %.2e u' %.2e (tol 1e-9)", sq.interfaces.size(), u, du));
}

void conditioning(const ConvergenceRecord& torus, const SquareToroidReport& sq) {
  double worst = 0.0;
  std::string where;
  // coarse_is_small: the sweep is N_s (grows with refinement) rather than h_final.
  auto check = [&](const std::vector<ConvergenceRow>& rows, const std::string& label, bool coarse_is_small) {
    const auto s = sorted_by_sweep(rows);
    if (s.size() < 2) return;
    const auto& coarse = coarse_is_small ? s.front() : s.back();
    const auto& fine = coarse_is_small ? s.back() : s.front();
    const double growth = static_cast<double>(fine.iterations) / coarse.iterations;
    if (growth > worst) {
      worst = growth;
      where = label + fmt(" %d -> %d", coarse.iterations, fine.iterations);
    }
  };
  std::set<int> nthetas;
  for (const auto& r : torus.rows) nthetas.insert(r.ntheta);
  for (int nt : nthetas) check(torus.series("torus", nt), fmt("torus N_theta=%d", nt), true);
  std::set<std::string> names;
  for (const auto& r : sq.record.rows) names.insert(r.series);
  for (const auto& n : names) check(sq.record.series(n), n, false);
  report(7, worst > 0.0 && worst <= 2.0, fmt("worst coarse-to-fine iteration growth %.2fx at %s (tol 2x)", worst,
                                             where.c_str()));
}

void oracle_equivalence(const OdeComparison& ode) {
  // Dense vs GMRES on a surface problem as well as on the ODE.
  ExperimentConfig cfg = default_config("torus");
  const auto disc = discretization_from(cfg, 4, 16, 0);
  const auto mp = restrict_newtonian(disc, cfg.rhs.center);
  LBOptions opts = lb_options(cfg.solver);
  const auto iterative = solve_lb(mp.f, opts);
  opts.solver.kind = SolverKind::dense;
  const auto direct = solve_lb(mp.f, opts);
  const double surface_gap = relative_l2_error(iterative.field, direct.field);

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double quad = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const double L = 1.0 + 4.0 * U(rng);
    std::vector<double> bps = {0.0};
    for (int i = 0; i < 6; ++i) bps.push_back(L * U(rng));
    std::sort(bps.begin(), bps.end());
    const PanelMesh mesh = build_mesh(L, 1, bps, 16);
    const LayerPotential layer(mesh, KernelKind::poisson, true);
    // Piecewise quadratic density.
    std::vector<std::vector<double>> coeffs;
    Eigen::VectorXd sigma(mesh.size());
    for (Eigen::Index p = 0; p < mesh.num_panels(); ++p) {
      coeffs.push_back({U(rng) - 0.5, U(rng) - 0.5, U(rng) - 0.5});
      const double c = mesh.panel(p).a;
      for (Eigen::Index i = 0; i < mesh.order(); ++i) {
        const Eigen::Index n = p * mesh.order() + i;
        sigma(n) = oracles::eval_poly(coeffs.back(), mesh.nodes()(n), c);
      }
    }
    for (int t = 0; t < 30; ++t) {
      const double x = L * U(rng);
      double exact = 0.0;
      for (Eigen::Index p = 0; p < mesh.num_panels(); ++p)
        exact += oracles::poisson_panel_integral(mesh.panel(p).a, mesh.panel(p).b, x, L, coeffs[p], mesh.panel(p).a);
      quad = std::max(quad, std::abs(layer.eval_value(sigma, x) - exact));
    }
  }
  const double gap = std::max(ode.dense_gmres_gap, surface_gap);
  report(8, gap <= 1e-11 && quad <= 1e-13,
         fmt("dense/GMRES gap ODE %.2e surface %.2e (tol 1e-11), quadrature vs antiderivative %.2e (tol 1e-13)",
             ode.dense_gmres_gap, surface_gap, quad));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  OdeComparison ode;
  ConvergenceRecord tor;
  SquareToroidReport sq;
  bool have_ode = false, have_torus = false, have_square = false;

  guarded(1, kernel_identities);
  guarded(2, [&] {
    smooth_ode(ode);
    have_ode = true;
  });
  guarded(3, [&] {
    torus(tor);
    have_torus = true;
  });
  guarded(4, [&] {
    square_toroid(sq);
    have_square = true;
  });
  guarded(5, hodge);
  if (have_square)
    guarded(6, [&] { interfaces(sq); });
  else
    report(6, false, "square toroid study did not run");
  if (have_torus && have_square)
    guarded(7, [&] { conditioning(tor, sq); });
  else
    report(7, false, "prerequisite studies did not run");
  if (have_ode)
    guarded(8, [&] { oracle_equivalence(ode); });
  else
    report(8, false, "ODE study did not run");

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 8 criteria failed (%.1f s)\n", failures, secs);
  return failures == 0 ? 0 : 1;
}

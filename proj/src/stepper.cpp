#include "tumorsim/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tumorsim {

NonconvergedPolicy nonconverged_policy_from_string(std::string_view s) {
  if (s == "abort") return NonconvergedPolicy::abort;
  if (s == "accept") return NonconvergedPolicy::accept;
  throw std::invalid_argument("unknown non-convergence policy '" + std::string(s) + "' (expected abort|accept)");
}

std::string_view to_string(NonconvergedPolicy p) { return p == NonconvergedPolicy::abort ? "abort" : "accept"; }

void SchemeConfig::validate() const {
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw std::invalid_argument("scheme.dt must be finite and >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("scheme.tol must be > 0");
  if (n_iter < 1) throw std::invalid_argument("scheme.n_iter must be >= 1");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("scheme.t_end must be finite and >= 0");
  if (t_end > 0.0 && !(dt > 0.0)) throw std::invalid_argument("scheme.dt must be > 0 when t_end > 0");
  if (output_every < 1) throw std::invalid_argument("scheme.output_every must be >= 1");
  if (!(linear_tol > 0.0)) throw std::invalid_argument("scheme.linear_tol must be > 0");
  if (linear_max_iter < 1) throw std::invalid_argument("scheme.linear_max_iter must be >= 1");
}

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw SolverError(std::string("non-finite value in ") + what);
  }
}

void require_converged(const SolveReport& r, const char* what) {
  if (!r.converged) {
    std::ostringstream os;
    os << what << " solve did not converge (" << r.iterations << " iterations, relative residual "
       << r.final_relative_residual << ")";
    throw SolverError(os.str());
  }
}

}  // namespace

Stepper::Stepper(const Mesh& mesh, ModelParams params, SchemeConfig config, HaptotaxisMode mode,
                 std::optional<KernelSpec> kernel)
    : mesh_(&mesh), space_(mesh), params_(params), config_(config), mode_(mode) {
  params_.validate();
  config_.validate();
  if (mode_ == HaptotaxisMode::nonlocal) {
    if (!kernel) throw std::invalid_argument("nonlocal haptotaxis requires a kernel specification");
    stencil_.emplace(mesh, *kernel);
  }
  mass_ = space_.mass();
  stiffness_ = space_.stiffness();
  lumped_ = space_.lumped_mass();
  mde_matrix_ = space_.mass(1.0 + config_.dt * params_.lambda_M_dec);
  add_scaled(mde_matrix_, config_.dt * params_.D_M, stiffness_);
  if (config_.nutrient_dirichlet) dirichlet_nodes_ = mesh.boundary_nodes(Side::right);
}

SparseMatrix Stepper::nutrient_matrix(const State& k) const {
  const double dt = config_.dt;
  const auto t_q = space_.to_quadrature(k.phi_T);
  const auto n_q = space_.to_quadrature(k.phi_N);
  const auto s_q = space_.to_quadrature(k.phi_sigma);
  QuadratureField consumption(t_q.size());
  // Consumption f3(phi^k) phi_sigma^{k+1}: linear in the unknown, viable
  // fraction and saturation factor lagged.
  for (std::size_t q = 0; q < t_q.size(); ++q) {
    consumption[q] = dt * reactions({t_q[q], n_q[q], s_q[q], 0.0}, params_).f3;
  }
  auto a = space_.mass_weighted(consumption);
  add_scaled(a, 1.0, mass_);
  add_scaled(a, dt * params_.D_sigma / params_.delta_sigma, stiffness_);
  return a;
}

std::vector<double> Stepper::solve_nutrient(const State& n, const State& k, SolveReport* report) const {
  auto a = nutrient_matrix(k);
  auto b = spmv(mass_, n.phi_sigma);
  if (params_.chi_C != 0.0) {
    const auto chemo = spmv(stiffness_, k.phi_T);
    const double c = config_.dt * params_.chi_C * params_.D_sigma;
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += c * chemo[i];
  }
  apply_dirichlet(a, b, dirichlet_nodes_, 1.0);
  auto res = cg_solve(a, b, solver_options(), k.phi_sigma);
  if (report) *report = res.report;
  require_converged(res.report, "nutrient");
  require_finite(res.x, "nutrient");
  return std::move(res.x);
}

std::pair<std::vector<double>, std::vector<double>> Stepper::solve_tumor_chempot(const State& n, const State& k,
                                                                                 SolveReport* report) const {
  const double dt = config_.dt;
  const auto& p = params_;
  const std::size_t nn = space_.num_dofs();
  const auto tk_q = space_.to_quadrature(k.phi_T);
  const auto nk_q = space_.to_quadrature(k.phi_N);
  const auto sk_q = space_.to_quadrature(k.phi_sigma);
  const auto tn_q = space_.to_quadrature(n.phi_T);
  const auto sn_q = space_.to_quadrature(n.phi_sigma);
  const std::size_t nq = tk_q.size();

  QuadratureField mob(nq), d2psi(nq), mu_src(nq), growth(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    mob[q] = dt * mobility(tk_q[q], nk_q[q], p);
    const auto pk = potential(tk_q[q], p.E_bar);
    d2psi[q] = pk.d2psi_c;
    mu_src[q] = pk.dpsi_c - pk.d2psi_c * tk_q[q] - potential(tn_q[q], p.E_bar).dpsi_e - p.chi_C * sn_q[q];
    const auto r = reactions({tk_q[q], nk_q[q], sk_q[q], 0.0}, p);
    growth[q] = r.f1 * sk_q[q];
  }

  // Both rows use the lumped mass L, which keeps the convex-splitting energy
  // estimate and lets mu be eliminated exactly:
  //   (1 + dt apo) L phi + dt K_m mu = L phi_n + dt (J, grad) + dt (f1 sigma) - dt lambda_N^dec L phi_N
  //   L mu - A phi = (psi_c' - psi_c'' phi_k - psi_e'(phi_n) - chi_C sigma_n),
  //   A = M[psi_c''] + eps^2 K + delta_T M.
  // Substituting mu = L^{-1} (r2 + A phi) leaves the Schur system
  //   ((1 + dt apo) L + K_m L^{-1} A) phi = r1 - K_m L^{-1} r2.
  const auto km = space_.stiffness_weighted(mob);
  auto a = space_.mass_weighted(d2psi);
  add_scaled(a, p.eps_T * p.eps_T, stiffness_);
  if (p.delta_T != 0.0) add_scaled(a, p.delta_T, mass_);

  std::vector<double> inv_lumped(nn);
  for (std::size_t i = 0; i < nn; ++i) inv_lumped[i] = 1.0 / lumped_[i];

  const auto grow = space_.weighted_rhs(growth);
  std::vector<double> flux(nn, 0.0);
  if (p.chi_H != 0.0) {
    flux = space_.flux_rhs(adhesion_flux(mode_, space_, k.phi_T, k.phi_N, k.theta, p,
                                         stencil_ ? &*stencil_ : nullptr));
  }
  const auto r2 = space_.weighted_rhs(mu_src);
  const double lam_dec = p.lambda_N_dec();
  std::vector<double> r1(nn), l_r2(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    r1[i] = lumped_[i] * n.phi_T[i] + dt * (flux[i] + grow[i] - lam_dec * lumped_[i] * k.phi_N[i]);
    l_r2[i] = inv_lumped[i] * r2[i];
  }
  const auto km_r2 = spmv(km, l_r2);
  for (std::size_t i = 0; i < nn; ++i) r1[i] -= km_r2[i];
  require_finite(r1, "tumor right-hand side");

  auto schur = multiply(km, inv_lumped, a);
  for (std::size_t i = 0; i < nn; ++i) {
    const double diag = (1.0 + dt * p.lambda_T_apo) * lumped_[i];
    const std::size_t pos = schur.find(i, i);
    if (pos == schur.nnz()) throw SolverError("tumor Schur complement lost its diagonal");
    schur.values[pos] += diag;
  }
  auto res = bicgstab_solve(schur, r1, solver_options(), k.phi_T);
  if (report) *report = res.report;
  require_converged(res.report, "tumor/potential");
  require_finite(res.x, "tumor/potential");
  auto mu = spmv(a, res.x);
  for (std::size_t i = 0; i < nn; ++i) mu[i] = inv_lumped[i] * (r2[i] + mu[i]);
  return {std::move(res.x), std::move(mu)};
}

std::vector<double> Stepper::update_necrotic(const State& n, const State& k) const {
  const double dt = config_.dt;
  const auto& p = params_;
  std::vector<double> out(n.phi_N.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double source = p.lambda_VN * sigmoid(p.sigma_VN - k.phi_sigma[i], p.eps_sigmoid) *
                          cutoff(k.phi_T[i] - k.phi_N[i]);
    out[i] = (n.phi_N[i] + dt * source) / (1.0 + dt * p.lambda_N_deg);
  }
  return out;
}

std::vector<double> Stepper::solve_mde(const State& n, const State& k, SolveReport* report) const {
  const auto& p = params_;
  const auto t_q = space_.to_quadrature(k.phi_T);
  const auto n_q = space_.to_quadrature(k.phi_N);
  const auto s_q = space_.to_quadrature(k.phi_sigma);
  const auto m_q = space_.to_quadrature(k.phi_M);
  const auto th_q = space_.to_quadrature(k.theta);
  QuadratureField source(t_q.size());
  for (std::size_t q = 0; q < t_q.size(); ++q) {
    source[q] = config_.dt * th_q[q] * reactions({t_q[q], n_q[q], s_q[q], m_q[q]}, p).f4;
  }
  auto b = spmv(mass_, n.phi_M);
  const auto src = space_.weighted_rhs(source);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] += src[i];
  auto res = cg_solve(mde_matrix_, b, solver_options(), k.phi_M);
  if (report) *report = res.report;
  require_converged(res.report, "MDE");
  require_finite(res.x, "MDE");
  return std::move(res.x);
}

std::vector<double> Stepper::update_ecm(const State& n, const State& k) const {
  const double c = config_.dt * params_.lambda_theta_deg;
  std::vector<double> out(n.theta.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = n.theta[i] / (1.0 + c * cutoff(k.phi_M[i]));
  return out;
}

std::pair<State, StepReport> Stepper::gauss_seidel_step(const State& n) const {
  if (!n.consistent(space_.num_dofs())) throw std::invalid_argument("gauss_seidel_step: state does not match mesh");
  State it = n;
  StepReport report;
  for (int k = 1; k <= config_.n_iter; ++k) {
    const auto previous = it.phi_T;
    it.phi_sigma = solve_nutrient(n, it, &report.nutrient);
    auto [phi, mu] = solve_tumor_chempot(n, it, &report.tumor);
    it.phi_T = std::move(phi);
    it.mu = std::move(mu);
    it.phi_N = update_necrotic(n, it);
    it.phi_M = solve_mde(n, it, &report.mde);
    it.theta = update_ecm(n, it);

    double inc = 0.0;
    for (std::size_t i = 0; i < previous.size(); ++i) inc = std::max(inc, std::abs(it.phi_T[i] - previous[i]));
    report.gauss_seidel_iterations = k;
    report.final_increment = inc;
    if (inc < config_.tol) {
      report.converged = true;
      break;
    }
  }
  it.t = n.t + config_.dt;
  return {std::move(it), report};
}

int step_count(double t_end, double dt) {
  if (t_end <= 0.0) return 0;
  return static_cast<int>(std::ceil(t_end / dt - 1e-9));
}

RunResult run(const Stepper& stepper, State initial, const RunHooks& hooks) {
  const auto& cfg = stepper.config();
  const auto& space = stepper.space();
  RunResult out;
  const double t0 = initial.t;
  const int steps = step_count(cfg.t_end - t0, cfg.dt);

  auto emit = [&](const State& s, const StepReport* rep) {
    auto row = summarize(s, space, stepper.params(), rep ? rep->gauss_seidel_iterations : 0);
    if (hooks.on_output) hooks.on_output(s, rep, row);
    out.rows.push_back(row);
  };

  State current = std::move(initial);
  emit(current, nullptr);
  for (int s = 1; s <= steps; ++s) {
    std::pair<State, StepReport> next;
    try {
      next = stepper.gauss_seidel_step(current);
    } catch (const SolverError& e) {
      std::ostringstream os;
      os << "step to t = " << t0 + s * cfg.dt << " failed: " << e.what();
      throw SolverError(os.str());
    }
    // t from the step index, not accumulated.
    next.first.t = t0 + s * cfg.dt;
    if (!next.second.converged && cfg.on_nonconverged == NonconvergedPolicy::abort) {
      std::ostringstream os;
      os << "Gauss-Seidel loop did not converge at t = " << next.first.t << " after "
         << next.second.gauss_seidel_iterations << " iterations (increment " << next.second.final_increment << ")";
      throw SolverError(os.str());
    }
    if (hooks.on_step) hooks.on_step(current, next.first, next.second);
    out.reports.push_back(next.second);
    current = std::move(next.first);
    out.steps = s;
    if (s % cfg.output_every == 0 || s == steps) emit(current, &out.reports.back());
  }
  out.final_state = std::move(current);
  return out;
}

}  // namespace tumorsim

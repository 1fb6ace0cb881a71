#include "tumorsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tumorsim {

DiagnosticsRow summarize(const State& state, const P1Space& space, const ModelParams& params,
                         int gauss_seidel_iterations) {
  if (!state.consistent(space.num_dofs())) throw std::invalid_argument("summarize: state does not match the mesh");
  DiagnosticsRow row;
  row.t = state.t;
  row.tumor_mass = space.integrate_nodal(state.phi_T);
  row.necrotic_mass = space.integrate_nodal(state.phi_N);
  row.nutrient_mass = space.integrate_nodal(state.phi_sigma);
  row.mde_mass = space.integrate_nodal(state.phi_M);
  row.ecm_total = space.integrate_nodal(state.theta);
  row.energy = energy(space, state.phi_T, state.phi_sigma, params);
  const auto fields = state.fields();
  for (std::size_t f = 0; f < fields.size(); ++f) {
    const auto [lo, hi] = std::minmax_element(fields[f]->begin(), fields[f]->end());
    row.ranges[f] = {*lo, *hi};
  }
  row.gauss_seidel_iterations = gauss_seidel_iterations;
  return row;
}

std::string csv_header() {
  std::string h = "t,tumor_mass,necrotic_mass,nutrient_mass,mde_mass,ecm_total,energy";
  for (const auto name : State::field_names) {
    h += ",min_";
    h += name;
    h += ",max_";
    h += name;
  }
  h += ",gauss_seidel_iterations";
  return h;
}

namespace {

void append_real(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += ',';
  out += buf;
}

}  // namespace

std::string csv_row(const DiagnosticsRow& r) {
  std::string out;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", r.t);
  out += buf;
  for (double v : {r.tumor_mass, r.necrotic_mass, r.nutrient_mass, r.mde_mass, r.ecm_total, r.energy}) {
    append_real(out, v);
  }
  for (const auto& range : r.ranges) {
    append_real(out, range.min);
    append_real(out, range.max);
  }
  out += ',';
  out += std::to_string(r.gauss_seidel_iterations);
  return out;
}

std::vector<double> ecm_closed_form(std::span<const double> theta0, std::span<const MdeSnapshot> history,
                                    double lambda_theta_deg, double t) {
  if (history.empty()) throw std::invalid_argument("ecm_closed_form: empty MDE history");
  if (history.front().t > 0.0) throw std::invalid_argument("ecm_closed_form: history must start at t = 0");
  if (history.back().t < t) throw std::invalid_argument("ecm_closed_form: history ends before the requested time");
  for (const auto& snap : history) {
    if (snap.phi_M.size() != theta0.size()) throw std::invalid_argument("ecm_closed_form: snapshot size mismatch");
  }
  const std::size_t n = theta0.size();
  std::vector<double> integral(n, 0.0);
  auto rate = [&](const MdeSnapshot& s, std::size_t i) { return lambda_theta_deg * cutoff(s.phi_M[i]); };
  for (std::size_t k = 0; k + 1 < history.size() && history[k].t < t; ++k) {
    const auto& a = history[k];
    const auto& b = history[k + 1];
    if (b.t < a.t) throw std::invalid_argument("ecm_closed_form: history not sorted in time");
    const double t_hi = std::min(b.t, t);
    const double dt = t_hi - a.t;
    if (dt <= 0.0) continue;
    const double s = (b.t > a.t) ? dt / (b.t - a.t) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ra = rate(a, i);
      const double rb_full = rate(b, i);
      const double rb = ra + s * (rb_full - ra);
      integral[i] += 0.5 * dt * (ra + rb);
    }
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = theta0[i] * std::exp(-integral[i]);
  return out;
}

namespace {

// Seven-point rule of degree 5 on the reference triangle (barycentric, weight).
struct BaryPoint {
  double l0, l1, l2, w;
};

constexpr double a1 = 0.059715871789770, b1 = 0.470142064105115;
constexpr double a2 = 0.797426985353087, b2 = 0.101286507323456;
constexpr double w1 = 0.132394152788506, w2 = 0.125939180544827;
constexpr BaryPoint degree5_rule[7] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {a1, b1, b1, w1}, {b1, a1, b1, w1}, {b1, b1, a1, w1},
    {a2, b2, b2, w2}, {b2, a2, b2, w2}, {b2, b2, a2, w2},
};

}  // namespace

double l2_error(const P1Space& space, std::span<const double> nodal, const std::function<double(const Vec2&)>& exact) {
  const auto& mesh = space.mesh();
  double sum = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& t = mesh.element(e);
    const auto& p0 = mesh.node(t[0]);
    const auto& p1 = mesh.node(t[1]);
    const auto& p2 = mesh.node(t[2]);
    const double area = space.geometry(e).area;
    for (const auto& q : degree5_rule) {
      const Vec2 x{q.l0 * p0[0] + q.l1 * p1[0] + q.l2 * p2[0], q.l0 * p0[1] + q.l1 * p1[1] + q.l2 * p2[1]};
      const double uh = q.l0 * nodal[t[0]] + q.l1 * nodal[t[1]] + q.l2 * nodal[t[2]];
      const double d = uh - exact(x);
      sum += area * q.w * d * d;
    }
  }
  return std::sqrt(sum);
}

std::vector<ConvergenceRow> manufactured_convergence_study(std::span<const int> resolutions,
                                                           const ManufacturedOptions& opts) {
  if (resolutions.size() < 3) throw std::invalid_argument("convergence study needs at least three resolutions");
  constexpr double pi = std::numbers::pi;
  const double a = opts.diffusivity;
  const double c = opts.reaction;
  auto exact = [&](const Vec2& x, double t) {
    return opts.amplitude * std::exp(-t) * std::cos(0.5 * pi * x[0]) * std::cos(0.5 * pi * x[1]);
  };
  // u_t - a Lap u + c u for the exact solution.
  const double forcing_factor = -1.0 + a * pi * pi / 2.0 + c;
  const int steps = static_cast<int>(std::llround(opts.t_end / opts.dt));

  std::vector<ConvergenceRow> rows;
  for (const int n : resolutions) {
    const Mesh mesh(n);
    const P1Space space(mesh);
    const auto mass = space.mass();
    auto system = space.mass(1.0 + opts.dt * c);
    add_scaled(system, opts.dt * a, space.stiffness());

    std::vector<std::size_t> boundary;
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      if (mesh.on_boundary(i)) boundary.push_back(i);
    }
    auto u = space.interpolate([&](const Vec2& x) { return exact(x, 0.0); });
    SolverOptions solver{opts.linear_tol, 10000};
    for (int s = 1; s <= steps; ++s) {
      const double t = s * opts.dt;
      auto rhs = spmv(mass, u);
      const auto load = space.weighted_rhs(
          [&](const QuadraturePoint& qp) { return forcing_factor * exact(qp.x, t); });
      for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += opts.dt * load[i];
      auto a_bc = system;
      apply_dirichlet(a_bc, rhs, boundary, 0.0);
      auto res = cg_solve(a_bc, rhs, solver, u);
      if (!res.report.converged) throw std::runtime_error("manufactured study: CG did not converge");
      u = std::move(res.x);
    }
    const double t_end = steps * opts.dt;
    const double err = l2_error(space, u, [&](const Vec2& x) { return exact(x, t_end); });
    double order = std::numeric_limits<double>::quiet_NaN();
    if (!rows.empty() && err > 0.0 && rows.back().l2_error > 0.0) {
      order = std::log(rows.back().l2_error / err) / std::log(rows.back().h / mesh.h());
    }
    rows.push_back({n, mesh.h(), err, order});
  }
  return rows;
}

namespace {

double smooth_theta(const Vec2& x) { return std::sin(std::numbers::pi * x[0]) * std::cos(std::numbers::pi * x[1]); }

Vec2 smooth_theta_gradient(const Vec2& x) {
  constexpr double pi = std::numbers::pi;
  return {pi * std::cos(pi * x[0]) * std::cos(pi * x[1]), -pi * std::sin(pi * x[0]) * std::sin(pi * x[1])};
}

double inf_norm(const Vec2& x) { return std::max(std::abs(x[0]), std::abs(x[1])); }

}  // namespace

std::vector<KernelCheckRow> kernel_consistency_table(double eps, int n_per_side, OmegaMode mode, int levels) {
  if (levels < 1) throw std::invalid_argument("kernel_consistency_table: levels must be >= 1");
  const double c = mode == OmegaMode::paper_dot ? 0.5 : 1.0;
  std::vector<KernelCheckRow> rows;
  for (int l = 0; l < levels; ++l) {
    const int n = n_per_side << l;
    const double e = eps / static_cast<double>(1 << l);
    const Mesh mesh(n);
    const auto stencil = build_convolution_stencil(mesh, KernelSpec::make(e, mode));
    std::vector<double> theta(mesh.num_nodes());
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = smooth_theta(mesh.node(i));
    const auto conv = apply_convolution(stencil, theta);
    double err = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (inf_norm(mesh.node(i)) > 1.0 - 2.0 * e + 1e-12) continue;
      const auto g = smooth_theta_gradient(mesh.node(i));
      err = std::max(err, std::hypot(conv[i][0] - c * g[0], conv[i][1] - c * g[1]));
    }
    rows.push_back({n, mesh.h(), e, err});
  }
  return rows;
}

GradientRatio linear_gradient_ratio(const Mesh& mesh, const ConvolutionStencil& stencil, const Vec2& a) {
  const double aa = a[0] * a[0] + a[1] * a[1];
  if (!(aa > 0.0)) throw std::invalid_argument("linear_gradient_ratio: a must be nonzero");
  std::vector<double> theta(mesh.num_nodes());
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = a[0] * mesh.node(i)[0] + a[1] * mesh.node(i)[1];
  const auto conv = apply_convolution(stencil, theta);
  const double eps = stencil.spec().eps;
  GradientRatio r;
  r.min = std::numeric_limits<double>::infinity();
  r.max = -r.min;
  double sum = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (inf_norm(mesh.node(i)) > 1.0 - eps + 1e-12) continue;
    const double ratio = (conv[i][0] * a[0] + conv[i][1] * a[1]) / aa;
    r.min = std::min(r.min, ratio);
    r.max = std::max(r.max, ratio);
    sum += ratio;
    ++r.nodes;
  }
  if (r.nodes == 0) throw std::invalid_argument("linear_gradient_ratio: no node has its kernel box inside the domain");
  r.mean = sum / static_cast<double>(r.nodes);
  return r;
}

double flux_coherence(const Mesh& mesh, const KernelSpec& spec, const ModelParams& params) {
  const P1Space space(mesh);
  const auto stencil = build_convolution_stencil(mesh, spec);
  const std::vector<double> phi_T(mesh.num_nodes(), 1.0);
  const std::vector<double> phi_N(mesh.num_nodes(), 0.0);
  const auto theta = space.interpolate(smooth_theta);
  const auto local = adhesion_flux(HaptotaxisMode::local, space, phi_T, phi_N, theta, params, nullptr);
  const auto nonlocal = adhesion_flux(HaptotaxisMode::nonlocal, space, phi_T, phi_N, theta, params, &stencil);
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& t = mesh.element(e);
    bool interior = true;
    for (auto v : t) interior = interior && inf_norm(mesh.node(v)) <= 1.0 - spec.eps + 1e-12;
    if (!interior) continue;
    for (int q = 0; q < P1Space::points_per_element; ++q) {
      const auto& jl = local[P1Space::points_per_element * e + q];
      const auto& jn = nonlocal[P1Space::points_per_element * e + q];
      diff += (jl[0] - jn[0]) * (jl[0] - jn[0]) + (jl[1] - jn[1]) * (jl[1] - jn[1]);
      ref += jl[0] * jl[0] + jl[1] * jl[1];
    }
  }
  if (!(ref > 0.0)) throw std::invalid_argument("flux_coherence: local flux vanishes on the interior");
  return std::sqrt(diff / ref);
}

}  // namespace tumorsim

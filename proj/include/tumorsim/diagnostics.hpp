#pragma once

#include <cstddef>
#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tumorsim/fem.hpp"
#include "tumorsim/model.hpp"
#include "tumorsim/nonlocal.hpp"
#include "tumorsim/state.hpp"

namespace tumorsim {

struct FieldRange {
  double min = 0.0;
  double max = 0.0;
};

struct DiagnosticsRow {
  double t = 0.0;
  double tumor_mass = 0.0;
  double necrotic_mass = 0.0;
  double nutrient_mass = 0.0;
  double mde_mass = 0.0;
  double ecm_total = 0.0;
  double energy = 0.0;
  /// Ordered as State::field_names.
  std::array<FieldRange, 6> ranges{};
  int gauss_seidel_iterations = 0;
};

DiagnosticsRow summarize(const State& state, const P1Space& space, const ModelParams& params,
                         int gauss_seidel_iterations = 0);

/// Column names for csv_row.
std::string csv_header();
/// One comma-separated line, reals printed with 17 significant digits.
std::string csv_row(const DiagnosticsRow& row);

struct MdeSnapshot {
  double t;
  std::vector<double> phi_M;
};

/// theta0 * exp(-\int_0^t lambda_deg C(phi_M(s)) ds), with the time integral
/// taken by the trapezoidal rule over the stored snapshots (linearly
/// interpolated at t when t falls between two of them). The history must be
/// sorted in time, start at 0 and reach t; otherwise std::invalid_argument.
std::vector<double> ecm_closed_form(std::span<const double> theta0, std::span<const MdeSnapshot> history,
                                    double lambda_theta_deg, double t);

struct ManufacturedOptions {
  double amplitude = 1.0;
  double diffusivity = 0.1;  // D_sigma / delta_sigma of the default parameters
  double reaction = 2.0;     // linear consumption rate
  double dt = 1e-4;
  double t_end = 0.05;
  double linear_tol = 1e-12;
};

struct ConvergenceRow {
  int n_per_side;
  double h;
  double l2_error;
  double order;  // NaN on the coarsest level
};

/// Backward-Euler P1 solves of the linear nutrient problem
///   u_t = a Lap u - c u + f
/// with exact solution A e^{-t} cos(pi x1 / 2) cos(pi x2 / 2), which vanishes
/// on the boundary; homogeneous Dirichlet data is imposed on all faces.
/// Reports the L2 error at t_end and log2(e_h / e_{h/2}).
std::vector<ConvergenceRow> manufactured_convergence_study(std::span<const int> resolutions,
                                                           const ManufacturedOptions& opts = {});

/// L2 distance between a P1 field and an analytic function, using a
/// seven-point degree-5 rule on every triangle.
double l2_error(const P1Space& space, std::span<const double> nodal, const std::function<double(const Vec2&)>& exact);

struct KernelCheckRow {
  int n_per_side;
  double h;
  double eps;
  /// max over nodes at least 2 eps from the boundary of |k*theta - c grad theta|
  double sup_error;
};

/// Consistency of the convolution for theta = sin(pi x1) cos(pi x2), with
/// c = 1/2 (paper_dot) or 1 (component_consistent). Level l uses eps / 2^l
/// on an n 2^l mesh, i.e. eps/h is held fixed.
std::vector<KernelCheckRow> kernel_consistency_table(double eps, int n_per_side, OmegaMode mode, int levels = 3);

struct GradientRatio {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t nodes = 0;
};

/// For theta = a . x, the ratio (k*theta) . a / |a|^2 over nodes whose
/// kernel box lies inside the domain (|x|_inf <= 1 - eps).
GradientRatio linear_gradient_ratio(const Mesh& mesh, const ConvolutionStencil& stencil, const Vec2& a);

/// Relative L2 difference of the local and nonlocal adhesion fluxes for
/// theta = sin(pi x1) cos(pi x2) and a fully viable tumor (phi_T = 1,
/// phi_N = 0), over quadrature points of elements at distance >= eps from
/// the boundary.
double flux_coherence(const Mesh& mesh, const KernelSpec& spec, const ModelParams& params = {});

}  // namespace tumorsim

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tumorsim/diagnostics.hpp"
#include "tumorsim/fem.hpp"
#include "tumorsim/mesh.hpp"
#include "tumorsim/model.hpp"
#include "tumorsim/nonlocal.hpp"
#include "tumorsim/sparse.hpp"
#include "tumorsim/state.hpp"

namespace tumorsim {

enum class NonconvergedPolicy { abort, accept };

NonconvergedPolicy nonconverged_policy_from_string(std::string_view s);
std::string_view to_string(NonconvergedPolicy p);

struct SchemeConfig {
  double dt = 0.01;
  /// Gauss-Seidel stopping threshold on max |phi_T^{k+1} - phi_T^k|.
  double tol = 1e-6;
  int n_iter = 100;
  double t_end = 15.0;
  int output_every = 10;
  double linear_tol = 1e-10;
  int linear_max_iter = 10000;
  NonconvergedPolicy on_nonconverged = NonconvergedPolicy::abort;
  /// phi_sigma = 1 on the x1 = 1 face.
  bool nutrient_dirichlet = true;

  void validate() const;
  bool operator==(const SchemeConfig&) const = default;
};

struct StepReport {
  int gauss_seidel_iterations = 0;
  double final_increment = 0.0;
  SolveReport nutrient;
  SolveReport tumor;
  SolveReport mde;
  bool converged = false;
};

/// Linear-solver failure or a non-finite value inside a time step.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Semi-implicit backward-Euler integrator, one Gauss-Seidel sweep per inner
/// iteration in the order nutrient -> (tumor, potential) -> necrotic -> MDE ->
/// ECM. Every sub-problem is linear: nonlinear coefficients are lagged at the
/// previous iterate, except the convex part of the double well, which gets
/// one Newton step about that iterate.
///
/// In the sub-solvers `k` is the current Gauss-Seidel iterate, already
/// holding the fields updated earlier in the same sweep.
class Stepper {
 public:
  Stepper(const Mesh& mesh, ModelParams params, SchemeConfig config, HaptotaxisMode mode,
          std::optional<KernelSpec> kernel = std::nullopt);

  const P1Space& space() const { return space_; }
  const ModelParams& params() const { return params_; }
  const SchemeConfig& config() const { return config_; }
  HaptotaxisMode mode() const { return mode_; }

  std::vector<double> solve_nutrient(const State& n, const State& k, SolveReport* report = nullptr) const;
  std::pair<std::vector<double>, std::vector<double>> solve_tumor_chempot(const State& n, const State& k,
                                                                          SolveReport* report = nullptr) const;
  std::vector<double> update_necrotic(const State& n, const State& k) const;
  std::vector<double> solve_mde(const State& n, const State& k, SolveReport* report = nullptr) const;
  std::vector<double> update_ecm(const State& n, const State& k) const;

  /// Nutrient system matrix after the Dirichlet rows are applied.
  SparseMatrix nutrient_matrix(const State& k) const;
  const SparseMatrix& mde_matrix() const { return mde_matrix_; }

  std::pair<State, StepReport> gauss_seidel_step(const State& n) const;

 private:
  SolverOptions solver_options() const { return {config_.linear_tol, config_.linear_max_iter}; }

  const Mesh* mesh_;
  P1Space space_;
  ModelParams params_;
  SchemeConfig config_;
  HaptotaxisMode mode_;
  std::optional<ConvolutionStencil> stencil_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
  SparseMatrix mde_matrix_;
  std::vector<double> lumped_;
  std::vector<std::size_t> dirichlet_nodes_;
};

struct RunHooks {
  /// Called at t = 0, every output_every steps and after the last step.
  /// `report` is null for the initial state.
  std::function<void(const State&, const StepReport* report, const DiagnosticsRow&)> on_output;
  /// Called after every step with the previous and the new state.
  std::function<void(const State& before, const State& after, const StepReport&)> on_step;
};

struct RunResult {
  State final_state;
  std::vector<DiagnosticsRow> rows;
  std::vector<StepReport> reports;
  int steps = 0;
};

/// Number of steps needed to reach t_end from 0.
int step_count(double t_end, double dt);

/// Marches until t_end. With policy abort a non-converged Gauss-Seidel loop
/// raises SolverError carrying the failing time.
RunResult run(const Stepper& stepper, State initial, const RunHooks& hooks = {});

}  // namespace tumorsim

// Command-line driver: simulate, kernel-check, convergence, ecm-oracle.
// Exit codes: 0 success, 1 usage or validation error, 2 solver failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tumorsim/config.hpp"
#include "tumorsim/diagnostics.hpp"
#include "tumorsim/initial.hpp"
#include "tumorsim/io.hpp"
#include "tumorsim/mesh.hpp"
#include "tumorsim/nonlocal.hpp"
#include "tumorsim/stepper.hpp"

namespace fs = std::filesystem;
using namespace tumorsim;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_solver = 2;

constexpr const char* output_env = "TUMORSIM_OUTPUT_DIR";

struct SimulateArgs {
  std::string config;
  std::string mode;
  std::string on_nonconverged;
  std::string output;
};

// Flags beat the environment, which beats the file.
RunConfig resolve(const std::string& path, const std::string& mode, const std::string& policy, const std::string& output) {
  RunConfig cfg = parse_config(path);
  if (!mode.empty()) cfg.haptotaxis = haptotaxis_mode_from_string(mode);
  if (!policy.empty()) cfg.scheme.on_nonconverged = nonconverged_policy_from_string(policy);
  if (const char* env = std::getenv(output_env); env != nullptr && *env != '\0') cfg.output.directory = env;
  if (!output.empty()) cfg.output.directory = output;
  cfg.validate();
  return cfg;
}

int simulate(const SimulateArgs& args) {
  const RunConfig cfg = resolve(args.config, args.mode, args.on_nonconverged, args.output);
  const fs::path dir = cfg.output.directory;
  fs::create_directories(dir);
  write_text_file(dir / "config.resolved.ini", to_config_string(cfg));

  const Mesh mesh(cfg.n_per_side);
  const Stepper stepper(mesh, cfg.model, cfg.scheme, cfg.haptotaxis, cfg.kernel());
  State initial = make_initial_state(mesh, cfg.initial, cfg.model);

  std::optional<CsvWriter> csv;
  if (cfg.output.csv) csv.emplace(dir / "diagnostics.csv");
  int frame = 0;
  RunHooks hooks;
  hooks.on_output = [&](const State& s, const StepReport*, const DiagnosticsRow& row) {
    if (csv) csv->write(row);
    if (cfg.output.vtk) write_vtk(dir / vtk_frame_name(frame), mesh, s);
    ++frame;
    std::printf("t=%-10.4f tumor=%.6e necrotic=%.6e ecm=%.6e energy=%.6e gs=%d\n", row.t, row.tumor_mass,
                row.necrotic_mass, row.ecm_total, row.energy, row.gauss_seidel_iterations);
  };
  const auto result = run(stepper, std::move(initial), hooks);
  int worst = 0;
  int unconverged = 0;
  for (const auto& r : result.reports) {
    worst = std::max(worst, r.gauss_seidel_iterations);
    if (!r.converged) ++unconverged;
  }
  std::printf("%d steps, max Gauss-Seidel iterations %d, unconverged steps %d, output in %s\n", result.steps, worst,
              unconverged, dir.string().c_str());
  return exit_ok;
}

int kernel_check(double eps, int n, const std::string& omega, int levels) {
  if (n < 1) throw std::invalid_argument("--n must be >= 1");
  const OmegaMode mode = omega_mode_from_string(omega);
  const double c = mode == OmegaMode::paper_dot ? 0.5 : 1.0;
  const auto spec = KernelSpec::make(eps, mode);
  std::printf("kernel omega=%s (%.6g), expected k*theta ~ %.1f grad theta\n", std::string(to_string(mode)).c_str(),
              spec.omega, c);
  std::printf("theta = sin(pi x1) cos(pi x2), nodes >= 2 eps from the boundary\n");
  std::printf("%8s %12s %12s %14s %8s\n", "n", "h", "eps", "sup_error", "rate");
  const auto rows = kernel_consistency_table(eps, n, mode, levels);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double rate = i == 0 || rows[i].sup_error <= 0.0 ? std::nan("")
                                                           : std::log2(rows[i - 1].sup_error / rows[i].sup_error);
    std::printf("%8d %12.6g %12.6g %14.6e %8.3f\n", rows[i].n_per_side, rows[i].h, rows[i].eps, rows[i].sup_error, rate);
  }
  const Mesh mesh(n);
  const auto stencil = build_convolution_stencil(mesh, spec);
  const auto ratio = linear_gradient_ratio(mesh, stencil, {1.0, 0.5});
  std::vector<double> ones(mesh.num_nodes(), 1.0);
  double constant_sup = 0.0;
  const auto conv_ones = apply_convolution(stencil, ones);
  for (std::size_t i = 0; i < conv_ones.size(); ++i) {
    const auto& x = mesh.node(i);
    if (std::max(std::abs(x[0]), std::abs(x[1])) > 1.0 - eps + 1e-12) continue;
    constant_sup = std::max({constant_sup, std::abs(conv_ones[i][0]), std::abs(conv_ones[i][1])});
  }
  std::printf("constant theta: max |k*theta| over interior nodes = %.3e\n", constant_sup);
  std::printf("gradient ratio (theta = x1 + 0.5 x2, %zu interior nodes): %.6f  [min %.6f, max %.6f]\n", ratio.nodes,
              ratio.mean, ratio.min, ratio.max);
  return exit_ok;
}

int convergence(int levels) {
  if (levels < 3) throw std::invalid_argument("--levels must be >= 3");
  std::vector<int> res;
  for (int l = 0; l < levels; ++l) res.push_back(16 << l);
  std::printf("%8s %12s %14s %8s\n", "n", "h", "L2_error", "order");
  for (const auto& r : manufactured_convergence_study(res)) {
    std::printf("%8d %12.6g %14.6e %8.3f\n", r.n_per_side, r.h, r.l2_error, r.order);
  }
  return exit_ok;
}

int ecm_oracle(const std::string& path, double t_end) {
  RunConfig cfg = resolve(path, "", "", "");
  if (!(t_end > 0.0)) throw std::invalid_argument("--t-end must be > 0");
  cfg.scheme.t_end = t_end;
  cfg.scheme.output_every = std::max(1, step_count(t_end, cfg.scheme.dt));
  cfg.scheme.validate();

  const Mesh mesh(cfg.n_per_side);
  const Stepper stepper(mesh, cfg.model, cfg.scheme, cfg.haptotaxis, cfg.kernel());
  State initial = make_initial_state(mesh, cfg.initial, cfg.model);
  const std::vector<double> theta0 = initial.theta;
  std::vector<MdeSnapshot> history{{initial.t, initial.phi_M}};
  RunHooks hooks;
  hooks.on_step = [&](const State&, const State& after, const StepReport&) { history.push_back({after.t, after.phi_M}); };
  const auto result = run(stepper, std::move(initial), hooks);
  const double t = result.final_state.t;
  const auto oracle = ecm_closed_form(theta0, history, cfg.model.lambda_theta_deg, t);
  double dev = 0.0;
  for (std::size_t i = 0; i < oracle.size(); ++i) dev = std::max(dev, std::abs(oracle[i] - result.final_state.theta[i]));
  std::printf("t=%.6g steps=%d dt=%.6g\n", t, result.steps, cfg.scheme.dt);
  std::printf("max |theta - theta0 exp(-int f5)| = %.6e\n", dev);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tumorsim: phase-field tumor growth with local and nonlocal haptotaxis"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "run the time stepper and write VTK/CSV output");
  simulate_cmd->add_option("--config", sim.config, "config file")->required()->check(CLI::ExistingFile);
  simulate_cmd->add_option("--mode", sim.mode, "haptotaxis mode")->check(CLI::IsMember({"loc", "nonloc"}));
  simulate_cmd->add_option("--on-nonconverged", sim.on_nonconverged, "policy when Gauss-Seidel does not converge")
      ->check(CLI::IsMember({"abort", "accept"}));
  simulate_cmd->add_option("--output", sim.output, std::string("output directory (overrides $") + output_env + ")");

  double eps = 0.0;
  int n = 64;
  std::string omega = "paper";
  int kernel_levels = 3;
  auto* kernel_cmd = app.add_subcommand("kernel-check", "compare k*theta with grad theta");
  kernel_cmd->add_option("--eps", eps, "kernel radius")->required();
  kernel_cmd->add_option("--n", n, "cells per side")->required();
  kernel_cmd->add_option("--omega", omega, "kernel normalisation")->check(CLI::IsMember({"paper", "consistent"}));
  kernel_cmd->add_option("--levels", kernel_levels, "refinements at fixed eps/h")->capture_default_str();

  int levels = 3;
  auto* conv_cmd = app.add_subcommand("convergence", "manufactured-solution order table for the nutrient problem");
  conv_cmd->add_option("--levels", levels, "number of meshes, starting at n=16")->capture_default_str();

  std::string oracle_config;
  double oracle_t_end = 1.0;
  auto* oracle_cmd = app.add_subcommand("ecm-oracle", "compare the discrete ECM with its closed form");
  oracle_cmd->add_option("--config", oracle_config, "config file")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--t-end", oracle_t_end, "length of the run")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return exit_invalid;
  }

  try {
    if (*simulate_cmd) return simulate(sim);
    if (*kernel_cmd) return kernel_check(eps, n, omega, kernel_levels);
    if (*conv_cmd) return convergence(levels);
    if (*oracle_cmd) return ecm_oracle(oracle_config, oracle_t_end);
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return exit_solver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_invalid;
  }
  std::cerr << app.help();
  return exit_invalid;
}

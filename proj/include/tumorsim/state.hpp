#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace tumorsim {

/// Nodal coefficients of all six unknowns at one time level.
struct State {
  double t = 0.0;
  std::vector<double> phi_T;
  std::vector<double> mu;
  std::vector<double> phi_N;
  std::vector<double> phi_sigma;
  std::vector<double> phi_M;
  std::vector<double> theta;

  static State zeros(std::size_t n_nodes);

  std::size_t num_nodes() const { return phi_T.size(); }
  /// True when every field has `n` entries.
  bool consistent(std::size_t n) const;

  static constexpr std::array<std::string_view, 6> field_names{"phi_T", "mu", "phi_N", "phi_sigma", "phi_M", "theta"};
  std::array<const std::vector<double>*, 6> fields() const { return {&phi_T, &mu, &phi_N, &phi_sigma, &phi_M, &theta}; }

  bool operator==(const State&) const = default;
};

}  // namespace tumorsim

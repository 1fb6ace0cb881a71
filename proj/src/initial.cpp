#include "tumorsim/initial.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace tumorsim {

TumorShape tumor_shape_from_string(std::string_view s) {
  if (s == "tanh_disk") return TumorShape::tanh_disk;
  if (s == "constant") return TumorShape::constant;
  if (s == "perturbed") return TumorShape::perturbed;
  throw std::invalid_argument("unknown tumor shape '" + std::string(s) + "' (expected tanh_disk|constant|perturbed)");
}

std::string_view to_string(TumorShape s) {
  switch (s) {
    case TumorShape::tanh_disk: return "tanh_disk";
    case TumorShape::constant: return "constant";
    case TumorShape::perturbed: return "perturbed";
  }
  return "?";
}

EcmShape ecm_shape_from_string(std::string_view s) {
  if (s == "band") return EcmShape::band;
  if (s == "constant") return EcmShape::constant;
  throw std::invalid_argument("unknown ECM shape '" + std::string(s) + "' (expected band|constant)");
}

std::string_view to_string(EcmShape s) { return s == EcmShape::band ? "band" : "constant"; }

State make_initial_state(const Mesh& mesh, const InitialSpec& spec, const ModelParams& params) {
  const std::size_t n = mesh.num_nodes();
  State s = State::zeros(n);

  // Cosine modes satisfy the natural boundary condition of the tumor equations.
  constexpr int modes = 4;
  double coeff[modes][modes] = {};
  if (spec.tumor == TumorShape::perturbed) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double total = 0.0;
    for (auto& row : coeff) {
      for (auto& c : row) {
        c = u(rng);
        total += std::abs(c);
      }
    }
    for (auto& row : coeff) {
      for (auto& c : row) c /= total;
    }
  }

  const double width = std::sqrt(2.0) * params.eps_T;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = mesh.node(i);
    switch (spec.tumor) {
      case TumorShape::tanh_disk: {
        const double r = std::hypot(x[0] - spec.tumor_center_x, x[1] - spec.tumor_center_y);
        s.phi_T[i] = 0.5 * (1.0 - std::tanh((r - spec.tumor_radius) / width));
        break;
      }
      case TumorShape::constant:
        s.phi_T[i] = spec.tumor_value;
        break;
      case TumorShape::perturbed: {
        double p = 0.0;
        for (int a = 0; a < modes; ++a) {
          for (int b = 0; b < modes; ++b) {
            p += coeff[a][b] * std::cos((a + 1) * std::numbers::pi * x[0]) * std::cos((b + 1) * std::numbers::pi * x[1]);
          }
        }
        s.phi_T[i] = spec.tumor_value + spec.tumor_amplitude * p;
        break;
      }
    }
    s.phi_N[i] = spec.necrotic_value;
    s.phi_sigma[i] = spec.nutrient_value;
    s.phi_M[i] = spec.mde_value;
    if (spec.ecm == EcmShape::constant || x[1] > 0.0) {
      s.theta[i] = spec.ecm_upper;
    } else if (x[1] < 0.0) {
      s.theta[i] = spec.ecm_lower;
    } else {
      // Nodes on the interface take the mean so the interpolant integrates exactly.
      s.theta[i] = 0.5 * (spec.ecm_upper + spec.ecm_lower);
    }
  }
  return s;
}

}  // namespace tumorsim

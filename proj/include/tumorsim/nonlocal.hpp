#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "tumorsim/fem.hpp"
#include "tumorsim/model.hpp"

namespace tumorsim {

enum class HaptotaxisMode { local, nonlocal };

/// Normalisation of the odd kernel k(x) = -omega x 1{|x|_inf <= eps}.
///  - paper_dot: \int x . k(-x) dx = 1, omega = 3 / (8 eps^4) in 2D. The
///    convolution then approximates grad(theta) / 2.
///  - component_consistent: \int x_i k_i(-x) dx = 1 per component,
///    omega = 3 / (4 eps^4) in 2D, so k * theta approximates grad(theta).
enum class OmegaMode { paper_dot, component_consistent };

HaptotaxisMode haptotaxis_mode_from_string(std::string_view s);
std::string_view to_string(HaptotaxisMode m);
OmegaMode omega_mode_from_string(std::string_view s);
std::string_view to_string(OmegaMode m);

/// Throws std::invalid_argument for eps <= 0 or dim != 2.
double kernel_normalization(double eps, int dim, OmegaMode mode);

struct KernelSpec {
  double eps = 0.0;
  OmegaMode mode = OmegaMode::paper_dot;
  double omega = 0.0;

  static KernelSpec make(double eps, OmegaMode mode) { return {eps, mode, kernel_normalization(eps, 2, mode)}; }
};

/// Precomputed weights of the zero-extended convolution (k * theta)(x_i).
///
/// The weight of node j seen from node i is
///   omega \int_{B_eps(x_i) cap Omega} (y - x_i) phi_j(y) dy,
/// integrated exactly by clipping each triangle against the eps-box, so the
/// convolution of any P1 field is exact. The stencil of node i is the set of
/// nodes whose basis support meets its box.
class ConvolutionStencil {
 public:
  ConvolutionStencil() = default;
  ConvolutionStencil(const Mesh& mesh, const KernelSpec& spec);

  const KernelSpec& spec() const { return spec_; }
  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const std::size_t> neighbors(std::size_t i) const {
    return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const Vec2> weights(std::size_t i) const {
    return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

 private:
  KernelSpec spec_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> neighbors_;
  std::vector<Vec2> weights_;
};

ConvolutionStencil build_convolution_stencil(const Mesh& mesh, const KernelSpec& spec);

/// Nodal values of k * theta. Linear in theta.
std::vector<Vec2> apply_convolution(const ConvolutionStencil& stencil, std::span<const double> theta);

/// Adhesion flux chi_H C(phi_T - phi_N) {grad theta | k * theta} at every
/// quadrature point. `stencil` is required in nonlocal mode.
QuadratureVectorField adhesion_flux(HaptotaxisMode mode, const P1Space& space, std::span<const double> phi_T,
                                    std::span<const double> phi_N, std::span<const double> theta,
                                    const ModelParams& params, const ConvolutionStencil* stencil);

}  // namespace tumorsim

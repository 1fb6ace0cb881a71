#pragma once

#include <cstdint>
#include <string_view>

#include "tumorsim/mesh.hpp"
#include "tumorsim/model.hpp"
#include "tumorsim/state.hpp"

namespace tumorsim {

enum class TumorShape { tanh_disk, constant, perturbed };
enum class EcmShape { band, constant };

TumorShape tumor_shape_from_string(std::string_view s);
std::string_view to_string(TumorShape s);
EcmShape ecm_shape_from_string(std::string_view s);
std::string_view to_string(EcmShape s);

/// Initial data. The defaults describe a small diffuse disk of tumor cells
/// without necrotic core in a nutrient-saturated domain, with a denser ECM
/// band in the upper half (x2 > 0).
struct InitialSpec {
  TumorShape tumor = TumorShape::tanh_disk;
  double tumor_center_x = 0.0;
  double tumor_center_y = 0.0;
  double tumor_radius = 0.1;
  /// Base value of the constant and perturbed shapes.
  double tumor_value = 0.5;
  /// Amplitude of the smooth random perturbation.
  double tumor_amplitude = 0.01;
  std::uint64_t seed = 1;
  double necrotic_value = 0.0;
  double nutrient_value = 1.0;
  double mde_value = 0.0;
  EcmShape ecm = EcmShape::band;
  double ecm_upper = 1.0;
  double ecm_lower = 0.5;

  bool operator==(const InitialSpec&) const = default;
};

/// Builds the state at t = 0; mu starts at zero.
State make_initial_state(const Mesh& mesh, const InitialSpec& spec, const ModelParams& params);

}  // namespace tumorsim

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tumorsim/initial.hpp"
#include "tumorsim/model.hpp"
#include "tumorsim/nonlocal.hpp"
#include "tumorsim/stepper.hpp"

namespace tumorsim {

/// Malformed or invalid configuration. `line()` is 0 for validation errors
/// that are not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct OutputConfig {
  std::string directory = "output";
  bool vtk = true;
  bool csv = true;

  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  ModelParams model;
  SchemeConfig scheme;
  int n_per_side = 64;
  HaptotaxisMode haptotaxis = HaptotaxisMode::local;
  /// 0 means unset; required for nonlocal haptotaxis.
  double kernel_eps = 0.0;
  OmegaMode omega_mode = OmegaMode::paper_dot;
  InitialSpec initial;
  OutputConfig output;

  /// Throws ConfigError naming the offending key.
  void validate() const;
  std::optional<KernelSpec> kernel() const;

  bool operator==(const RunConfig&) const = default;
};

/// Parses the sectioned key = value format:
///
///   # comment
///   [model]
///   chi_H = 0.002
///   scheme.dt = 0.005      # dotted keys work anywhere
///
/// Unknown or repeated keys are rejected. Missing keys keep their defaults.
RunConfig parse_config_string(std::string_view text);
RunConfig parse_config(const std::filesystem::path& path);

/// Fully resolved configuration in the same format; parse_config_string of
/// the result reproduces `cfg`.
std::string to_config_string(const RunConfig& cfg);

}  // namespace tumorsim

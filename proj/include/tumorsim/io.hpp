#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>

#include "tumorsim/diagnostics.hpp"
#include "tumorsim/mesh.hpp"
#include "tumorsim/state.hpp"

namespace tumorsim {

/// Legacy ASCII VTK unstructured grid with one scalar array per field.
/// Throws std::runtime_error when the file cannot be written and
/// std::invalid_argument when the state does not match the mesh.
void write_vtk(const std::filesystem::path& path, const Mesh& mesh, const State& state);

/// File name of output frame `index`, e.g. "state_000012.vtk".
std::string vtk_frame_name(int index);

/// Streams diagnostics rows; the header is written on construction.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  void write(const DiagnosticsRow& row);

 private:
  std::ofstream out_;
};

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace tumorsim

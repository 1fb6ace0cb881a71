#include "tumorsim/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace tumorsim {

namespace {

std::ofstream open_or_throw(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

void put_real(std::ofstream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

void write_vtk(const std::filesystem::path& path, const Mesh& mesh, const State& state) {
  if (!state.consistent(mesh.num_nodes())) throw std::invalid_argument("write_vtk: state does not match the mesh");
  auto out = open_or_throw(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "tumorsim t=";
  put_real(out, state.t);
  out << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";

  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (const auto& x : mesh.nodes()) {
    put_real(out, x[0]);
    out << ' ';
    put_real(out, x[1]);
    out << " 0\n";
  }
  const std::size_t ne = mesh.num_elements();
  out << "CELLS " << ne << ' ' << 4 * ne << '\n';
  for (const auto& e : mesh.elements()) out << "3 " << e[0] << ' ' << e[1] << ' ' << e[2] << '\n';
  out << "CELL_TYPES " << ne << '\n';
  for (std::size_t e = 0; e < ne; ++e) out << "5\n";

  out << "POINT_DATA " << mesh.num_nodes() << '\n';
  const auto fields = state.fields();
  for (std::size_t f = 0; f < fields.size(); ++f) {
    out << "SCALARS " << State::field_names[f] << " double 1\nLOOKUP_TABLE default\n";
    for (double v : *fields[f]) {
      put_real(out, v);
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string vtk_frame_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "state_%06d.vtk", index);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(open_or_throw(path)) { out_ << csv_header() << '\n'; }

void CsvWriter::write(const DiagnosticsRow& row) {
  out_ << csv_row(row) << '\n';
  out_.flush();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto out = open_or_throw(path);
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace tumorsim

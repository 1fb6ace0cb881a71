#include "tumorsim/mesh.hpp"

#include <stdexcept>
#include <string>

namespace tumorsim {

Side side_from_string(std::string_view name) {
  if (name == "left") return Side::left;
  if (name == "right") return Side::right;
  if (name == "bottom") return Side::bottom;
  if (name == "top") return Side::top;
  throw std::invalid_argument("unknown boundary side '" + std::string(name) + "'");
}

ElementGeometry triangle_geometry(const std::array<Vec2, 3>& v) {
  const double det = (v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) -
                     (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]);
  ElementGeometry g;
  g.area = 0.5 * det;
  g.grad[0] = {(v[1][1] - v[2][1]) / det, (v[2][0] - v[1][0]) / det};
  g.grad[1] = {(v[2][1] - v[0][1]) / det, (v[0][0] - v[2][0]) / det};
  g.grad[2] = {(v[0][1] - v[1][1]) / det, (v[1][0] - v[0][0]) / det};
  return g;
}

Mesh::Mesh(int n_per_side) : n_(n_per_side) {
  if (n_per_side < 1) {
    throw std::invalid_argument("mesh: n_per_side must be >= 1, got " + std::to_string(n_per_side));
  }
  h_ = 2.0 / n_;
  const int np = n_ + 1;
  nodes_.reserve(static_cast<std::size_t>(np) * np);
  boundary_flags_.reserve(static_cast<std::size_t>(np) * np);
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < np; ++i) {
      // -1 + 2i/n keeps the faces exactly at +-1.
      nodes_.push_back({-1.0 + 2.0 * i / n_, -1.0 + 2.0 * j / n_});
      std::uint8_t flags = 0;
      if (i == 0) flags |= static_cast<std::uint8_t>(Side::left);
      if (i == n_) flags |= static_cast<std::uint8_t>(Side::right);
      if (j == 0) flags |= static_cast<std::uint8_t>(Side::bottom);
      if (j == n_) flags |= static_cast<std::uint8_t>(Side::top);
      boundary_flags_.push_back(flags);
    }
  }
  elements_.reserve(2 * static_cast<std::size_t>(n_) * n_);
  for (int j = 0; j < n_; ++j) {
    for (int i = 0; i < n_; ++i) {
      const auto a = node_index(i, j);
      const auto b = node_index(i + 1, j);
      const auto c = node_index(i + 1, j + 1);
      const auto d = node_index(i, j + 1);
      elements_.push_back({a, b, c});
      elements_.push_back({a, c, d});
    }
  }
}

std::vector<std::size_t> Mesh::boundary_nodes(Side side) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (on_side(k, side)) out.push_back(k);
  }
  return out;
}

ElementGeometry Mesh::element_geometry(std::size_t elem) const {
  if (elem >= elements_.size()) {
    throw std::out_of_range("mesh: element index " + std::to_string(elem) + " out of range");
  }
  const auto& t = elements_[elem];
  return triangle_geometry({nodes_[t[0]], nodes_[t[1]], nodes_[t[2]]});
}

Mesh build_structured_mesh(int n_per_side) { return Mesh(n_per_side); }

}  // namespace tumorsim

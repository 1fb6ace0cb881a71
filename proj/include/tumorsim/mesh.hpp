#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace tumorsim {

using Vec2 = std::array<double, 2>;

enum class Side : std::uint8_t { left = 1, right = 2, bottom = 4, top = 8 };

/// Parses "left" / "right" / "top" / "bottom"; throws std::invalid_argument otherwise.
Side side_from_string(std::string_view name);

/// Area and P1 basis gradients of one triangle.
struct ElementGeometry {
  double area = 0.0;
  std::array<Vec2, 3> grad{};
};

/// Geometry of an arbitrary counterclockwise triangle.
ElementGeometry triangle_geometry(const std::array<Vec2, 3>& vertices);

/// Structured triangulation of (-1,1)^2.
///
/// Nodes are ordered lexicographically by (x2, x1): node (i, j) has index
/// j * (n + 1) + i and sits at (-1 + i h, -1 + j h). Each cell is split along
/// its bottom-left to top-right diagonal into two counterclockwise triangles.
class Mesh {
 public:
  static constexpr int dim = 2;

  explicit Mesh(int n_per_side);

  int n_per_side() const { return n_; }
  double h() const { return h_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_elements() const { return elements_.size(); }

  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::vector<std::array<std::size_t, 3>>& elements() const { return elements_; }
  const Vec2& node(std::size_t i) const { return nodes_[i]; }
  const std::array<std::size_t, 3>& element(std::size_t e) const { return elements_[e]; }

  std::size_t node_index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(i);
  }

  bool on_side(std::size_t node, Side side) const {
    return (boundary_flags_[node] & static_cast<std::uint8_t>(side)) != 0;
  }
  bool on_boundary(std::size_t node) const { return boundary_flags_[node] != 0; }

  std::vector<std::size_t> boundary_nodes(Side side) const;

  /// Throws std::out_of_range for an invalid element index.
  ElementGeometry element_geometry(std::size_t elem) const;

 private:
  int n_;
  double h_;
  std::vector<Vec2> nodes_;
  std::vector<std::array<std::size_t, 3>> elements_;
  std::vector<std::uint8_t> boundary_flags_;
};

Mesh build_structured_mesh(int n_per_side);

}  // namespace tumorsim

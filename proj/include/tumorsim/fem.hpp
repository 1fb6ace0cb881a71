#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tumorsim/mesh.hpp"
#include "tumorsim/sparse.hpp"

namespace tumorsim {

/// Values attached to the quadrature points of every element, stored
/// element-major: entry 3 * elem + q.
using QuadratureField = std::vector<double>;
using QuadratureVectorField = std::vector<Vec2>;

/// Quadrature point descriptor handed to integrand callbacks.
struct QuadraturePoint {
  std::size_t elem;
  int q;
  Vec2 x;
};

using ScalarIntegrand = std::function<double(const QuadraturePoint&)>;
using VectorIntegrand = std::function<Vec2(const QuadraturePoint&)>;

/// Continuous piecewise-linear finite element space on a structured mesh.
///
/// All variable-coefficient integrals use the three-point edge-midpoint rule,
/// which is exact for quadratics. Point q of a triangle is the midpoint of the
/// edge joining local vertices q and q+1 (mod 3). Every matrix assembled here
/// shares the P1 adjacency pattern, so they can be combined with add_scaled.
class P1Space {
 public:
  static constexpr int points_per_element = 3;

  explicit P1Space(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  std::size_t num_dofs() const { return mesh_->num_nodes(); }
  std::size_t num_quadrature_points() const { return points_per_element * mesh_->num_elements(); }
  const ElementGeometry& geometry(std::size_t elem) const { return geometry_[elem]; }

  /// Basis value of local vertex i at quadrature point q.
  static double basis_at(int i, int q) { return (i == q || i == (q + 1) % 3) ? 0.5 : 0.0; }
  Vec2 quadrature_point(std::size_t elem, int q) const;

  /// Nodal interpolation of f.
  std::vector<double> interpolate(const std::function<double(const Vec2&)>& f) const;
  /// Evaluates a P1 field at every quadrature point.
  QuadratureField to_quadrature(std::span<const double> nodal) const;
  /// Piecewise-constant gradient of a P1 field, one vector per element.
  std::vector<Vec2> element_gradients(std::span<const double> nodal) const;

  SparseMatrix mass(double coeff = 1.0) const;
  SparseMatrix mass(std::span<const double> nodal_coeff) const;
  SparseMatrix mass_weighted(const QuadratureField& qp_coeff) const;

  SparseMatrix stiffness(double coeff = 1.0) const;
  SparseMatrix stiffness(std::span<const double> nodal_coeff) const;
  SparseMatrix stiffness_weighted(const QuadratureField& qp_coeff) const;

  /// Entries \int f phi_i.
  std::vector<double> weighted_rhs(const QuadratureField& qp_values) const;
  std::vector<double> weighted_rhs(const ScalarIntegrand& f) const;

  /// Entries \int F . grad phi_i.
  std::vector<double> flux_rhs(const QuadratureVectorField& qp_vectors) const;
  std::vector<double> flux_rhs(const VectorIntegrand& f) const;

  /// Row sums of the unit mass matrix.
  std::vector<double> lumped_mass() const;

  /// \int f over the domain for a quadrature field.
  double integrate(const QuadratureField& qp_values) const;
  /// \int u for a P1 field.
  double integrate_nodal(std::span<const double> nodal) const;

  /// Zero-valued matrix on the shared pattern.
  SparseMatrix zero_matrix() const;

 private:
  void check_nodal(std::span<const double> v, const char* who) const;
  void check_quadrature(std::size_t n, const char* who) const;

  const Mesh* mesh_;
  std::vector<ElementGeometry> geometry_;
  SparseMatrix pattern_;
  // Position in pattern_.values of local entry (a, b) of every element.
  std::vector<std::array<std::size_t, 9>> slots_;
};

/// Imposes u = value on `nodes` by symmetric elimination: the known value is
/// moved to the right-hand side of the free rows, constrained rows and columns
/// are cleared and the diagonal set to 1. Preserves the sparsity pattern.
void apply_dirichlet(SparseMatrix& a, std::vector<double>& b, std::span<const std::size_t> nodes, double value);

/// Per-node values (only the listed nodes get `value`). Same elimination as above.
void apply_dirichlet(SparseMatrix& a, std::vector<double>& b, std::span<const std::size_t> nodes,
                     std::span<const double> values);

}  // namespace tumorsim

#include "tumorsim/fem.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tumorsim {

P1Space::P1Space(const Mesh& mesh) : mesh_(&mesh) {
  const auto ne = mesh.num_elements();
  geometry_.reserve(ne);
  std::vector<Triplet> trip;
  trip.reserve(9 * ne);
  for (std::size_t e = 0; e < ne; ++e) {
    geometry_.push_back(mesh.element_geometry(e));
    const auto& t = mesh.element(e);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) trip.push_back({t[a], t[b], 0.0});
    }
  }
  pattern_ = csr_from_triplets(mesh.num_nodes(), mesh.num_nodes(), trip);
  slots_.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& t = mesh.element(e);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) slots_[e][3 * a + b] = pattern_.find(t[a], t[b]);
    }
  }
}

void P1Space::check_nodal(std::span<const double> v, const char* who) const {
  if (v.size() != num_dofs()) {
    throw std::invalid_argument(std::string(who) + ": field has " + std::to_string(v.size()) +
                                " values, mesh has " + std::to_string(num_dofs()) + " nodes");
  }
}

void P1Space::check_quadrature(std::size_t n, const char* who) const {
  if (n != num_quadrature_points()) {
    throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(num_quadrature_points()) +
                                " quadrature values, got " + std::to_string(n));
  }
}

Vec2 P1Space::quadrature_point(std::size_t elem, int q) const {
  const auto& t = mesh_->element(elem);
  const auto& a = mesh_->node(t[q]);
  const auto& b = mesh_->node(t[(q + 1) % 3]);
  return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
}

std::vector<double> P1Space::interpolate(const std::function<double(const Vec2&)>& f) const {
  std::vector<double> out(num_dofs());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(mesh_->node(i));
  return out;
}

QuadratureField P1Space::to_quadrature(std::span<const double> nodal) const {
  check_nodal(nodal, "to_quadrature");
  QuadratureField out(num_quadrature_points());
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto& t = mesh_->element(e);
    for (int q = 0; q < 3; ++q) out[3 * e + q] = 0.5 * (nodal[t[q]] + nodal[t[(q + 1) % 3]]);
  }
  return out;
}

std::vector<Vec2> P1Space::element_gradients(std::span<const double> nodal) const {
  check_nodal(nodal, "element_gradients");
  std::vector<Vec2> out(mesh_->num_elements());
  for (std::size_t e = 0; e < out.size(); ++e) {
    const auto& t = mesh_->element(e);
    const auto& g = geometry_[e];
    Vec2 d{0.0, 0.0};
    for (int a = 0; a < 3; ++a) {
      d[0] += nodal[t[a]] * g.grad[a][0];
      d[1] += nodal[t[a]] * g.grad[a][1];
    }
    out[e] = d;
  }
  return out;
}

SparseMatrix P1Space::zero_matrix() const { return pattern_; }

SparseMatrix P1Space::mass(double coeff) const {
  return mass_weighted(QuadratureField(num_quadrature_points(), coeff));
}

SparseMatrix P1Space::mass(std::span<const double> nodal_coeff) const {
  check_nodal(nodal_coeff, "mass");
  return mass_weighted(to_quadrature(nodal_coeff));
}

SparseMatrix P1Space::mass_weighted(const QuadratureField& c) const {
  check_quadrature(c.size(), "mass_weighted");
  SparseMatrix m = pattern_;
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const double w = geometry_[e].area / 3.0;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        double s = 0.0;
        for (int q = 0; q < 3; ++q) s += c[3 * e + q] * basis_at(a, q) * basis_at(b, q);
        m.values[slots_[e][3 * a + b]] += w * s;
      }
    }
  }
  return m;
}

SparseMatrix P1Space::stiffness(double coeff) const {
  return stiffness_weighted(QuadratureField(num_quadrature_points(), coeff));
}

SparseMatrix P1Space::stiffness(std::span<const double> nodal_coeff) const {
  check_nodal(nodal_coeff, "stiffness");
  return stiffness_weighted(to_quadrature(nodal_coeff));
}

SparseMatrix P1Space::stiffness_weighted(const QuadratureField& c) const {
  check_quadrature(c.size(), "stiffness_weighted");
  SparseMatrix k = pattern_;
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto& g = geometry_[e];
    const double w = g.area * (c[3 * e] + c[3 * e + 1] + c[3 * e + 2]) / 3.0;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        k.values[slots_[e][3 * a + b]] += w * (g.grad[a][0] * g.grad[b][0] + g.grad[a][1] * g.grad[b][1]);
      }
    }
  }
  return k;
}

std::vector<double> P1Space::weighted_rhs(const QuadratureField& f) const {
  check_quadrature(f.size(), "weighted_rhs");
  std::vector<double> out(num_dofs(), 0.0);
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto& t = mesh_->element(e);
    const double w = geometry_[e].area / 3.0;
    for (int a = 0; a < 3; ++a) {
      double s = 0.0;
      for (int q = 0; q < 3; ++q) s += f[3 * e + q] * basis_at(a, q);
      out[t[a]] += w * s;
    }
  }
  return out;
}

std::vector<double> P1Space::weighted_rhs(const ScalarIntegrand& f) const {
  QuadratureField v(num_quadrature_points());
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    for (int q = 0; q < 3; ++q) v[3 * e + q] = f({e, q, quadrature_point(e, q)});
  }
  return weighted_rhs(v);
}

std::vector<double> P1Space::flux_rhs(const QuadratureVectorField& f) const {
  check_quadrature(f.size(), "flux_rhs");
  std::vector<double> out(num_dofs(), 0.0);
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto& t = mesh_->element(e);
    const auto& g = geometry_[e];
    const double w = g.area / 3.0;
    Vec2 sum{0.0, 0.0};
    for (int q = 0; q < 3; ++q) {
      sum[0] += f[3 * e + q][0];
      sum[1] += f[3 * e + q][1];
    }
    for (int a = 0; a < 3; ++a) out[t[a]] += w * (sum[0] * g.grad[a][0] + sum[1] * g.grad[a][1]);
  }
  return out;
}

std::vector<double> P1Space::flux_rhs(const VectorIntegrand& f) const {
  QuadratureVectorField v(num_quadrature_points());
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    for (int q = 0; q < 3; ++q) v[3 * e + q] = f({e, q, quadrature_point(e, q)});
  }
  return flux_rhs(v);
}

std::vector<double> P1Space::lumped_mass() const {
  std::vector<double> out(num_dofs(), 0.0);
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto& t = mesh_->element(e);
    for (int a = 0; a < 3; ++a) out[t[a]] += geometry_[e].area / 3.0;
  }
  return out;
}

double P1Space::integrate(const QuadratureField& f) const {
  check_quadrature(f.size(), "integrate");
  double s = 0.0;
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    s += geometry_[e].area / 3.0 * (f[3 * e] + f[3 * e + 1] + f[3 * e + 2]);
  }
  return s;
}

double P1Space::integrate_nodal(std::span<const double> nodal) const { return integrate(to_quadrature(nodal)); }

void apply_dirichlet(SparseMatrix& a, std::vector<double>& b, std::span<const std::size_t> nodes,
                     std::span<const double> values) {
  if (nodes.size() != values.size()) throw std::invalid_argument("apply_dirichlet: nodes/values length mismatch");
  if (nodes.empty()) return;
  std::vector<double> fixed(a.n_rows, 0.0);
  std::vector<char> constrained(a.n_rows, 0);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k] >= a.n_rows) throw std::out_of_range("apply_dirichlet: node index out of range");
    constrained[nodes[k]] = 1;
    fixed[nodes[k]] = values[k];
  }
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      const auto j = a.col_indices[k];
      if (constrained[i]) {
        a.values[k] = (i == j) ? 1.0 : 0.0;
      } else if (constrained[j]) {
        b[i] -= a.values[k] * fixed[j];
        a.values[k] = 0.0;
      }
    }
    if (constrained[i]) b[i] = fixed[i];
  }
}

void apply_dirichlet(SparseMatrix& a, std::vector<double>& b, std::span<const std::size_t> nodes, double value) {
  const std::vector<double> values(nodes.size(), value);
  apply_dirichlet(a, b, nodes, values);
}

}  // namespace tumorsim

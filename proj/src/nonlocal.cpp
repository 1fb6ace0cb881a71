#include "tumorsim/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tumorsim {

HaptotaxisMode haptotaxis_mode_from_string(std::string_view s) {
  if (s == "loc" || s == "local") return HaptotaxisMode::local;
  if (s == "nonloc" || s == "nonlocal") return HaptotaxisMode::nonlocal;
  throw std::invalid_argument("unknown haptotaxis mode '" + std::string(s) + "' (expected loc|nonloc)");
}

std::string_view to_string(HaptotaxisMode m) { return m == HaptotaxisMode::local ? "loc" : "nonloc"; }

OmegaMode omega_mode_from_string(std::string_view s) {
  if (s == "paper" || s == "paper_dot") return OmegaMode::paper_dot;
  if (s == "consistent" || s == "component_consistent") return OmegaMode::component_consistent;
  throw std::invalid_argument("unknown omega mode '" + std::string(s) + "' (expected paper|consistent)");
}

std::string_view to_string(OmegaMode m) { return m == OmegaMode::paper_dot ? "paper" : "consistent"; }

double kernel_normalization(double eps, int dim, OmegaMode mode) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("kernel eps must be > 0");
  if (dim != 2) throw std::invalid_argument("kernel normalisation is only available for dim = 2");
  const double e4 = eps * eps * eps * eps;
  // \int_{[-eps,eps]^2} z_1^2 dz = 4 eps^4 / 3; the dot form integrates |z|^2.
  return mode == OmegaMode::paper_dot ? 3.0 / (8.0 * e4) : 3.0 / (4.0 * e4);
}

namespace {

struct Polygon {
  std::array<Vec2, 8> v;
  int n = 0;
};

// Keeps the part of `in` where sign * (p[axis] - bound) >= 0.
Polygon clip(const Polygon& in, int axis, double bound, double sign) {
  Polygon out;
  if (in.n == 0) return out;
  auto inside = [&](const Vec2& p) { return sign * (p[axis] - bound) >= 0.0; };
  for (int k = 0; k < in.n; ++k) {
    const Vec2& cur = in.v[k];
    const Vec2& prev = in.v[(k + in.n - 1) % in.n];
    const bool ci = inside(cur);
    const bool pi = inside(prev);
    if (ci != pi) {
      const double s = (bound - prev[axis]) / (cur[axis] - prev[axis]);
      Vec2 x{prev[0] + s * (cur[0] - prev[0]), prev[1] + s * (cur[1] - prev[1])};
      x[axis] = bound;
      out.v[out.n++] = x;
    }
    if (ci) out.v[out.n++] = cur;
  }
  return out;
}

}  // namespace

ConvolutionStencil::ConvolutionStencil(const Mesh& mesh, const KernelSpec& spec) : spec_(spec) {
  if (!(spec.eps > 0.0) || !(spec.omega > 0.0)) throw std::invalid_argument("convolution stencil needs eps, omega > 0");
  const int n = mesh.n_per_side();
  const double h = mesh.h();
  const double eps = spec.eps;
  // Box half-width in cells, plus one cell for basis support.
  const int reach = static_cast<int>(std::ceil(eps / h - 1e-12)) + 1;
  const int span_nodes = 2 * reach + 1;
  std::vector<Vec2> local(static_cast<std::size_t>(span_nodes) * span_nodes);
  std::vector<char> touched(local.size());

  offsets_.reserve(mesh.num_nodes() + 1);
  offsets_.push_back(0);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const Vec2 xi = mesh.node(mesh.node_index(i, j));
      const double xmin = std::max(-1.0, xi[0] - eps), xmax = std::min(1.0, xi[0] + eps);
      const double ymin = std::max(-1.0, xi[1] - eps), ymax = std::min(1.0, xi[1] + eps);
      std::fill(local.begin(), local.end(), Vec2{0.0, 0.0});
      std::fill(touched.begin(), touched.end(), 0);

      const int c0 = std::max(0, i - reach), c1 = std::min(n - 1, i + reach - 1);
      const int r0 = std::max(0, j - reach), r1 = std::min(n - 1, j + reach - 1);
      for (int cj = r0; cj <= r1; ++cj) {
        for (int ci = c0; ci <= c1; ++ci) {
          for (int half = 0; half < 2; ++half) {
            const std::size_t e = 2 * (static_cast<std::size_t>(cj) * n + ci) + half;
            const auto& tri = mesh.element(e);
            Polygon poly;
            poly.n = 3;
            for (int a = 0; a < 3; ++a) poly.v[a] = mesh.node(tri[a]);
            poly = clip(poly, 0, xmin, 1.0);
            poly = clip(poly, 0, xmax, -1.0);
            poly = clip(poly, 1, ymin, 1.0);
            poly = clip(poly, 1, ymax, -1.0);
            if (poly.n < 3) continue;

            const auto geo = mesh.element_geometry(e);
            const Vec2& v0 = mesh.node(tri[0]);
            // Barycentric coordinate a at point y, from its constant gradient.
            auto bary = [&](int a, const Vec2& y) {
              const double base = (a == 0) ? 1.0 : 0.0;
              return base + geo.grad[a][0] * (y[0] - v0[0]) + geo.grad[a][1] * (y[1] - v0[1]);
            };
            std::array<Vec2, 3> acc{};
            bool covered = false;
            for (int k = 1; k + 1 < poly.n; ++k) {
              const Vec2& p = poly.v[0];
              const Vec2& q = poly.v[k];
              const Vec2& r = poly.v[k + 1];
              const double area = 0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]));
              if (area <= 0.0) continue;
              covered = true;
              const Vec2 mids[3] = {{0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])},
                                    {0.5 * (q[0] + r[0]), 0.5 * (q[1] + r[1])},
                                    {0.5 * (r[0] + p[0]), 0.5 * (r[1] + p[1])}};
              for (const auto& m : mids) {
                const double dx = m[0] - xi[0], dy = m[1] - xi[1];
                for (int a = 0; a < 3; ++a) {
                  const double w = area / 3.0 * bary(a, m);
                  acc[a][0] += w * dx;
                  acc[a][1] += w * dy;
                }
              }
            }
            if (!covered) continue;
            for (int a = 0; a < 3; ++a) {
              const auto& nd = mesh.node(tri[a]);
              const int li = static_cast<int>(std::lround((nd[0] + 1.0) / h)) - (i - reach);
              const int lj = static_cast<int>(std::lround((nd[1] + 1.0) / h)) - (j - reach);
              const auto slot = static_cast<std::size_t>(lj) * span_nodes + li;
              local[slot][0] += spec.omega * acc[a][0];
              local[slot][1] += spec.omega * acc[a][1];
              touched[slot] = 1;
            }
          }
        }
      }
      for (int lj = 0; lj < span_nodes; ++lj) {
        for (int li = 0; li < span_nodes; ++li) {
          const auto slot = static_cast<std::size_t>(lj) * span_nodes + li;
          if (!touched[slot]) continue;
          neighbors_.push_back(mesh.node_index(i - reach + li, j - reach + lj));
          weights_.push_back(local[slot]);
        }
      }
      offsets_.push_back(neighbors_.size());
    }
  }
}

ConvolutionStencil build_convolution_stencil(const Mesh& mesh, const KernelSpec& spec) {
  return ConvolutionStencil(mesh, spec);
}

std::vector<Vec2> apply_convolution(const ConvolutionStencil& stencil, std::span<const double> theta) {
  if (theta.size() != stencil.num_nodes()) {
    throw std::invalid_argument("apply_convolution: field has " + std::to_string(theta.size()) +
                                " values, stencil covers " + std::to_string(stencil.num_nodes()) + " nodes");
  }
  std::vector<Vec2> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const auto nb = stencil.neighbors(i);
    const auto w = stencil.weights(i);
    Vec2 s{0.0, 0.0};
    for (std::size_t k = 0; k < nb.size(); ++k) {
      s[0] += w[k][0] * theta[nb[k]];
      s[1] += w[k][1] * theta[nb[k]];
    }
    out[i] = s;
  }
  return out;
}

QuadratureVectorField adhesion_flux(HaptotaxisMode mode, const P1Space& space, std::span<const double> phi_T,
                                    std::span<const double> phi_N, std::span<const double> theta,
                                    const ModelParams& params, const ConvolutionStencil* stencil) {
  const auto& mesh = space.mesh();
  const auto t_q = space.to_quadrature(phi_T);
  const auto n_q = space.to_quadrature(phi_N);
  QuadratureVectorField out(space.num_quadrature_points(), Vec2{0.0, 0.0});

  if (mode == HaptotaxisMode::local) {
    const auto grads = space.element_gradients(theta);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
      for (int q = 0; q < 3; ++q) {
        const auto k = 3 * e + q;
        const double s = params.chi_H * cutoff(t_q[k] - n_q[k]);
        out[k] = {s * grads[e][0], s * grads[e][1]};
      }
    }
    return out;
  }

  if (stencil == nullptr) throw std::invalid_argument("adhesion_flux: nonlocal mode requires a convolution stencil");
  if (stencil->num_nodes() != mesh.num_nodes()) throw std::invalid_argument("adhesion_flux: stencil/mesh mismatch");
  const auto conv = apply_convolution(*stencil, theta);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& tri = mesh.element(e);
    for (int q = 0; q < 3; ++q) {
      const auto k = 3 * e + q;
      const auto& a = conv[tri[q]];
      const auto& b = conv[tri[(q + 1) % 3]];
      const double s = params.chi_H * cutoff(t_q[k] - n_q[k]);
      out[k] = {s * 0.5 * (a[0] + b[0]), s * 0.5 * (a[1] + b[1])};
    }
  }
  return out;
}

}  // namespace tumorsim

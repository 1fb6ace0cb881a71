#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tumorsim/fem.hpp"
#include "tumorsim/mesh.hpp"
#include "tumorsim/nonlocal.hpp"

using namespace tumorsim;

namespace {

bool box_inside(const Vec2& x, double eps) { return std::max(std::abs(x[0]), std::abs(x[1])) <= 1.0 - eps + 1e-12; }

}  // namespace

TEST(Kernel, Normalization) {
  EXPECT_NEAR(kernel_normalization(0.05, 2, OmegaMode::paper_dot), 60000.0, 1e-8);
  EXPECT_DOUBLE_EQ(kernel_normalization(1.0, 2, OmegaMode::paper_dot), 0.375);
  EXPECT_DOUBLE_EQ(kernel_normalization(1.0, 2, OmegaMode::component_consistent), 0.75);
  EXPECT_THROW(kernel_normalization(0.0, 2, OmegaMode::paper_dot), std::invalid_argument);
  EXPECT_THROW(kernel_normalization(0.1, 3, OmegaMode::paper_dot), std::invalid_argument);
}

TEST(Kernel, ModeNames) {
  EXPECT_EQ(haptotaxis_mode_from_string("loc"), HaptotaxisMode::local);
  EXPECT_EQ(haptotaxis_mode_from_string("nonlocal"), HaptotaxisMode::nonlocal);
  EXPECT_EQ(omega_mode_from_string("consistent"), OmegaMode::component_consistent);
  EXPECT_EQ(omega_mode_from_string("paper"), OmegaMode::paper_dot);
  EXPECT_THROW(omega_mode_from_string("other"), std::invalid_argument);
  EXPECT_THROW(haptotaxis_mode_from_string("both"), std::invalid_argument);
}

TEST(Stencil, InteriorBlockAndOddSymmetry) {
  const Mesh mesh(16);
  const double eps = 2 * mesh.h();
  const auto st = build_convolution_stencil(mesh, KernelSpec::make(eps, OmegaMode::paper_dot));
  const auto c = mesh.node_index(8, 8);
  // The box of half-width 2h overlaps the basis supports of the 5x5 block around the node.
  EXPECT_EQ(st.neighbors(c).size(), 25u);
  Vec2 sum{0, 0};
  for (const auto& w : st.weights(c)) {
    sum[0] += w[0];
    sum[1] += w[1];
  }
  EXPECT_NEAR(sum[0], 0.0, 1e-10);
  EXPECT_NEAR(sum[1], 0.0, 1e-10);
  // Reflection through the node flips the weight.
  const auto nb = st.neighbors(c);
  const auto ws = st.weights(c);
  for (std::size_t k = 0; k < nb.size(); ++k) {
    const auto& y = mesh.node(nb[k]);
    const auto& x = mesh.node(c);
    const int di = static_cast<int>(std::lround((y[0] - x[0]) / mesh.h()));
    const int dj = static_cast<int>(std::lround((y[1] - x[1]) / mesh.h()));
    const auto mirror = mesh.node_index(8 - di, 8 - dj);
    for (std::size_t m = 0; m < nb.size(); ++m) {
      if (nb[m] != mirror) continue;
      EXPECT_NEAR(ws[k][0], -ws[m][0], 1e-10);
      EXPECT_NEAR(ws[k][1], -ws[m][1], 1e-10);
    }
  }
}

TEST(Convolution, ConstantFieldVanishesInside) {
  const Mesh mesh(32);
  const double eps = 0.2;
  const auto st = build_convolution_stencil(mesh, KernelSpec::make(eps, OmegaMode::paper_dot));
  const auto conv = apply_convolution(st, std::vector<double>(mesh.num_nodes(), 1.0));
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    if (!box_inside(mesh.node(i), eps)) continue;
    EXPECT_LE(std::abs(conv[i][0]), 1e-12);
    EXPECT_LE(std::abs(conv[i][1]), 1e-12);
  }
}

TEST(Convolution, ZeroExtensionAtTheBoundary) {
  // Near the wall the box is cut and only sees y - x pointing back inside, so k*1 < 0 there.
  const Mesh mesh(16);
  const auto st = build_convolution_stencil(mesh, KernelSpec::make(0.25, OmegaMode::paper_dot));
  const auto conv = apply_convolution(st, std::vector<double>(mesh.num_nodes(), 1.0));
  const auto right_mid = mesh.node_index(16, 8);
  EXPECT_LT(conv[right_mid][0], 0.0);
  EXPECT_NEAR(conv[right_mid][1], 0.0, 1e-12);
  for (auto j : st.neighbors(right_mid)) EXPECT_LT(j, mesh.num_nodes());
}

TEST(Convolution, Linear) {
  const Mesh mesh(16);
  const auto st = build_convolution_stencil(mesh, KernelSpec::make(0.15, OmegaMode::component_consistent));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(mesh.num_nodes()), b(mesh.num_nodes()), c(mesh.num_nodes());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
    c[i] = 2.5 * a[i] - 0.75 * b[i];
  }
  const auto ca = apply_convolution(st, a), cb = apply_convolution(st, b), cc = apply_convolution(st, c);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int d = 0; d < 2; ++d) EXPECT_NEAR(cc[i][d], 2.5 * ca[i][d] - 0.75 * cb[i][d], 1e-12 * std::max(1.0, std::abs(cc[i][d])));
  }
  EXPECT_THROW(apply_convolution(st, std::vector<double>(3)), std::invalid_argument);
}

TEST(Convolution, LinearFieldRatioAtSixteenH) {
  const Mesh mesh(64);
  const double eps = 16 * mesh.h();
  const Vec2 a{0.3, -1.1};
  for (auto [mode, c] : {std::pair{OmegaMode::paper_dot, 0.5}, std::pair{OmegaMode::component_consistent, 1.0}}) {
    const auto st = build_convolution_stencil(mesh, KernelSpec::make(eps, mode));
    std::vector<double> theta(mesh.num_nodes());
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = a[0] * mesh.node(i)[0] + a[1] * mesh.node(i)[1];
    const auto conv = apply_convolution(st, theta);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (!box_inside(mesh.node(i), eps)) continue;
      EXPECT_NEAR(conv[i][0], c * a[0], 0.05 * c * std::abs(a[0]));
      EXPECT_NEAR(conv[i][1], c * a[1], 0.05 * c * std::abs(a[1]));
    }
  }
}

TEST(Convolution, SubCellRadiusStillExactOnLinearFields) {
  // The weights integrate the P1 interpolant exactly, so even eps < h reproduces
  // grad(theta) / 2 for linear data.
  const Mesh mesh(8);
  const double eps = 0.5 * mesh.h();
  const auto st = build_convolution_stencil(mesh, KernelSpec::make(eps, OmegaMode::paper_dot));
  std::vector<double> theta(mesh.num_nodes());
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = 2.0 * mesh.node(i)[0] + mesh.node(i)[1];
  const auto conv = apply_convolution(st, theta);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!box_inside(mesh.node(i), eps)) continue;
    EXPECT_NEAR(conv[i][0], 1.0, 1e-12);
    EXPECT_NEAR(conv[i][1], 0.5, 1e-12);
  }
}

TEST(Convolution, SmoothFieldConsistencyImprovesWithEps) {
  // theta = sin(pi x1) cos(pi x2) at fixed eps / h = 3.2.
  double previous = 1e300;
  for (int n : {32, 64, 128}) {
    const Mesh mesh(n);
    const double eps = 3.2 * mesh.h();
    const auto st = build_convolution_stencil(mesh, KernelSpec::make(eps, OmegaMode::paper_dot));
    const double pi = std::acos(-1.0);
    std::vector<double> theta(mesh.num_nodes());
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = std::sin(pi * mesh.node(i)[0]) * std::cos(pi * mesh.node(i)[1]);
    const auto conv = apply_convolution(st, theta);
    double err = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const auto& x = mesh.node(i);
      if (!box_inside(x, 2 * eps)) continue;
      const double gx = pi * std::cos(pi * x[0]) * std::cos(pi * x[1]);
      const double gy = -pi * std::sin(pi * x[0]) * std::sin(pi * x[1]);
      err = std::max(err, std::hypot(conv[i][0] - 0.5 * gx, conv[i][1] - 0.5 * gy));
    }
    EXPECT_LT(err, previous);
    previous = err;
  }
}

TEST(AdhesionFlux, ZeroCases) {
  const Mesh mesh(16);
  const P1Space space(mesh);
  const std::size_t n = mesh.num_nodes();
  ModelParams p;
  const auto st = build_convolution_stencil(mesh, KernelSpec::make(0.25, OmegaMode::paper_dot));
  const auto theta = space.interpolate([](const Vec2& x) { return 1.0 + x[0] * x[1]; });
  const std::vector<double> half(n, 0.5), zero(n, 0.0), ones(n, 1.0);

  ModelParams off = p;
  off.chi_H = 0.0;
  for (auto mode : {HaptotaxisMode::local, HaptotaxisMode::nonlocal}) {
    for (const auto& j : adhesion_flux(mode, space, half, zero, theta, off, &st)) {
      EXPECT_EQ(j[0], 0.0);
      EXPECT_EQ(j[1], 0.0);
    }
    for (const auto& j : adhesion_flux(mode, space, half, half, theta, p, &st)) {
      EXPECT_EQ(j[0], 0.0);
      EXPECT_EQ(j[1], 0.0);
    }
  }
  for (const auto& j : adhesion_flux(HaptotaxisMode::local, space, half, zero, ones, p, nullptr)) {
    EXPECT_EQ(j[0], 0.0);
    EXPECT_EQ(j[1], 0.0);
  }
  // Nonlocal with constant theta vanishes wherever the box stays inside the domain.
  const auto jn = adhesion_flux(HaptotaxisMode::nonlocal, space, half, zero, ones, p, &st);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    bool inside = true;
    for (auto v : mesh.element(e)) inside = inside && box_inside(mesh.node(v), 0.25);
    if (!inside) continue;
    for (int q = 0; q < 3; ++q) {
      EXPECT_NEAR(jn[3 * e + q][0], 0.0, 1e-15);
      EXPECT_NEAR(jn[3 * e + q][1], 0.0, 1e-15);
    }
  }
  EXPECT_THROW(adhesion_flux(HaptotaxisMode::nonlocal, space, half, zero, theta, p, nullptr), std::invalid_argument);
}

TEST(AdhesionFlux, LocalUsesElementGradient) {
  const Mesh mesh(4);
  const P1Space space(mesh);
  ModelParams p;
  p.chi_H = 2.0;
  const std::size_t n = mesh.num_nodes();
  const auto theta = space.interpolate([](const Vec2& x) { return 3.0 * x[0] - x[1]; });
  const auto j = adhesion_flux(HaptotaxisMode::local, space, std::vector<double>(n, 0.8), std::vector<double>(n, 0.3),
                               theta, p, nullptr);
  for (const auto& v : j) {
    EXPECT_NEAR(v[0], 2.0 * 0.5 * 3.0, 1e-13);
    EXPECT_NEAR(v[1], 2.0 * 0.5 * -1.0, 1e-13);
  }
}

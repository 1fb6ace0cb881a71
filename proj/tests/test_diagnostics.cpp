#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "tumorsim/diagnostics.hpp"
#include "tumorsim/initial.hpp"
#include "tumorsim/mesh.hpp"

using namespace tumorsim;

TEST(Summarize, ZeroState) {
  const Mesh mesh(4);
  const P1Space space(mesh);
  const auto row = summarize(State::zeros(mesh.num_nodes()), space, ModelParams{});
  EXPECT_EQ(row.tumor_mass, 0.0);
  EXPECT_EQ(row.necrotic_mass, 0.0);
  EXPECT_EQ(row.nutrient_mass, 0.0);
  EXPECT_EQ(row.mde_mass, 0.0);
  EXPECT_EQ(row.ecm_total, 0.0);
  EXPECT_EQ(row.energy, 0.0);
}

TEST(Summarize, MassesAndRanges) {
  const Mesh mesh(8);
  const P1Space space(mesh);
  State s = State::zeros(mesh.num_nodes());
  std::fill(s.phi_T.begin(), s.phi_T.end(), 1.0);
  s.phi_M[3] = -0.25;
  s.phi_M[7] = 0.5;
  const auto row = summarize(s, space, ModelParams{}, 7);
  EXPECT_NEAR(row.tumor_mass, 4.0, 1e-13);
  EXPECT_EQ(row.ranges[4].min, -0.25);
  EXPECT_EQ(row.ranges[4].max, 0.5);
  EXPECT_EQ(row.gauss_seidel_iterations, 7);
  // Same code path as the model energy.
  EXPECT_EQ(row.energy, energy(space, s.phi_T, s.phi_sigma, ModelParams{}));
  EXPECT_THROW(summarize(State::zeros(3), space, ModelParams{}), std::invalid_argument);
}

TEST(Summarize, EcmBandTotal) {
  for (int n : {4, 7, 16}) {
    const Mesh mesh(n);
    const P1Space space(mesh);
    const auto s = make_initial_state(mesh, InitialSpec{}, ModelParams{});
    EXPECT_NEAR(summarize(s, space, ModelParams{}).ecm_total, 3.0, 1e-12) << "n=" << n;
  }
}

TEST(Csv, HeaderAndRowAgree) {
  const auto header = csv_header();
  EXPECT_EQ(header.rfind("t,tumor_mass,necrotic_mass,nutrient_mass,mde_mass,ecm_total,energy,min_phi_T,max_phi_T", 0), 0u);
  DiagnosticsRow r;
  r.t = 0.1;
  r.energy = 1.0 / 3.0;
  r.gauss_seidel_iterations = 4;
  const auto row = csv_row(r);
  auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  EXPECT_EQ(count(header), count(row));
  EXPECT_EQ(row.rfind("0.10000000000000001,", 0), 0u);
  EXPECT_NE(row.find("0.33333333333333331"), std::string::npos);
  EXPECT_EQ(row.substr(row.size() - 2), ",4");
}

TEST(EcmOracle, ZeroEnzyme) {
  const std::vector<double> theta0{1.0, 0.5, 0.0};
  const std::vector<MdeSnapshot> h{{0.0, {0, 0, 0}}, {1.0, {0, 0, 0}}};
  EXPECT_EQ(ecm_closed_form(theta0, h, 1.0, 1.0), theta0);
}

TEST(EcmOracle, ConstantEnzyme) {
  const std::vector<double> theta0{1.0, 0.5};
  std::vector<MdeSnapshot> h;
  for (int k = 0; k <= 10; ++k) h.push_back({0.1 * k, {1.0, 1.0}});
  const auto th = ecm_closed_form(theta0, h, 1.0, 1.0);
  EXPECT_NEAR(th[0], 0.36787944117144233, 1e-15);
  EXPECT_NEAR(th[1], 0.5 * 0.36787944117144233, 1e-15);
}

TEST(EcmOracle, LinearEnzyme) {
  const std::vector<double> theta0{1.0};
  std::vector<MdeSnapshot> h;
  for (int k = 0; k <= 100; ++k) h.push_back({0.01 * k, {0.01 * k}});
  EXPECT_NEAR(ecm_closed_form(theta0, h, 1.0, 1.0)[0], 0.6065306597126334, 1e-14);
  // Interpolation inside the last interval: int_0^0.505 s ds.
  EXPECT_NEAR(ecm_closed_form(theta0, h, 1.0, 0.505)[0], std::exp(-0.5 * 0.505 * 0.505), 1e-14);
}

TEST(EcmOracle, InsufficientHistory) {
  const std::vector<double> theta0{1.0};
  EXPECT_THROW(ecm_closed_form(theta0, {}, 1.0, 0.5), std::invalid_argument);
  const std::vector<MdeSnapshot> late{{0.1, {1.0}}, {1.0, {1.0}}};
  EXPECT_THROW(ecm_closed_form(theta0, late, 1.0, 0.5), std::invalid_argument);
  const std::vector<MdeSnapshot> short_h{{0.0, {1.0}}, {0.4, {1.0}}};
  EXPECT_THROW(ecm_closed_form(theta0, short_h, 1.0, 0.5), std::invalid_argument);
}

TEST(Manufactured, SecondOrderAndMonotone) {
  const std::vector<int> res{16, 32, 64};
  const auto rows = manufactured_convergence_study(res);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(std::isnan(rows[0].order));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].l2_error, rows[i - 1].l2_error);
    EXPECT_GE(rows[i].order, 1.9);
  }
}

TEST(Manufactured, ZeroSolution) {
  ManufacturedOptions opts;
  opts.amplitude = 0.0;
  opts.t_end = 0.001;
  const std::vector<int> res{4, 8, 16};
  for (const auto& r : manufactured_convergence_study(res, opts)) EXPECT_EQ(r.l2_error, 0.0);
  const std::vector<int> two{4, 8};
  EXPECT_THROW(manufactured_convergence_study(two), std::invalid_argument);
}

TEST(L2Error, ExactForInterpolatedLinear) {
  const Mesh mesh(5);
  const P1Space space(mesh);
  auto f = [](const Vec2& x) { return 1.0 + 2.0 * x[0] - x[1]; };
  EXPECT_NEAR(l2_error(space, space.interpolate(f), f), 0.0, 1e-14);
  // ||1 - 0||_{L2} = |Omega|^{1/2}.
  EXPECT_NEAR(l2_error(space, std::vector<double>(mesh.num_nodes(), 1.0), [](const Vec2&) { return 0.0; }), 2.0, 1e-14);
}

TEST(KernelCheck, TableAndRatio) {
  const auto rows = kernel_consistency_table(0.05, 64, OmegaMode::paper_dot, 2);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].n_per_side, 128);
  EXPECT_DOUBLE_EQ(rows[1].eps, 0.025);
  EXPECT_LT(rows[1].sup_error, rows[0].sup_error);

  const Mesh mesh(64);
  const auto st = build_convolution_stencil(mesh, KernelSpec::make(0.05, OmegaMode::paper_dot));
  const auto r = linear_gradient_ratio(mesh, st, {1.0, 0.5});
  EXPECT_NEAR(r.mean, 0.5, 0.025);
  EXPECT_GT(r.nodes, 0u);
}

TEST(FluxCoherence, ShrinksWithEps) {
  const Mesh mesh(128);
  const double wide = flux_coherence(mesh, KernelSpec::make(0.1, OmegaMode::component_consistent));
  const double narrow = flux_coherence(mesh, KernelSpec::make(0.05, OmegaMode::component_consistent));
  EXPECT_LT(narrow, wide);
  EXPECT_LT(narrow, 0.1);
}

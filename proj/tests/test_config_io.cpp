#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tumorsim/config.hpp"
#include "tumorsim/io.hpp"
#include "tumorsim/mesh.hpp"

using namespace tumorsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "tumorsim_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, EmptyFileGivesReferenceDefaults) {
  const auto cfg = parse_config_string("");
  EXPECT_EQ(cfg, RunConfig{});
  EXPECT_DOUBLE_EQ(cfg.model.eps_T, 0.005);
  EXPECT_DOUBLE_EQ(cfg.model.chi_H, 0.001);
  EXPECT_DOUBLE_EQ(cfg.model.E_bar, 0.045);
  EXPECT_DOUBLE_EQ(cfg.model.sigma_VN, 0.44);
  EXPECT_DOUBLE_EQ(cfg.model.D_sigma, 0.001);
  EXPECT_DOUBLE_EQ(cfg.scheme.dt, 0.01);
  EXPECT_EQ(cfg.n_per_side, 64);
  EXPECT_EQ(cfg.haptotaxis, HaptotaxisMode::local);
}

TEST(Config, SectionsDottedKeysAndComments) {
  const auto cfg = parse_config_string(R"(
# comment
[model]
chi_H = 0.002   # trailing comment
lambda_T_pro=3

[scheme]
dt = 0.005
on_nonconverged = accept
nutrient_dirichlet = false
mesh.n_per_side = 32

[haptotaxis]
mode = nonloc
[kernel]
eps = 0.0525
omega_mode = consistent
[initial]
tumor = perturbed
seed = 12
[output]
directory = runs/a
formats = csv
every = 5
)");
  EXPECT_DOUBLE_EQ(cfg.model.chi_H, 0.002);
  EXPECT_DOUBLE_EQ(cfg.model.lambda_T_pro, 3.0);
  EXPECT_DOUBLE_EQ(cfg.scheme.dt, 0.005);
  EXPECT_EQ(cfg.scheme.on_nonconverged, NonconvergedPolicy::accept);
  EXPECT_FALSE(cfg.scheme.nutrient_dirichlet);
  EXPECT_EQ(cfg.n_per_side, 32);
  EXPECT_EQ(cfg.haptotaxis, HaptotaxisMode::nonlocal);
  EXPECT_DOUBLE_EQ(cfg.kernel_eps, 0.0525);
  EXPECT_EQ(cfg.omega_mode, OmegaMode::component_consistent);
  ASSERT_TRUE(cfg.kernel().has_value());
  EXPECT_EQ(cfg.initial.tumor, TumorShape::perturbed);
  EXPECT_EQ(cfg.initial.seed, 12u);
  EXPECT_EQ(cfg.output.directory, "runs/a");
  EXPECT_FALSE(cfg.output.vtk);
  EXPECT_TRUE(cfg.output.csv);
  EXPECT_EQ(cfg.scheme.output_every, 5);
}

TEST(Config, NonlocalNeedsKernelRadius) {
  try {
    parse_config_string("haptotaxis.mode = nonloc\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("kernel.eps"), std::string::npos);
  }
}

TEST(Config, NegativeRateNamesKey) {
  try {
    parse_config_string("model.lambda_T_pro = -1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("lambda_T_pro"), std::string::npos);
  }
}

TEST(Config, ParseErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      parse_config_string(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("[model]\n\nnot_a_key = 1\n"), 3);
  EXPECT_EQ(line_of("model.chi_H = abc\n"), 1);
  EXPECT_EQ(line_of("# c\n[model\n"), 2);
  EXPECT_EQ(line_of("model.chi_H\n"), 1);
  EXPECT_EQ(line_of("model.chi_H = 1\nmodel.chi_H = 2\n"), 2);
  EXPECT_EQ(line_of("scheme.n_iter = 2.5\n"), 1);
  EXPECT_EQ(line_of("output.formats = vtk,png\n"), 1);
  EXPECT_EQ(line_of("initial.tumor = square\n"), 1);
}

TEST(Config, RoundTrip) {
  RunConfig cfg;
  cfg.model.chi_H = 0.1 + 0.2;  // not exactly representable as a short decimal
  cfg.model.mobility = MobilityMode::constant;
  cfg.scheme.tol = 1e-8;
  cfg.haptotaxis = HaptotaxisMode::nonlocal;
  cfg.kernel_eps = 0.0275;
  cfg.initial.ecm = EcmShape::constant;
  cfg.output.vtk = false;
  const auto text = to_config_string(cfg);
  EXPECT_EQ(parse_config_string(text), cfg);
  EXPECT_EQ(parse_config_string(to_config_string(RunConfig{})), RunConfig{});
}

TEST(Config, FileAndMissingFile) {
  const auto p = scratch("cfg.ini");
  {
    std::ofstream out(p);
    out << "[mesh]\nn_per_side = 16\n";
  }
  EXPECT_EQ(parse_config(p).n_per_side, 16);
  EXPECT_THROW(parse_config(scratch("does_not_exist.ini")), ConfigError);
}

TEST(Config, ShippedDefaultsFileMatchesBuiltIns) {
  const fs::path file = fs::path(TUMORSIM_SOURCE_DIR) / "config" / "default.ini";
  EXPECT_EQ(parse_config(file), RunConfig{});
}

TEST(Vtk, SingleCellZeroState) {
  const Mesh mesh(1);
  const auto p = scratch("one.vtk");
  write_vtk(p, mesh, State::zeros(4));
  const auto text = slurp(p);
  EXPECT_EQ(text.rfind("# vtk DataFile Version 3.0\n", 0), 0u);
  EXPECT_NE(text.find("DATASET UNSTRUCTURED_GRID\n"), std::string::npos);
  EXPECT_NE(text.find("POINTS 4 double\n"), std::string::npos);
  EXPECT_NE(text.find("CELLS 2 8\n"), std::string::npos);
  EXPECT_NE(text.find("CELL_TYPES 2\n5\n5\n"), std::string::npos);
  EXPECT_NE(text.find("POINT_DATA 4\n"), std::string::npos);
  for (const auto name : State::field_names) {
    const auto tag = "SCALARS " + std::string(name) + " double 1\nLOOKUP_TABLE default\n0\n0\n0\n0\n";
    EXPECT_NE(text.find(tag), std::string::npos) << name;
  }
}

TEST(Vtk, PointCountAndCoordinates) {
  const Mesh mesh(3);
  const auto p = scratch("three.vtk");
  State s = State::zeros(mesh.num_nodes());
  s.phi_T[5] = 0.25;
  write_vtk(p, mesh, s);
  std::ifstream in(p);
  std::string line;
  std::size_t points = 0;
  while (std::getline(in, line)) {
    if (line.rfind("POINTS ", 0) == 0) {
      std::istringstream ls(line.substr(7));
      ls >> points;
      for (std::size_t i = 0; i < points; ++i) {
        double x, y, z;
        in >> x >> y >> z;
        EXPECT_EQ(x, mesh.node(i)[0]);
        EXPECT_EQ(y, mesh.node(i)[1]);
        EXPECT_EQ(z, 0.0);
      }
    }
  }
  EXPECT_EQ(points, mesh.num_nodes());
  EXPECT_THROW(write_vtk(p, mesh, State::zeros(3)), std::invalid_argument);
  EXPECT_EQ(vtk_frame_name(12), "state_000012.vtk");
}

TEST(Csv, WriterProducesHeaderAndRows) {
  const auto p = scratch("diag.csv");
  {
    CsvWriter w(p);
    DiagnosticsRow r;
    r.t = 0.5;
    w.write(r);
  }
  std::ifstream in(p);
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, csv_header());
  EXPECT_EQ(row, csv_row(DiagnosticsRow{0.5}));
  EXPECT_FALSE(std::getline(in, extra));
}

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args) {
  const auto log = fs::temp_directory_path() / "tumorsim_cli_test.log";
  const std::string cmd = std::string(TUMORSIM_EXE) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::ostringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

fs::path write_config(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "tumorsim_cli";
  fs::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, UnknownSubcommandPrintsUsage) {
  const auto r = run("frobnicate");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
  EXPECT_NE(r.out.find("kernel-check"), std::string::npos);
  EXPECT_EQ(run("").code, 1);
}

TEST(Cli, SimulateZeroEndTime) {
  const auto out = fs::temp_directory_path() / "tumorsim_cli" / "t0";
  fs::remove_all(out);
  const auto cfg = write_config("t0.ini", "[scheme]\nt_end = 0\n[mesh]\nn_per_side = 8\n");
  const auto r = run("simulate --config " + cfg.string() + " --output " + out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(out / "state_000000.vtk"));
  EXPECT_FALSE(fs::exists(out / "state_000001.vtk"));
  EXPECT_EQ(count_lines(out / "diagnostics.csv"), 2u);
  EXPECT_TRUE(fs::exists(out / "config.resolved.ini"));
}

TEST(Cli, OutputDirectoryPrecedence) {
  const auto base = fs::temp_directory_path() / "tumorsim_cli";
  const auto env_dir = base / "from_env";
  const auto flag_dir = base / "from_flag";
  fs::remove_all(env_dir);
  fs::remove_all(flag_dir);
  const auto cfg = write_config("prec.ini", "[scheme]\nt_end = 0\n[mesh]\nn_per_side = 4\n[output]\ndirectory = " +
                                                (base / "from_file").string() + "\n");
  const std::string env = "TUMORSIM_OUTPUT_DIR=" + env_dir.string() + " ";
  const auto cmd = "simulate --config " + cfg.string();
  // The environment wins over the file.
  ASSERT_EQ(std::system((env + TUMORSIM_EXE + " " + cmd + " > /dev/null").c_str()), 0);
  EXPECT_TRUE(fs::exists(env_dir / "diagnostics.csv"));
  // The flag wins over the environment.
  ASSERT_EQ(std::system((env + TUMORSIM_EXE + " " + cmd + " --output " + flag_dir.string() + " > /dev/null").c_str()), 0);
  EXPECT_TRUE(fs::exists(flag_dir / "diagnostics.csv"));
}

TEST(Cli, ResolvedConfigRoundTrips) {
  const auto out = fs::temp_directory_path() / "tumorsim_cli" / "echo";
  const auto cfg = write_config("echo.ini", "[scheme]\nt_end = 0\n[mesh]\nn_per_side = 4\n[model]\nchi_H = 0.003\n");
  ASSERT_EQ(run("simulate --config " + cfg.string() + " --output " + out.string()).code, 0);
  const auto out2 = fs::temp_directory_path() / "tumorsim_cli" / "echo2";
  ASSERT_EQ(run("simulate --config " + (out / "config.resolved.ini").string() + " --output " + out2.string()).code, 0);
  auto a = slurp(out / "config.resolved.ini");
  auto b = slurp(out2 / "config.resolved.ini");
  a = a.substr(0, a.find("[output]"));
  b = b.substr(0, b.find("[output]"));
  EXPECT_EQ(a, b);
}

TEST(Cli, IdenticalRunsGiveIdenticalCsv) {
  const auto base = fs::temp_directory_path() / "tumorsim_cli";
  const auto cfg = write_config("det.ini", "[scheme]\nt_end = 0.05\n[mesh]\nn_per_side = 8\n[output]\nformats = csv\nevery = 1\n");
  ASSERT_EQ(run("simulate --config " + cfg.string() + " --output " + (base / "d1").string()).code, 0);
  ASSERT_EQ(run("simulate --config " + cfg.string() + " --output " + (base / "d2").string()).code, 0);
  EXPECT_EQ(slurp(base / "d1" / "diagnostics.csv"), slurp(base / "d2" / "diagnostics.csv"));
  EXPECT_EQ(count_lines(base / "d1" / "diagnostics.csv"), 7u);
}

TEST(Cli, ValidationFailures) {
  const auto bad = write_config("bad.ini", "haptotaxis.mode = nonloc\n");
  const auto r = run("simulate --config " + bad.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("kernel.eps"), std::string::npos);
  const auto neg = write_config("neg.ini", "model.lambda_T_pro = -1\n");
  EXPECT_EQ(run("simulate --config " + neg.string()).code, 1);
  const auto ok = write_config("ok.ini", "scheme.t_end = 0\n");
  EXPECT_EQ(run("simulate --config " + ok.string() + " --mode nonloc").code, 1);
  EXPECT_EQ(run("simulate --config /nonexistent/file.ini").code, 1);
  EXPECT_EQ(run("kernel-check --eps 0.05").code, 1);
  EXPECT_EQ(run("convergence --levels 2").code, 1);
}

TEST(Cli, SolverFailureExitCode) {
  const auto base = fs::temp_directory_path() / "tumorsim_cli";
  const auto cfg = write_config("fail.ini", "[scheme]\nt_end = 0.02\nn_iter = 1\ntol = 1e-300\n[mesh]\nn_per_side = 4\n");
  const auto r = run("simulate --config " + cfg.string() + " --output " + (base / "fail").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("t = 0.01"), std::string::npos);
  EXPECT_EQ(run("simulate --config " + cfg.string() + " --output " + (base / "fail").string() +
                " --on-nonconverged accept").code,
            0);
}

TEST(Cli, KernelCheckPaperRatio) {
  const auto r = run("kernel-check --eps 0.05 --n 64 --omega paper --levels 1");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto pos = r.out.find("gradient ratio");
  ASSERT_NE(pos, std::string::npos);
  const auto colon = r.out.find("): ", pos);
  const double ratio = std::stod(r.out.substr(colon + 3));
  EXPECT_NEAR(ratio, 0.5, 0.025);
}

TEST(Cli, ConvergenceAndOracle) {
  const auto c = run("convergence --levels 3");
  ASSERT_EQ(c.code, 0) << c.out;
  EXPECT_NE(c.out.find("order"), std::string::npos);
  const auto cfg = write_config("oracle.ini", "[mesh]\nn_per_side = 8\n[initial]\ntumor_radius = 0.5\n");
  const auto o = run("ecm-oracle --config " + cfg.string() + " --t-end 0.1");
  ASSERT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("max |theta"), std::string::npos);
}

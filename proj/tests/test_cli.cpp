#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string command = std::string(CVCLONE_CLI_PATH) + " " + args + " 2>&1";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buffer{};
  while (std::fgets(buffer.data(), static_cast<int>(buffer.size()), pipe) != nullptr) result.output += buffer.data();
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string header_line(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') return line;
  }
  return {};
}

std::filesystem::path scratch_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cvclone_cli_" + std::to_string(::getpid()) + "_" + name);
}

constexpr const char* kSchema = "m,tau_tot,mu,omega,f_tele,regime,n_opt,tau0_opt,f_lcdt,winner";

TEST(Cli, CompareWritesSchema) {
  const auto r = run("compare --m 2 --tau 1 --mu 0.2 --omega 1");
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(header_line(r.output), kSchema);
}

TEST(Cli, SweepWritesSchema) {
  const auto r = run("sweep --var omega --start 0 --stop 2 --steps 5 --m 2 --tau 1");
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(header_line(r.output), kSchema);
}

TEST(Cli, DomainErrorsExitTwo) {
  EXPECT_EQ(run("compare --m 1 --tau 1").code, 2);
  EXPECT_EQ(run("compare --m 2 --tau -1").code, 2);
  EXPECT_EQ(run("reproduce fig9").code, 2);
  EXPECT_EQ(run("compare --bogus").code, 2);
}

TEST(Cli, HelpAndVersionExitZero) {
  EXPECT_EQ(run("--help").code, 0);
  const auto v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.output.find("1.0.0"), std::string::npos);
}

TEST(Cli, OutputFileMatchesStdout) {
  const auto path = scratch_file("out.csv");
  const auto r = run("optimize --m 3 --tau 1.5 --mu 0.1 --out " + path.string());
  ASSERT_EQ(r.code, 0) << r.output;
  std::ifstream in(path);
  std::stringstream file;
  file << in.rdbuf();
  EXPECT_EQ(file.str(), run("optimize --m 3 --tau 1.5 --mu 0.1").output);
  std::filesystem::remove(path);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto path = scratch_file("config.toml");
  {
    std::ofstream cfg(path);
    cfg << "m = 3\ntau = 0.7\nmu = 0.3\nomega = 1.5\n";
  }
  const auto from_config = run("compare --config " + path.string());
  ASSERT_EQ(from_config.code, 0) << from_config.output;
  EXPECT_EQ(from_config.output, run("compare --m 3 --tau 0.7 --mu 0.3 --omega 1.5").output);
  const auto overridden = run("compare --config " + path.string() + " --m 4");
  EXPECT_EQ(overridden.output, run("compare --m 4 --tau 0.7 --mu 0.3 --omega 1.5").output);
  std::filesystem::remove(path);
}

TEST(Cli, MonteCarloIsReproducible) {
  const std::string args = "teleclone-fidelity --m 2 --tau 0.5 --mu 0.1 --n 0.5 --samples 2000 --seed 5";
  const auto a = run(args);
  ASSERT_EQ(a.code, 0) << a.output;
  EXPECT_EQ(a.output, run(args).output);
  EXPECT_EQ(run("teleclone-fidelity --samples 10").code, 2);
}

TEST(Cli, OtherSubcommandsSucceed) {
  EXPECT_EQ(run("lcdt-fidelity --m 2 --tau 1 --alpha-re 2").code, 0);
  EXPECT_EQ(run("thresholds --m 2 --tau 1 --mu 0.4").code, 0);
  EXPECT_EQ(run("reproduce fig2a").code, 0);
}

}  // namespace

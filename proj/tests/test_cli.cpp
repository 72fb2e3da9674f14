// End-to-end checks of the command-line binary: determinism, golden output,
// exit codes, and config-file handling.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(FRINGELAB_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  CliResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("sample is deterministic for a fixed seed") {
  CliResult a = run_cli("sample --model patricia --n 5 --p 1/2 --seed 7");
  CliResult b = run_cli("sample --model patricia --n 5 --p 1/2 --seed 7");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CliResult c = run_cli("sample --model patricia --n 5 --p 1/2 --seed 8");
  CHECK(c.out != a.out);
}

TEST_CASE("sample trivial cases") {
  CHECK(run_cli("sample --model uniform --n 2").out == "(*,*)\n");
  CHECK(run_cli("sample --model beta --beta -1 --n 1").out == "*\n");
  CliResult code = run_cli("sample --model uniform --n 2 --format code");
  CHECK(code.out == "100\n");
}

TEST_CASE("sample matches the committed golden output") {
  CliResult r = run_cli("sample --model patricia --n 5 --p 1/2 --seed 7");
  CHECK(r.out == read_file(std::string(FRINGELAB_GOLDEN_DIR) + "/sample_patricia_n5_seed7.txt"));
}

TEST_CASE("tables match the committed golden file digit for digit") {
  CliResult r = run_cli("tables");
  CHECK(r.exit_code == 0);
  CHECK(r.out == read_file(std::string(FRINGELAB_GOLDEN_DIR) + "/tables.txt"));
}

TEST_CASE("cladogram tables scale t3 and t4a") {
  CliResult plain = run_cli("tables --format json");
  CliResult clad = run_cli("tables --cladogram --format json");
  CHECK(plain.exit_code == 0);
  CHECK(clad.exit_code == 0);
  // spot values: uniform row t3 doubles from 0.03125 to 0.0625
  CHECK(plain.out.find("\"t3\": 0.03125") != std::string::npos);
  CHECK(clad.out.find("\"t3\": 0.0625") != std::string::npos);
}

TEST_CASE("constants emits the documented json record") {
  CliResult r = run_cli("constants --model cbst --tree \"(*,*)\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"symbolic\": \"3 e^4/256 - 3 e^2/16 + 233/256\"") != std::string::npos);
  CHECK(r.out.find("\"model\": \"cbst\"") != std::string::npos);

  CliResult ebst = run_cli("constants --model ebst --tree \"(*,(*,*))\"");
  CHECK(ebst.out.find("\"symbolic\": \"1/24\"") != std::string::npos);

  CliResult pat = run_cli("constants --model patricia --tree \"(*,*)\" --p 1/3");
  CHECK(pat.exit_code == 0);
  CHECK(pat.out.find("\"pi_t_exact\": \"4/9\"") != std::string::npos);
  CHECK(pat.out.find("\"periodic\": false") != std::string::npos);
}

TEST_CASE("census csv conserves counts per replicate") {
  // even with a small shape cutoff, the leaf-size rows account for every
  // node: their count column sums to 2n-1 per replicate
  CliResult r = run_cli("census --model cb --n 1000 --reps 5 --max-leaves 5 --seed 3");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "model,n,rep,kind,key,count");
  std::array<long, 5> leaf_size_sums{};
  std::array<long, 5> shape_sums{};
  while (std::getline(lines, line)) {
    size_t p1 = line.find(',');
    size_t p2 = line.find(',', p1 + 1);
    size_t p3 = line.find(',', p2 + 1);
    size_t p4 = line.find(',', p3 + 1);
    size_t p5 = line.find(',', p4 + 1);
    int rep = std::stoi(line.substr(p2 + 1, p3 - p2 - 1));
    std::string kind = line.substr(p3 + 1, p4 - p3 - 1);
    long count = std::stol(line.substr(p5 + 1));
    if (kind == "leaf_size")
      leaf_size_sums[static_cast<size_t>(rep)] += count;
    else
      shape_sums[static_cast<size_t>(rep)] += count;
  }
  for (long s : leaf_size_sums) CHECK(s == 1999);
  // shape rows cover only fringes within the cutoff, so strictly fewer
  for (size_t i = 0; i < 5; ++i) CHECK(shape_sums[i] < leaf_size_sums[i]);
}

TEST_CASE("compare emits verdicts and exits zero on pass") {
  CliResult r = run_cli(
      "compare --model uniform --tree \"(*,*)\" --n 4000 --reps 200 --seed 5 --jobs 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("model,n,shape_code,stat,value,predicted,z") == 0);
  CHECK(r.out.find("fringe_prob") != std::string::npos);
  CHECK(r.out.find("verdict") != std::string::npos);
}

TEST_CASE("compare exits one on a verdict failure") {
  // at n = 2 every tree is the cherry: the count is constant at 1, infinitely
  // far from the limiting fringe probability 1/8
  CliResult r = run_cli("compare --model uniform --tree \"(*,*)\" --n 2 --reps 10");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find(",verdict,0,") != std::string::npos);
}

TEST_CASE("oscillate emits the phase-folded csv") {
  CliResult r = run_cli(
      "oscillate --tree \"(*,*)\" --p 1/2 --grid 2^8..2^10 --points-per-octave 2 --reps 10 "
      "--seed 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("n,log_n_mod_d,empirical,predicted,stderr", 0) == 0);
  int lines = 0;
  for (char c : r.out) lines += (c == '\n');
  CHECK(lines == 6);  // header + 5 grid points
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("sample --model nosuch --n 3").exit_code == 2);
  CHECK(run_cli("sample").exit_code == 2);                       // missing --n
  CHECK(run_cli("constants --model cbst").exit_code == 2);      // missing --tree
  CHECK(run_cli("constants --model bst --tree \"(*,*)\"").exit_code == 2);
  CHECK(run_cli("sample --model patricia --n 4 --p 2").exit_code == 2);
  CHECK(run_cli("nosuchcommand").exit_code == 2);
}

TEST_CASE("flags override the config file") {
  std::string cfg_path = "/tmp/fringelab_test_cfg.ini";
  {
    std::ofstream cfg(cfg_path);
    cfg << "model=uniform\nn=2\nseed=1\n";
  }
  CliResult from_cfg = run_cli("sample --config " + cfg_path);
  CHECK(from_cfg.exit_code == 0);
  CHECK(from_cfg.out == "(*,*)\n");
  CliResult overridden = run_cli("sample --config " + cfg_path + " --n 1");
  CHECK(overridden.out == "*\n");
  std::remove(cfg_path.c_str());
}

TEST_CASE("help exits zero") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("sample --help").exit_code == 0);
}

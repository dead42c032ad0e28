#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "lowrank/atoms.hpp"
#include "lowrank/matrix_market.hpp"

// Path of the command-line binary, injected by the build.
#ifndef LOWRANK_CLI_PATH
#error "LOWRANK_CLI_PATH must be defined"
#endif

namespace fs = std::filesystem;
using lowrank::Matrix;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// A fresh scratch directory per test case, removed on destruction.
struct Scratch {
  fs::path dir;

  Scratch() {
    static int counter = 0;
    dir = fs::temp_directory_path() /
          ("lowrank-cli-test-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }

  // Runs the binary with `args`, capturing exit code, stdout, and stderr.
  // `env` is prepended verbatim (e.g. "LOWRANK_SEED=7").
  CliResult run(const std::string& args, const std::string& env = "") const {
    const fs::path out_path = dir / "stdout.txt";
    const fs::path err_path = dir / "stderr.txt";
    std::string command = env.empty() ? "" : env + " ";
    command += "'" LOWRANK_CLI_PATH "' " + args + " > '" + out_path.string() +
               "' 2> '" + err_path.string() + "'";
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
  }

  std::string path(const std::string& name) const {
    return (dir / name).string();
  }
};

std::string write_diagonal_input(const Scratch& scratch) {
  Matrix y = Matrix::Zero(3, 3);
  y(0, 0) = 3.0;
  y(1, 1) = 2.0;
  y(2, 2) = 1.0;
  const std::string path = scratch.path("input.mtx");
  lowrank::write_matrix_market_array_file(path, y);
  return path;
}

}  // namespace

TEST_SUITE("cli fit") {
  TEST_CASE("a diagonal target is fit exactly and all outputs land on disk") {
    Scratch scratch;
    const std::string input = write_diagonal_input(scratch);
    const auto result =
        scratch.run("fit --loss quadratic --input '" + input +
                    "' --k 3 --algorithm greedy --output-dir '" +
                    scratch.path("run") + "'");
    CHECK(result.exit_code == 0);
    CHECK(result.out == "f=14 atoms=3\n");
    CHECK(result.err.rfind("wrote ", 0) == 0);

    const Matrix estimate = lowrank::read_matrix_market_file(
        scratch.path("run") + "/estimate.mtx");
    Matrix y = Matrix::Zero(3, 3);
    y(0, 0) = 3.0;
    y(1, 1) = 2.0;
    y(2, 2) = 1.0;
    CHECK((estimate - y).norm() <= 1e-6);

    std::ifstream support_in(scratch.path("run") + "/support.txt");
    const auto support = lowrank::SupportSet::read(support_in);
    CHECK(support.size() == 3);

    const std::string history = slurp(scratch.path("run") + "/history.csv");
    CHECK(history.rfind("iteration,gain,f_after,sigma_estimate\n", 0) == 0);
    // Final row: iteration 3 ends at the full squared norm.
    CHECK(history.find("\n3,") != std::string::npos);
    CHECK(history.find(",14,") != std::string::npos);
  }

  TEST_CASE("a zero budget produces the empty model") {
    Scratch scratch;
    const std::string input = write_diagonal_input(scratch);
    const auto result = scratch.run("fit --loss quadratic --input '" + input +
                                    "' --k 0 --output-dir '" +
                                    scratch.path("run") + "'");
    CHECK(result.exit_code == 0);
    CHECK(result.out == "f=0 atoms=0\n");
  }

  TEST_CASE("reruns with one seed are byte-identical") {
    Scratch scratch;
    const std::string input = write_diagonal_input(scratch);
    const std::string args = "fit --loss logistic --k 2 --seed 3";
    Matrix x(4, 5);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 5; ++j) x(i, j) = (i + j) % 2;
    lowrank::write_matrix_market_array_file(scratch.path("binary.mtx"), x);
    for (const char* run : {"a", "b"}) {
      const auto result =
          scratch.run("fit --loss logistic --input '" +
                      scratch.path("binary.mtx") + "' --k 2 --seed 3 " +
                      "--refit-max-iter 500 --output-dir '" +
                      scratch.path(run) + "'");
      REQUIRE(result.exit_code == 0);
    }
    for (const char* name : {"support.txt", "estimate.mtx", "history.csv"})
      CHECK(slurp(scratch.path("a") + "/" + name) ==
            slurp(scratch.path("b") + "/" + name));
  }

  TEST_CASE("missing inputs are reported as failures") {
    Scratch scratch;
    const auto result = scratch.run("fit --loss quadratic --input '" +
                                    scratch.path("absent.mtx") + "'");
    CHECK(result.exit_code == 1);
    CHECK(result.err.rfind("error: ", 0) == 0);
  }

  TEST_CASE("config files are honored and flags take precedence") {
    Scratch scratch;
    const std::string input = write_diagonal_input(scratch);
    {
      std::ofstream config(scratch.path("config.ini"));
      config << "[fit]\nk=2\nalgorithm=greedy\n";
    }
    const std::string base = "--config '" + scratch.path("config.ini") +
                             "' fit --loss quadratic --input '" + input + "'";
    const auto from_file =
        scratch.run(base + " --output-dir '" + scratch.path("c1") + "'");
    CHECK(from_file.exit_code == 0);
    CHECK(from_file.out == "f=13 atoms=2\n");
    const auto overridden = scratch.run(base + " --k 3 --output-dir '" +
                                        scratch.path("c2") + "'");
    CHECK(overridden.exit_code == 0);
    CHECK(overridden.out == "f=14 atoms=3\n");
  }

  TEST_CASE("the seed environment variable fills in for the flag") {
    Scratch scratch;
    const std::string input = write_diagonal_input(scratch);
    auto fit = [&](const std::string& tag, const std::string& extra,
                   const std::string& env) {
      const auto result = scratch.run(
          "fit --loss quadratic --input '" + input +
              "' --k 2 --algorithm greedy --pool-size 8 " + extra +
              " --output-dir '" + scratch.path(tag) + "'",
          env);
      REQUIRE(result.exit_code == 0);
    };
    fit("flagged", "--seed 123", "");
    fit("env", "", "LOWRANK_SEED=123");
    fit("wins", "--seed 123", "LOWRANK_SEED=999");
    CHECK(slurp(scratch.path("flagged") + "/history.csv") ==
          slurp(scratch.path("env") + "/history.csv"));
    CHECK(slurp(scratch.path("flagged") + "/support.txt") ==
          slurp(scratch.path("wins") + "/support.txt"));
  }
}

TEST_SUITE("cli verify") {
  TEST_CASE("the quick suite passes and reports its checks") {
    Scratch scratch;
    const auto result = scratch.run("verify --suite quick --seed 1 --output '" +
                                    scratch.path("report.csv") + "'");
    CHECK(result.exit_code == 0);
    CHECK(result.err.find(" checks, ") != std::string::npos);
    CHECK(result.err.find(" 0 failing") != std::string::npos);
    const std::string report = slurp(scratch.path("report.csv"));
    CHECK(report.rfind("check,seed,lhs,rhs,slack,holds\n", 0) == 0);
  }

  TEST_CASE("an unknown suite is a usage error") {
    Scratch scratch;
    CHECK(scratch.run("verify --suite nonsense").exit_code == 2);
    CHECK(scratch.run("verify").exit_code == 2);  // --suite is required
  }

  TEST_CASE("reports are identical for any jobs count") {
    Scratch scratch;
    for (int jobs : {1, 3}) {
      const auto result = scratch.run(
          "verify --suite gradients --instances 5 --seed 2 --jobs " +
          std::to_string(jobs) + " --output '" +
          scratch.path("report" + std::to_string(jobs) + ".csv") + "'");
      REQUIRE(result.exit_code == 0);
    }
    CHECK(slurp(scratch.path("report1.csv")) ==
          slurp(scratch.path("report3.csv")));
  }
}

TEST_SUITE("cli experiment") {
  TEST_CASE("the clustering study writes its grid deterministically") {
    Scratch scratch;
    const std::string base =
        "experiment sbm --n 12 --k-true 3 --p-grid 0.8:0.9:0.1 --runs 2 "
        "--hyper-k 2,3 --refit-max-iter 300 --seed 4";
    for (int jobs : {1, 2}) {
      const auto result = scratch.run(
          base + " --jobs " + std::to_string(jobs) + " --output '" +
          scratch.path("sbm" + std::to_string(jobs) + ".csv") + "'");
      REQUIRE(result.exit_code == 0);
      CHECK(result.err.find("wrote 24 rows") != std::string::npos);
    }
    const std::string csv = slurp(scratch.path("sbm1.csv"));
    CHECK(csv == slurp(scratch.path("sbm2.csv")));
    CHECK(csv.rfind("method,k,p,run,reconstruction,generalization\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 25);
  }

  TEST_CASE("the recovery study writes one row per instance") {
    Scratch scratch;
    const auto result = scratch.run(
        "experiment recovery --m1 4 --m2 4 --r 1 --n 60 --sigma 0.05 --k 2 "
        "--instances 3 --seed 6 --output '" +
        scratch.path("recovery.csv") + "'");
    CHECK(result.exit_code == 0);
    CHECK(result.err.find("wrote 3 rows") != std::string::npos);
    const std::string csv = slurp(scratch.path("recovery.csv"));
    CHECK(csv.rfind(
              "seed,m1,m2,r,n,sigma,k,recovery_error,bound_rhs,m,C,holds,"
              "vacuous\n",
              0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  }

  TEST_CASE("malformed probability grids are usage errors") {
    Scratch scratch;
    CHECK(scratch.run("experiment sbm --p-grid 0.9:0.8:0.1 --output '" +
                      scratch.path("x.csv") + "'")
              .exit_code == 2);
    CHECK(scratch.run("experiment sbm --p-grid nonsense --output '" +
                      scratch.path("y.csv") + "'")
              .exit_code == 2);
  }
}

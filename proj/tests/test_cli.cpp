#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "wfr/field.hpp"
#include "wfr/field_io.hpp"

namespace fs = std::filesystem;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "wfr_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the CLI with the given argument string, capturing exit code and both
// output streams through temporary files.
CommandResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out_path = work_dir() / ("stdout_" + std::to_string(counter));
  const fs::path err_path = work_dir() / ("stderr_" + std::to_string(counter));
  ++counter;

  const std::string command = std::string(WFR_CLI_PATH) + " " + args + " >" +
                              out_path.string() + " 2>" + err_path.string();
  const int status = std::system(command.c_str());

  CommandResult result;
  if (status == -1) {
    result.exit_code = -1;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else {
    result.exit_code = 128;
  }
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  return result;
}

fs::path tiny_field_path() {
  static const fs::path path = [] {
    const fs::path p = work_dir() / "tiny.field";
    const CommandResult r = run_cli(
        "simulate --output " + p.string() +
        " --nx 64 --length-x 25.132741228718345 --dt 0.01 --duration 5"
        " --transient 1 --save-stride 10 --seed 7");
    REQUIRE(r.exit_code == 0);
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("version and help exit cleanly") {
  const CommandResult version = run_cli("--version");
  CHECK(version.exit_code == 0);
  CHECK(version.out.find('.') != std::string::npos);

  const CommandResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("simulate") != std::string::npos);
  CHECK(help.out.find("identify") != std::string::npos);

  const CommandResult bare = run_cli("");
  CHECK(bare.exit_code == 2);
}

TEST_CASE("simulate writes a reproducible field and manifest") {
  const fs::path first = tiny_field_path();
  CHECK(fs::exists(first));
  CHECK(fs::exists(first.string() + ".manifest.json"));

  const fs::path second = work_dir() / "tiny_again.field";
  const CommandResult r = run_cli(
      "simulate --output " + second.string() +
      " --nx 64 --length-x 25.132741228718345 --dt 0.01 --duration 5"
      " --transient 1 --save-stride 10 --seed 7");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("n_x=64") != std::string::npos);
  CHECK(read_file(first) == read_file(second));
}

TEST_CASE("identify prints an equation and writes a model file") {
  const fs::path model = work_dir() / "model.json";
  const fs::path manifest = work_dir() / "identify.manifest.json";
  const CommandResult r = run_cli(
      "identify --input " + tiny_field_path().string() +
      " --output " + model.string() + " --manifest " + manifest.string() +
      " --size-x 6 --size-t 2 --domains 30");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("= 0") != std::string::npos);
  CHECK(r.out.find("residual eta") != std::string::npos);
  REQUIRE(fs::exists(model));
  const std::string json = read_file(model);
  CHECK(json.find("\"equation\"") != std::string::npos);
  CHECK(json.find("\"terms\"") != std::string::npos);
  CHECK(json.find("\"trace\"") != std::string::npos);
  REQUIRE(fs::exists(manifest));
  CHECK(read_file(manifest).find("\"identify\"") != std::string::npos);
}

TEST_CASE("a recorded manifest replays to identical output") {
  const fs::path model = work_dir() / "model.json";
  const fs::path manifest = work_dir() / "identify.manifest.json";
  REQUIRE(fs::exists(model));      // produced by the previous case
  REQUIRE(fs::exists(manifest));
  const std::string original = read_file(model);
  fs::remove(model);

  const CommandResult replay = run_cli("--from-manifest " + manifest.string());
  REQUIRE(replay.exit_code == 0);
  REQUIRE(fs::exists(model));
  CHECK(read_file(model) == original);

  const CommandResult mixed =
      run_cli("--from-manifest " + manifest.string() + " --gamma 2.0");
  CHECK(mixed.exit_code == 2);
  CHECK(mixed.err.find("--from-manifest") != std::string::npos);
}

TEST_CASE("spectrum writes a CSV with a header") {
  const fs::path csv = work_dir() / "spectrum.csv";
  const CommandResult r = run_cli("spectrum --input " +
                                  tiny_field_path().string() + " --output " +
                                  csv.string() + " --axis x");
  REQUIRE(r.exit_code == 0);
  const std::string text = read_file(csv);
  CHECK(text.rfind("frequency,magnitude\n", 0) == 0);
  CHECK(r.out.find("peak") != std::string::npos);
}

TEST_CASE("sweep writes one CSV row per value and term") {
  const fs::path csv = work_dir() / "sweep.csv";
  const CommandResult r = run_cli(
      "sweep --input " + tiny_field_path().string() + " --output " +
      csv.string() +
      " --axis sigma --values 0.0,0.01 --trials 2 --domains 10"
      " --size-x 6 --size-t 2");
  REQUIRE(r.exit_code == 0);
  const std::string text = read_file(csv);
  std::size_t lines = 0;
  for (char ch : text) {
    if (ch == '\n') ++lines;
  }
  CHECK(lines == 7);  // header + 2 values x 3 non-reference terms
}

TEST_CASE("failures map to distinct exit codes") {
  // Missing input file -> I/O error.
  const CommandResult missing =
      run_cli("identify --input " + (work_dir() / "nope.field").string());
  CHECK(missing.exit_code == 3);

  // Corrupt field file -> I/O error that names the byte offset.
  const fs::path corrupt = work_dir() / "corrupt.field";
  {
    std::ofstream out(corrupt, std::ios::binary);
    out << "this is not a field file";
  }
  const CommandResult bad = run_cli("identify --input " + corrupt.string());
  CHECK(bad.exit_code == 3);
  CHECK(bad.err.find("offset") != std::string::npos);

  // Invalid configuration -> usage error.
  const CommandResult bad_gamma = run_cli(
      "identify --input " + tiny_field_path().string() + " --gamma 0.5");
  CHECK(bad_gamma.exit_code == 2);

  const CommandResult bad_axis = run_cli(
      "sweep --input " + tiny_field_path().string() + " --output " +
      (work_dir() / "x.csv").string() + " --axis bogus --values 1,2");
  CHECK(bad_axis.exit_code == 2);

  // Non-finite data -> numerical error.
  const fs::path nan_field = work_dir() / "nan.field";
  {
    wfr::Field2D field;
    field.values = Eigen::MatrixXd::Zero(48, 48);
    field.values(3, 4) = std::numeric_limits<double>::quiet_NaN();
    field.delta_x = 0.1;
    field.delta_t = 0.1;
    wfr::write_field(field, nan_field.string());
  }
  const CommandResult nan_run = run_cli(
      "identify --input " + nan_field.string() + " --size-x 1 --size-t 1" +
      " --domains 5");
  CHECK(nan_run.exit_code == 4);
}

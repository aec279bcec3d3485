#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "rpnflat/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"rpnflat"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = rpnflat::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / ("rpnflat_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("classify --check exit codes") {
  CHECK(cli({"classify", "--function", "gaussian_nd", "--n", "2", "--check"}).code == 0);
  CHECK(cli({"classify", "--function", "oscillator", "--n", "1", "--check"}).code == 0);
  // A decay ceiling of zero can never certify boundedness: verdict mismatch.
  CHECK(cli({"classify", "--function", "gaussian_nd", "--n", "1", "--check", "--decay-ceiling", "0"}).code == 1);
}

TEST_CASE("transport emits the closed-form matrix") {
  const auto r = cli({"transport", "--n", "3", "--i", "1", "--j", "2", "--point", "2,3,4"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["schema"] == "rpnflat.transport_matrix/1");
  CHECK(j["matrix"] == json::parse("[[-4,-6,-8],[0,2,0],[0,0,2]]"));

  const auto t = cli({"transport", "--n", "1", "--function", "gaussian_nd", "--point", "2", "--order", "2"});
  REQUIRE(t.code == 0);
  const auto table = json::parse(t.out);
  CHECK(table["schema"] == "rpnflat.derivative_table/1");
}

TEST_CASE("configuration errors exit 2") {
  CHECK(cli({"classify", "--function", "no_such_field", "--n", "1"}).code == 2);
  CHECK(cli({"classify", "--function", "gaussian_nd", "--n", "7"}).code == 2);
  CHECK(cli({"classify", "--function", "gaussian_nd", "--n", "1", "--max-beta", "9"}).code == 2);
  CHECK(cli({"flatness", "--function", "gaussian_nd", "--n", "1", "--order", "7"}).code == 2);
  CHECK(cli({"flatness", "--function", "gaussian_nd", "--n", "1", "--base-point", "0.2"}).code == 2);
  CHECK(cli({"transport", "--n", "3", "--point", "2,3"}).code == 2);
  CHECK(cli({"transport", "--n", "2", "--point", "0,3"}).code == 2);
  CHECK(cli({"stereo", "--sphere-point", "1,0"}).code == 2);
  CHECK(cli({"classify", "--bogus-flag"}).code == 2);
  CHECK(cli({"classify", "--function", "one", "--n", "1", "-o", "/nonexistent/dir/report.json"}).code == 2);
  CHECK(cli({"seminorm", "--function", "one", "--n", "1", "--format", "csv"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("reports are written atomically") {
  const auto dir = scratch_dir();
  const auto path = dir / "flat.json";
  const auto r = cli({"flatness", "--function", "gaussian_nd", "--n", "1", "--levels", "6", "-o", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const auto j = json::parse(slurp(path));
  CHECK(j["schema"] == "rpnflat.flatness_report/1");
  CHECK(j["verdict"] == "FlatConsistent");
  for (const auto& entry : fs::directory_iterator(dir)) CHECK(entry.path().extension() != ".tmp");
  fs::remove_all(dir);
}

TEST_CASE("identical configuration gives byte-identical reports for any worker count") {
  const auto one = cli({"classify", "--function", "runge", "--n", "2", "--workers", "1"});
  REQUIRE(one.code == 0);
  for (const char* w : {"4", "8"}) {
    CHECK(cli({"classify", "--function", "runge", "--n", "2", "--workers", w}).out == one.out);
  }
  const auto ext = cli({"extend", "--function", "oscillator", "--n", "2", "--levels", "6", "--samples", "32"});
  CHECK(cli({"extend", "--function", "oscillator", "--n", "2", "--levels", "6", "--samples", "32", "--workers", "8"})
            .out == ext.out);
}

TEST_CASE("seed: flag, environment override and default") {
  const auto base = cli({"flatness", "--function", "oscillator", "--n", "2", "--base-point", "0,0.5", "--levels", "4"});
  const auto spec = json::parse(base.out)["spec"];
  CHECK(spec["seed"] == 20240607);
  ::setenv("RPNFLAT_SEED", "99", 1);
  const auto env = cli({"flatness", "--function", "oscillator", "--n", "2", "--base-point", "0,0.5", "--levels", "4"});
  CHECK(json::parse(env.out)["spec"]["seed"] == 99);
  CHECK(env.out != base.out);
  // An explicit flag wins over the environment.
  const auto flag = cli({"flatness", "--function", "oscillator", "--n", "2", "--base-point", "0,0.5", "--levels",
                         "4", "--seed", "20240607"});
  CHECK(flag.out == base.out);
  ::setenv("RPNFLAT_SEED", "not-a-number", 1);
  CHECK(cli({"flatness", "--function", "zero", "--n", "1", "--levels", "2"}).code == 2);
  ::unsetenv("RPNFLAT_SEED");
}

TEST_CASE("flatness and extend --check") {
  CHECK(cli({"flatness", "--function", "oscillator", "--n", "1", "--check"}).code == 0);
  CHECK(cli({"flatness", "--function", "one", "--n", "1", "--check", "--levels", "8"}).code == 0);
  CHECK(cli({"extend", "--function", "gaussian_nd", "--n", "1", "--check"}).code == 0);
}

TEST_CASE("csv export") {
  const auto r = cli({"flatness", "--function", "gaussian_nd", "--n", "1", "--levels", "3", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header.find("level") != std::string::npos);
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 16 * 3);
}

TEST_CASE("seminorm, stereo and atlas check") {
  const auto s = cli({"seminorm", "--function", "gaussian_1d", "--n", "1", "--alpha", "1", "--points-per-axis", "40001"});
  REQUIRE(s.code == 0);
  CHECK(json::parse(s.out)["value"].get<double>() == doctest::Approx(0.428882).epsilon(1e-6));

  const auto st = cli({"stereo", "--point", "0,0"});
  REQUIRE(st.code == 0);
  CHECK(json::parse(st.out)["sphere_point"] == json::parse("[-1.0,0.0,0.0]"));

  const auto a = cli({"atlas", "check", "--samples", "200"});
  CHECK(a.code == 0);
  CHECK(json::parse(a.out)["schema"] == "rpnflat.atlas_check/1");
}

TEST_CASE("the installed executable propagates exit codes") {
  const std::string tool = RPNFLAT_TOOL_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((tool + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("transport --n 3 --i 1 --j 2 --point 2,3,4") == 0);
  CHECK(status("classify --function gaussian_nd --n 1 --check --decay-ceiling 0") == 1);
  CHECK(status("classify --function nope") == 2);
}

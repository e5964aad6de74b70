#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "frachelm/cli.hpp"
#include "frachelm/config.hpp"
#include "frachelm/errors.hpp"
#include "frachelm/field_io.hpp"

using namespace frachelm;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "frachelm");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("frachelm_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::IoError;
}

const char* kSmallForward = "s = 0.9\nk = 4\ngrid.n = 16\nincident.amplitude = 0.1\n";

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(
      "# forward run\n"
      "s = 0.85\n"
      "k = 12   # wavenumber\n"
      "grid.n = 64\n"
      "incident.direction = 0, 0, 1\n"
      "farfield.directions = 1,0,0; 0,1,0\n"
      "k_list = 4, 8, 16\n");
  CHECK(c.s == 0.85);
  CHECK(c.k == 12.0);
  CHECK(c.n == 64);
  CHECK(c.direction == Vec3{0, 0, 1});
  CHECK(c.directions.size() == 2);
  CHECK(c.k_list == std::vector<double>{4, 8, 16});
  CHECK(c.L == 1.0);

  CHECK(kind_of("") == ErrorKind::ParseError);
  CHECK(kind_of("# only comments\n\n") == ErrorKind::ParseError);
  CHECK(kind_of("s = 0.9\nbogus = 1\n") == ErrorKind::ParseError);
  CHECK(message_of("s = 0.9\nbogus = 1\n").find("line 2") != std::string::npos);
  CHECK(kind_of("s = 0.9\ns = 0.8\n") == ErrorKind::ParseError);
  CHECK(kind_of("k = fast\n") == ErrorKind::ParseError);
  CHECK(kind_of("no equals sign\n") == ErrorKind::ParseError);
  CHECK(kind_of("s = 0.5\n") == ErrorKind::ValidationError);
  CHECK(message_of("k = 2\n\ns = 2.0\n").find("line 3") != std::string::npos);
  CHECK(kind_of("grid.n = 7\n") == ErrorKind::ValidationError);
  CHECK(kind_of("incident.direction = 1,1,0\n") == ErrorKind::ValidationError);
}

TEST_CASE("config round trip and subcommand checks") {
  ExperimentConfig c = parse_config("s = 0.78\nk = 3.25\nk_list = 2,3\ninverse.oracle = from-file\n");
  CHECK(parse_config(to_text(c)) == c);
  CHECK(parse_config(to_text(ExperimentConfig{})) == ExperimentConfig{});
  CHECK_NOTHROW(validate_for(c, "forward"));
  CHECK_THROWS_AS(validate_for(c, "invert"), Error);
  c.s = 0.9;
  CHECK_THROWS_AS(validate_for(c, "invert"), Error);  // from-file without a file
  c.oracle_file = "data.csv";
  CHECK_NOTHROW(validate_for(c, "invert"));
  c.incident = "herglotz";
  c.herglotz_order = 1;
  CHECK_THROWS_AS(validate_for(c, "forward"), Error);
}

TEST_CASE("greens subcommand") {
  const fs::path dir = scratch("greens");
  const std::string out = (dir / "g.csv").string();
  CHECK(run({"greens", "--s", "1.0", "--k", "1", "--r", "1,2", "--out", out}) == 0);
  const std::string csv = [&] {
    std::ifstream in(out);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }();
  CHECK(csv.rfind("r,re,im,est_error,method\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(run({"greens", "--s", "0.5", "--k", "1", "--r", "1"}) == 1);
  CHECK(run({"greens", "--s", "0.9", "--k", "1", "--r", "-1"}) != 0);
  CHECK(run({"greens", "--s", "0.9"}) == 1);
  CHECK(run({"nope"}) == 1);
}

TEST_CASE("forward subcommand") {
  const fs::path dir = scratch("forward");
  const std::string conf = (dir / "run.conf").string();
  write_text_atomic(conf, kSmallForward);
  CHECK(run({"--output-dir", (dir / "a").string(), "forward", "--config", conf}) == 0);
  CHECK(run({"--output-dir", (dir / "b").string(), "forward", "--config", conf}) == 0);
  for (const char* f : {"u.fhf", "u_sc.fhf", "u.fhf.meta", "forward_report.txt", "forward.manifest",
                        "forward.effective.conf"}) {
    CHECK(fs::exists(dir / "a" / f));
  }
  CHECK(file_digest((dir / "a" / "u.fhf").string()) == file_digest((dir / "b" / "u.fhf").string()));
  CHECK(read_field((dir / "a" / "u.fhf").string()).grid().n == 16);
  CHECK(parse_config([&] {
          std::ifstream in(dir / "a" / "forward.effective.conf");
          return std::string(std::istreambuf_iterator<char>(in), {});
        }()) == load_config(conf));

  // no potential: nothing scattered
  const std::string zero = (dir / "zero.conf").string();
  write_text_atomic(zero, std::string(kSmallForward) + "potential.height = 0\n");
  CHECK(run({"--output-dir", (dir / "z").string(), "forward", "--config", zero}) == 0);
  const ComplexField usc = read_field((dir / "z" / "u_sc.fhf").string());
  for (const cplx& v : usc.values()) CHECK(v == cplx(0.0));

  // output directory from the environment
  setenv("FRACHELM_OUTPUT_DIR", (dir / "env").string().c_str(), 1);
  CHECK(run({"forward", "--config", conf}) == 0);
  unsetenv("FRACHELM_OUTPUT_DIR");
  CHECK(fs::exists(dir / "env" / "u.fhf"));

  // numerical failure maps to 2, bad input to 1
  const std::string blowup = (dir / "big.conf").string();
  write_text_atomic(blowup, std::string(kSmallForward) + "potential.height = 1e4\n");
  CHECK(run({"--output-dir", (dir / "x").string(), "forward", "--config", blowup}) == 2);
  const std::string bad = (dir / "bad.conf").string();
  write_text_atomic(bad, "s = 0.9\nunknown.key = 1\n");
  CHECK(run({"--output-dir", (dir / "x").string(), "forward", "--config", bad}) == 1);
  CHECK(run({"forward", "--config", (dir / "missing.conf").string()}) == 1);
  fs::remove_all(dir);
}

TEST_CASE("invert subcommand") {
  const fs::path dir = scratch("invert");
  const std::string conf = (dir / "inv.conf").string();
  write_text_atomic(conf, "s = 0.9\nk = 4\ngrid.n = 16\ninverse.lattice_n = 16\ninverse.xi_max = 8\n");
  CHECK(run({"--output-dir", dir.string(), "invert", "--config", conf}) == 0);
  CHECK(fs::exists(dir / "q_rec.fhf"));
  CHECK(fs::exists(dir / "reconstruction.csv"));
  write_text_atomic(conf, "s = 0.78\nk = 4\n");
  CHECK(run({"--output-dir", dir.string(), "invert", "--config", conf}) == 1);
  fs::remove_all(dir);
}

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "eqwave/cli.hpp"
#include "eqwave/io.hpp"
#include "oracles.hpp"

using namespace eqwave;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"eqwave"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<double> fields(const std::string& row) {
  std::vector<double> v;
  std::istringstream in(row);
  for (std::string cell; std::getline(in, cell, ',');) v.push_back(std::strtod(cell.c_str(), nullptr));
  return v;
}

// Value of "key": in a flat JSON object, parsed as a double.
double json_number(const std::string& json, const std::string& key) {
  const std::string needle = "\"" + key + "\":";
  const auto pos = json.find(needle);
  REQUIRE(pos != std::string::npos);
  return std::strtod(json.c_str() + pos + needle.size(), nullptr);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("format_double round trips and is stable") {
  oracle::Gen gen(21);
  for (int n = 0; n < 20000; ++n) {
    const double v = (n % 2 ? 1 : -1) * gen.log_uniform(1e-300, 1e300);
    const std::string a = io::format_double(v);
    const double back = std::strtod(a.c_str(), nullptr);
    REQUIRE(back == v);
    REQUIRE(io::format_double(back) == a);
  }
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(-1.0) == "-1");
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("surface CSV layout") {
  const std::vector<SurfaceSample> rows{{0.0, -5.0, 1.5, 2.0, -5.0, 3.0, -1.25},
                                        {0.0, -5.0, 2.5, 3.0, -5.0, 4.0, -1.25}};
  std::ostringstream out;
  io::write_surface(out, rows, io::Format::Csv);
  CHECK(out.str() == "t,s,q,x,y,z,r0s\n0,-5,1.5,2,-5,3,-1.25\n0,-5,2.5,3,-5,4,-1.25\n");
}

TEST_CASE("trajectory CSV and JSON layout") {
  const std::vector<io::TrajectorySample> rows{{1.0, {2.0, 3.0, 4.0}, {5.0, -6.0, 3.0}}};
  std::ostringstream csv, json;
  io::write_trajectory(csv, rows, io::Format::Csv);
  io::write_trajectory(json, rows, io::Format::Json);
  CHECK(csv.str() == "t,x,y,z,q,r,s\n1,2,3,4,5,-6,3\n");
  CHECK(json.str() == R"([{"t":1,"x":2,"y":3,"z":4,"q":5,"r":-6,"s":3}])" "\n");
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("dispersion") {
  const Run r = run({"dispersion", "--k", "0.01"});
  CHECK(r.code == kExitOk);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 2);
  CHECK(std::abs(std::strtod(l[0].c_str() + 10, nullptr) - 31.297652536140348) < 1e-9);
  CHECK(l[1].rfind("L_m=628.3185307", 0) == 0);

  const Run still = run({"dispersion", "--k", "0.01", "--omega", "0"});
  CHECK(still.code == kExitOk);
  CHECK(std::abs(std::strtod(still.out.c_str() + 10, nullptr) - std::sqrt(9.8 / 0.01)) < 1e-9);
}

TEST_CASE("configuration errors exit 2") {
  CHECK(run({"dispersion", "--k", "0"}).code == kExitConfigError);
  CHECK(run({"dispersion", "--k", "-1"}).code == kExitConfigError);
  CHECK(run({"dispersion", "--bogus"}).code == kExitConfigError);
  CHECK(run({}).code == kExitConfigError);
  CHECK(run({"certify", "--grid", "64x32"}).code == kExitConfigError);
  CHECK(run({"surface", "--r0", "1"}).code == kExitConfigError);
  CHECK(run({"trajectory", "--r", "5"}).code == kExitConfigError);
  CHECK(run({"trajectory", "--t1", "3", "--periods", "2"}).code == kExitConfigError);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("trajectory closes after one period") {
  const Run r = run({"trajectory", "--q", "37", "--r", "-20", "--s", "0", "--periods", "1"});
  REQUIRE(r.code == kExitOk);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 102);
  CHECK(l[0] == "t,x,y,z,q,r,s");
  const auto first = fields(l[1]);
  const auto last = fields(l.back());
  CHECK(std::abs(first[1] - last[1]) <= 1e-10);
  CHECK(std::abs(first[3] - last[3]) <= 1e-10);
}

TEST_CASE("trajectory orbits are circles of radius exp(k(r - f))/k") {
  const WaveField wave(0.01, -1.0);
  struct Case {
    const char* r;
    const char* s;
    double r_value;
    double s_value;
  };
  for (const Case c : {Case{"-1", "0", -1.0, 0.0}, Case{"-300", "0", -300.0, 0.0},
                       Case{"-1", "200000", -1.0, 2e5}}) {
    const Run run_out = run({"trajectory", "--q", "11", "--r", c.r, "--s", c.s, "--samples", "37"});
    REQUIRE(run_out.code == kExitOk);
    const auto l = lines(run_out.out);
    const double radius = std::exp(0.01 * (c.r_value - decay_f(c.s_value, wave))) / 0.01;
    for (std::size_t i = 1; i < l.size(); ++i) {
      const auto v = fields(l[i]);
      const double cx = v[4], cz = v[5];  // orbit centre (q, r)
      REQUIRE(std::hypot(v[1] - cx, v[3] - cz) == doctest::Approx(radius).epsilon(1e-12));
      REQUIRE(v[2] == c.s_value);
    }
  }
  // Depth and latitude both shrink the orbit. Deep: three e-foldings.
  const double surf = std::exp(-0.01) / 0.01;
  CHECK(std::exp(0.01 * -301.0) / 0.01 / surf == doctest::Approx(std::exp(-3.0)));
}

TEST_CASE("invert recovers a trajectory label") {
  const Run traj = run({"trajectory", "--q", "123.5", "--r", "-42", "--s", "150000", "--samples", "5"});
  REQUIRE(traj.code == kExitOk);
  const auto row = fields(lines(traj.out)[3]);
  std::string t = io::format_double(row[0]), x = io::format_double(row[1]),
              y = io::format_double(row[2]), z = io::format_double(row[3]);
  const Run inv = run({"invert", "--x", x.c_str(), "--y", y.c_str(), "--z", z.c_str(), "--t", t.c_str()});
  REQUIRE(inv.code == kExitOk);
  CHECK(std::abs(json_number(inv.out, "q") - 123.5) <= 1e-10);
  CHECK(std::abs(json_number(inv.out, "r") + 42.0) <= 1e-10);
  CHECK(json_number(inv.out, "s") == 150000.0);
  CHECK(json_number(inv.out, "residual_m") <= 1e-10);
}

TEST_CASE("invert above the free surface exits 4") {
  const Run r = run({"invert", "--x", "0", "--y", "0", "--z", "200"});
  CHECK(r.code == kExitOutOfDomain);
  CHECK(r.err.find("above free surface") != std::string::npos);
  // Just above the crest.
  CHECK(run({"invert", "--x", "0", "--y", "0", "--z", "98.01"}).code == kExitOutOfDomain);
  CHECK(run({"invert", "--x", "0", "--y", "0", "--z", "98"}).code == kExitOk);
}

TEST_CASE("unwritable output exits 3") {
  const Run r = run({"surface", "--out", "/nonexistent-dir/surface.csv"});
  CHECK(r.code == kExitIoError);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("surface files and the cusped r0 = 0 crest") {
  const auto dir = std::filesystem::temp_directory_path() / "eqwave_cli_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "surface.csv").string();
  const Run r = run({"surface", "--r0", "0", "--s-count", "3", "--s-max", "1e5", "--q-count", "9",
                     "--out", path.c_str()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  const auto l = lines(slurp(path));
  REQUIRE(l.size() == 1 + 27);
  CHECK(l[0] == "t,s,q,x,y,z,r0s");
  // The equatorial crest q = 0 is the cusp point: z = 1/k, r0(0) = 0.
  bool found = false;
  for (std::size_t i = 1; i < l.size(); ++i) {
    const auto v = fields(l[i]);
    if (v[1] == 0.0 && v[2] == 0.0) {
      found = true;
      CHECK(v[5] == doctest::Approx(100.0).epsilon(1e-15));
      CHECK(v[6] == 0.0);
    } else if (v[1] != 0.0) {
      CHECK(v[6] < 0.0);
    }
  }
  CHECK(found);
  std::filesystem::remove_all(dir);
}

TEST_CASE("certify outcomes and exit codes") {
  const Run ok = run({"certify", "--grid", "16x8x9", "--s-max", "5e5", "--pairs", "2000",
                      "--inversions", "200"});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("\"pass\":true") != std::string::npos);

  const Run cusp = run({"certify", "--grid", "16x8x9", "--r0", "0", "--s-max", "5e5"});
  CHECK(cusp.code == kExitCertificationFailed);
  CHECK(json_number(cusp.out, "min_jacobian_det") == 0.0);
  CHECK(cusp.out.find("\"min_pair_ratio\":null") != std::string::npos);

  const std::string bad_c = io::format_double(1.01 * dispersion_speed(0.01, PhysicalConstants{}));
  const Run wrong = run({"certify", "--grid", "16x8x9", "--s-max", "5e5", "--pairs", "2000",
                         "--inversions", "200", "--c", bad_c.c_str()});
  CHECK(wrong.code == kExitCertificationFailed);
  CHECK(json_number(wrong.out, "max_gradient_asymmetry") >=
        10.0 * json_number(ok.out, "max_gradient_asymmetry"));
}

TEST_CASE("certify JSON is byte-identical across runs and worker counts") {
  auto go = [](const char* workers) {
    return run({"certify", "--grid", "16x8x9", "--s-max", "5e5", "--pairs", "3000",
                "--inversions", "300", "--seed", "42", "--workers", workers});
  };
  const Run a = go("1");
  const Run b = go("1");
  const Run c = go("3");
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  const std::string keys[] = {"grid", "t", "min_jacobian_det", "max_fd_jacobian_error",
                              "contraction_constant_operator", "contraction_constant_paper",
                              "min_pair_ratio", "max_inversion_roundtrip_error",
                              "max_det_time_variation", "max_gradient_asymmetry",
                              "max_kinematic_bc_error", "boundary_checks_passed", "pass"};
  std::size_t prev = 0;
  for (const auto& k : keys) {
    const auto pos = a.out.find("\"" + k + "\":");
    REQUIRE(pos != std::string::npos);
    CHECK(pos >= prev);
    prev = pos;
  }
}

}  // TEST_SUITE

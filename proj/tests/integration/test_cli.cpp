#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "mslift/io.hpp"

using namespace mslift;
using mslift::io::Json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"mslift"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : store) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("mslift_cli_" + std::to_string(std::random_device{}()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string write_json(const std::string& name, const Json& j) const { return write(name, j.dump()); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Interval kUnit{0.0, 1.0};

}  // namespace

TEST_CASE("eval") {
  Scratch dir;
  const auto zero = dir.write_json("zero.json", io::to_json(SbvFunction::constant(kUnit, 0)));
  auto r = run({"eval", "--func", zero, "--g", zero, "--alpha", "1", "--beta", "1"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.json()["total"].get<double>() == 0.0);

  const auto step = dir.write_json("step.json", io::to_json(SbvFunction::step(kUnit, 0.5, 0, 1)));
  r = run({"eval", "--func", step, "--g", zero, "--alpha", "1", "--beta", "1", "--report", dir.path("r.json"),
           "--plot", dir.path("u.svg")});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.json()["total"].get<double>() == doctest::Approx(1.5));
  CHECK(r.json()["dirichlet_term"] == "unweighted");
  CHECK(io::read_json_file(dir.path("r.json")) == r.json());
  CHECK(slurp(dir.path("u.svg")).find("<svg") != std::string::npos);
}

TEST_CASE("validation failures exit with 2 and name the field") {
  Scratch dir;
  const auto bad = dir.write("bad.json", R"({"domain":[0,1],"pieces":[{"nodes":[0,1],"values":[0,"x"]}]})");
  auto r = run({"eval", "--func", bad, "--alpha", "1", "--beta", "1"});
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.err.find("$.pieces[0].values[1]") != std::string::npos);

  const auto broken = dir.write("broken.json", "{ not json");
  CHECK(run({"eval", "--func", broken, "--alpha", "1", "--beta", "1"}).code == cli::kExitValidation);
  CHECK(run({"eval", "--func", dir.path("missing.json"), "--alpha", "1", "--beta", "1"}).code == cli::kExitValidation);

  const auto ok = dir.write_json("ok.json", io::to_json(SbvFunction::constant(kUnit, 0)));
  CHECK(run({"eval", "--func", ok, "--alpha", "-1", "--beta", "1"}).code == cli::kExitValidation);
  CHECK(run({"eval", "--func", ok, "--beta", "1"}).code == cli::kExitValidation);
  CHECK(run({"eval", "--func", ok, "--alpha", "1", "--beta", "1", "--bogus"}).code == cli::kExitValidation);
  CHECK(run({"frobnicate"}).code == cli::kExitValidation);
  CHECK(run({"demo", "no-such-demo"}).code == cli::kExitValidation);

  const auto g = dir.write_json("g.json", io::to_json(SbvFunction::constant(kUnit, 0)));
  CHECK(run({"minimize", "--g", g, "--alpha", "1", "--beta", "1", "--n", "13", "--brute-force"}).code ==
        cli::kExitValidation);
}

TEST_CASE("lift of a single graph equals eval") {
  Scratch dir;
  const SbvFunction u(kUnit, {{{0, 0.3}, {0, 1}}, {{0.3, 0.8}, {2, -1}}, {{0.8, 1}, {0, 0.5}}});
  const auto g = dir.write_json("g.json", io::to_json(SbvFunction::linear(kUnit, -1, 1)));
  const auto f = dir.write_json("u.json", io::to_json(u));
  const auto c = dir.write_json("c.json", io::to_json(GraphCombination::single(u)));
  const auto e = run({"eval", "--func", f, "--g", g, "--alpha", "0.7", "--beta", "2"});
  const auto l = run({"lift", "--combo", c, "--g", g, "--alpha", "0.7", "--beta", "2", "--csv", dir.path("p.csv")});
  REQUIRE(e.code == 0);
  REQUIRE(l.code == 0);
  CHECK(l.json()["total"].get<double>() == doctest::Approx(e.json()["total"].get<double>()).epsilon(1e-12));
  CHECK(slurp(dir.path("p.csv")).starts_with("x,a_i,a_{i+1},level\n"));
}

TEST_CASE("decompose the counterexample input") {
  Scratch dir;
  const SbvFunction u1(kUnit, {{{0.0, 0.5}, {0.0, 0.0}}, {{0.5, 1.0}, {0.5, 1.0}}});
  const SbvFunction u2(kUnit, {{{0.0, 0.5}, {0.0, 0.5}}, {{0.5, 1.0}, {1.0, 1.0}}});
  const auto c = dir.write_json("c.json", io::to_json(GraphCombination(kUnit, {{0.5, u1}, {0.5, u2}})));
  const auto r = run({"decompose", "--combo", c, "--alpha", "1", "--beta", "0"});
  REQUIRE(r.code == cli::kExitOk);
  const Json j = r.json();
  CHECK(j["checks"]["current_equal"].get<bool>());
  CHECK(j["checks"]["energy_gap"].get<double>() <= 1e-8);
  CHECK(j["parts"].size() == 2);
  CHECK(run({"decompose", "--combo", c, "--alpha", "1", "--beta", "0"}).out == r.out);
}

TEST_CASE("minimize then certify") {
  Scratch dir;
  const auto g = dir.write_json("g.json", io::to_json(SbvFunction::step(kUnit, 0.45, 0, 1)));
  const Json spec = io::to_json(DirichletSpec(Domain(0, 1, 0.25, 0.75), SbvFunction::step(kUnit, 0.5, 0, 1)));
  const auto d = dir.write_json("d.json", spec);
  const auto m = run({"minimize", "--g", g, "--dirichlet", d, "--alpha", "0.5", "--beta", "2", "--n", "21"});
  REQUIRE(m.code == cli::kExitOk);
  const auto u = dir.write_json("u.json", m.json()["func"]);
  const auto c1 = run({"certify", "--func", u, "--g", g, "--inner", "0.25", "0.75", "--alpha", "0.5", "--beta",
                       "2", "--generate", "20", "--seed", "9"});
  REQUIRE(c1.code == cli::kExitOk);
  for (const auto& cert : c1.json()["certificates"]) CHECK(cert["margin"].get<double>() >= -1e-8);
  const auto c2 = run({"certify", "--func", u, "--g", g, "--inner", "0.25", "0.75", "--alpha", "0.5", "--beta",
                       "2", "--generate", "20", "--seed", "9"});
  CHECK(c2.out == c1.out);

  // The minimizer beats a ramp; the ramp does not beat the minimizer.
  const SbvFunction ramp(kUnit, {{{0, 0.25, 0.75, 1}, {0, 0, 1, 1}}});
  const auto comps = dir.write_json("comps.json", Json{{"competitors", Json::array({io::to_json(GraphCombination::single(ramp))})}});
  const auto zero = dir.write_json("zero.json", io::to_json(SbvFunction::constant(kUnit, 0)));
  const auto step = dir.write_json("step.json", io::to_json(SbvFunction::step(kUnit, 0.5, 0, 1)));
  CHECK(run({"certify", "--func", step, "--g", zero, "--inner", "0.25", "0.75", "--alpha", "1", "--beta", "0",
             "--competitors", comps})
            .code == cli::kExitOk);
  const auto rampf = dir.write_json("ramp.json", io::to_json(ramp));
  const auto stepc =
      dir.write_json("stepc.json", Json{{"competitors", Json::array({io::to_json(GraphCombination::single(SbvFunction::step(kUnit, 0.5, 0, 1)))})}});
  const auto bad = run({"certify", "--func", rampf, "--g", zero, "--inner", "0.25", "0.75", "--alpha", "1", "--beta",
                        "0", "--competitors", stepc});
  CHECK(bad.code == cli::kExitComputation);
  CHECK(bad.json()["certificates"][0]["verdict"] == "not-certified");
}

TEST_CASE("demos") {
  Scratch dir;
  const auto c = run({"demo", "coarea-counterexample", "--plot", dir.path("c.svg")});
  REQUIRE(c.code == cli::kExitOk);
  CHECK(c.json()["lifted"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.json()["naive_average"].get<double>() == doctest::Approx(1.5));
  for (const auto& p : c.json()["parts"]) CHECK(p["energy"].get<double>() == doctest::Approx(1.0));
  CHECK(fs::exists(dir.path("c.svg")));

  const auto f = run({"demo", "figure3-swap"});
  REQUIRE(f.code == cli::kExitOk);
  const Json parts = f.json()["parts"];
  REQUIRE(parts.size() == 2);
  CHECK(parts[0]["jumps"].size() == 1);
  CHECK(parts[0]["jumps"][0]["left"].get<double>() == 2.0);
  CHECK(parts[0]["jumps"][0]["right"].get<double>() == 4.0);
  CHECK(parts[1]["jumps"].empty());
  CHECK(run({"demo", "figure3-swap"}).out == f.out);
}

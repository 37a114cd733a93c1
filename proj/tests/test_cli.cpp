#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tautband/cli.hpp"

using namespace tautband;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tautband_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("bounds report") {
  const Run r = run({"bounds"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["isoperimetric_upper"].get<double>() == doctest::Approx(1.5707963));
  CHECK(j["free_knot_upper"].get<double>() == doctest::Approx(2.707).epsilon(1e-3));
  CHECK(j["oscillation_lower"].get<double>() == doctest::Approx(0.381).epsilon(5e-3));
  CHECK(j["manifest"]["subcommand"] == "bounds");
}

TEST_CASE("solve reports infeasible knots") {
  const auto bad = scratch("bad.csv");
  write(bad, "t,lower,upper\n0,-1,1\n1,2,1\n2,-1,1\n");
  const Run r = run({"solve", "--tube", bad.string(), "--end", "free"});
  CHECK(r.code == 1);
  CHECK(r.err.find("knot 1") != std::string::npos);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

TEST_CASE("solve writes the string") {
  const auto tube = scratch("tube.csv");
  write(tube, "t,lower,upper\n0,-1,1\n1,0.5,2\n2,-1,1\n3,-1,1\n");
  const Run r = run({"solve", "--tube", tube.string(), "--end-value", "0"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "t,value,contact\n0,0,interior\n1,0.5,lower\n2,0.25,interior\n3,0,interior\n");
  CHECK(run({"solve", "--tube", tube.string()}).code == 1);
  CHECK(run({"solve", "--tube", scratch("missing.csv").string(), "--end", "free"}).code == 1);
}

TEST_CASE("malformed csv and unknown flags") {
  const auto tube = scratch("malformed.csv");
  write(tube, "t,lower,upper\n0,-1,1\n1,abc,1\n");
  const Run r = run({"solve", "--tube", tube.string(), "--end", "free"});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK(run({"bounds", "--frobnicate"}).code == 1);
  CHECK(run({"nonsense"}).code == 1);
  CHECK(run({"estimate", "--mode", "wrong", "--paths", "1", "--t", "1", "--quiet"}).code == 1);
}

TEST_CASE("estimate is deterministic and thread independent") {
  const auto a = scratch("stats_a.json");
  const auto b = scratch("stats_b.json");
  const auto c = scratch("stats_c.json");
  const std::vector<std::string> base{"estimate", "--paths", "10", "--t", "50", "--seed", "7", "--quiet"};
  auto with = [&](std::vector<std::string> extra) {
    auto v = base;
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  REQUIRE(run(with({"--out", a.string()})).code == 0);
  REQUIRE(run(with({"--out", b.string()})).code == 0);
  REQUIRE(run(with({"--out", c.string(), "--threads", "3"})).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) == slurp(c));
  const auto j = nlohmann::json::parse(slurp(a));
  CHECK(j["manifest"]["seed"] == 7);
  CHECK(j["manifest"]["config"]["paths"] == 10);
  CHECK(j["stats"]["count"] == 10);
}

TEST_CASE("manifest round trip") {
  const auto out = scratch("pursuit.json");
  const auto hist = scratch("pursuit_hist.csv");
  const auto manifest = scratch("manifest.json");
  const Run first = run({"pursuit", "--t", "20", "--steps", "20000", "--paths", "3", "--seed", "5", "--out",
                         out.string(), "--hist", hist.string(), "--manifest", manifest.string(), "--quiet"});
  REQUIRE(first.code == 0);
  const std::string stats = slurp(out);
  const std::string histogram = slurp(hist);
  const auto m = nlohmann::json::parse(slurp(manifest));
  CHECK(m.contains("wall_time_seconds"));
  CHECK(m["subcommand"] == "pursuit");
  CHECK(histogram.rfind("bin_lo,bin_hi,count,frequency,stationary_mass\n", 0) == 0);
  fs::remove(out);
  fs::remove(hist);
  REQUIRE(run({"--from-manifest", manifest.string()}).code == 0);
  CHECK(slurp(out) == stats);
  CHECK(slurp(hist) == histogram);
}

TEST_CASE("buffer subcommand") {
  const auto trace = scratch("trace.csv");
  const auto sched = scratch("schedule.csv");
  const auto summary = scratch("summary.json");
  write(trace, "slot,S,C\n1,3,1\n2,2,2\n3,4,1\n4,1,0.5\n5,3,0\n");
  const Run r = run({"buffer", "--trace", trace.string(), "--buffer", "2", "--phi", "exp", "--out", sched.string(),
                     "--summary", summary.string(), "--compare-fifo"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(sched);
  CHECK(csv.rfind("slot,S,C,L_opt,L_fifo,B_opt,B_fifo\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  const auto j = nlohmann::json::parse(slurp(summary));
  CHECK(j["F_opt"].get<double>() <= j["F_fifo"].get<double>());
  CHECK(j["used_lattice_fallback"] == false);
  CHECK(run({"buffer", "--trace", trace.string(), "--buffer", "-1"}).code == 1);
  CHECK(run({"buffer", "--trace", trace.string(), "--buffer", "1", "--phi", "poly:0,-1"}).code == 1);
}

TEST_CASE("sweep subcommand") {
  const Run conv = run({"sweep", "--kind", "convergence", "--t-list", "10,20", "--steps-per-unit", "20", "--paths",
                        "5", "--quiet"});
  REQUIRE(conv.code == 0);
  const auto j = nlohmann::json::parse(conv.out);
  CHECK(j["points"].size() == 2);
  CHECK(j["successive_mean_differences"].size() == 1);

  const Run scal = run({"sweep", "--kind", "scaling", "--t", "50", "--steps-per-unit", "10", "--paths", "4", "--quiet"});
  REQUIRE(scal.code == 0);
  CHECK(nlohmann::json::parse(scal.out)["max_rel_dev_unit"].get<double>() < 1e-9);

  const Run fk = run({"sweep", "--kind", "free-knot", "--eps-list", "0.2", "--steps", "2000", "--paths", "3", "--quiet"});
  REQUIRE(fk.code == 0);
  CHECK(fk.err.find("too coarse") != std::string::npos);
  CHECK(run({"sweep", "--kind", "other"}).code == 1);
}

TEST_CASE("help and version") {
  CHECK(run({"--help"}).code == 0);
  const Run v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find(cli::kVersion) != std::string::npos);
}

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>
#include <fstream>
#include <sstream>

#include "qdlab/cli.hpp"

using namespace qdlab;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qdlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::string kLog = R"({"leading":[1,0],"poles":[{"z":[0,0],"mult":2}]})";
const std::string kAnn = R"({"type":"annulus","center":[0,0],"r":1,"R":3})";
const std::string kEx = R"({"leading":[1,0],"zeros":[{"z":[0,1]},{"z":[0,-1]}],
  "poles":[{"z":[0.5,0]},{"z":[-0.5,0]},{"z":[1.5,0]},{"z":[-1.5,0]},{"z":[1,0]}]})";

}  // namespace

TEST_CASE("mass of the logarithmic differential on A(1, 3)") {
  const Run r = run({"mass", "--qd", kLog, "--region", kAnn});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("6.90278459 ± ", 0) == 0);

  const std::string path = "cli_test_log.json";
  std::ofstream(path) << kLog;
  const Run f = run({"mass", "--qd", path, "--region", kAnn});
  CHECK(f.out == r.out);
}

TEST_CASE("portrait output") {
  const Run r = run({"portrait", "--preperiod", "2", "--period", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("|P_f|=4 dim=1\n", 0) == 0);
  const Run j = run({"--json", "portrait", "--preperiod", "2", "--period", "1", "--sym-poles", "6",
                     "--crit-inside", "2"});
  CHECK(j.out.find("\"postsingular_size\":4") != std::string::npos);
  CHECK(j.out.find("Infeasible") != std::string::npos);
  CHECK(run({"portrait", "--preperiod", "1", "--period", "1"}).code == 2);
}

TEST_CASE("exit codes") {
  CHECK(run({"mass", "--qd", "does_not_exist.json"}).code == 2);
  CHECK(run({"mass", "--qd", "{not json"}).code == 2);
  CHECK(run({"mass", "--qd", kLog}).code == 2);  // double pole in the plane
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--max-depth", "1", "--tol", "1e-12", "mass", "--qd", kEx}).code == 3);
  CHECK(run({"mass-condition", "--center", "0,800", "--radius", "0.1", "--lambda", "1"}).code == 4);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("json and text modes print the same numbers") {
  const Run t = run({"eff", "--qd", kEx});
  const Run j = run({"--json", "eff", "--qd", kEx});
  REQUIRE(t.code == 0);
  REQUIRE(j.code == 0);
  const auto ratio_line = t.out.substr(t.out.find("ratio=") + 6);
  const std::string ratio = ratio_line.substr(0, ratio_line.find('\n'));
  CHECK(j.out.find("\"ratio\":" + ratio) != std::string::npos);
}

TEST_CASE("output is identical across runs and worker counts") {
  const std::vector<std::string> args{"push", "--qd", kEx, "--method", "both"};
  setenv("QDLAB_THREADS", "1", 1);
  const Run a = run(args);
  setenv("QDLAB_THREADS", "4", 1);
  const Run b = run(args);
  unsetenv("QDLAB_THREADS");
  const Run c = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("other subcommands") {
  const Run s = run({"sweep", "--family", "ex42", "--n", "1..2"});
  CHECK(s.code == 0);
  CHECK(s.out.rfind("index,mass,pushforward_mass,ratio,concentration_fraction,error_estimate\n", 0) == 0);
  CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 3);

  const Run a = run({"annulus", "--r", "1", "--R", "3"});
  CHECK(a.out.find("log_mass=6.90278459") != std::string::npos);
  CHECK(run({"annulus", "--r", "3", "--R", "1"}).code == 2);

  const Run sn = run({"limit", "sn", "--a", "0.1", "--b", "1.5707963267948966", "--z", "1"});
  CHECK(sn.out.find("S=0.9983341665") != std::string::npos);

  const Run d = run({"limit", "detect", "--qd", kEx});
  CHECK(d.code == 0);
  CHECK(d.out.find("a=0.5\n") != std::string::npos);

  const Run w = run({"push", "--qd", kEx, "--w", "0.3,0.2"});
  CHECK(w.code == 0);
  CHECK(w.out.find("density=") != std::string::npos);

  const Run mc = run({"limit", "mass-condition", "--center", "0,1", "--radius", "0.05", "--lambda", "1"});
  CHECK(mc.out == "holds=true\n");

  const Run svg = run({"plot", "--qd", kEx});
  CHECK(svg.out.rfind("<svg", 0) == 0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "treecut/io.hpp"

using namespace treecut;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(TREECUT_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("treecut_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

const char* kPath = R"({"root":"a","vertices":[{"id":"a","weight":"1"},{"id":"b","weight":"1"}],
  "edges":[{"u":"a","v":"b","cost":"1"}]})";
const char* kStar = R"({"root":"r","vertices":[{"id":"r","weight":1},{"id":"x","weight":1},
  {"id":"y","weight":1},{"id":"z","weight":1}],
  "edges":[{"u":"r","v":"x","cost":1},{"u":"r","v":"y","cost":1},{"u":"r","v":"z","cost":1}]})";

}  // namespace

TEST_CASE("decide on a path") {
  Run r = run("decide --xi 1 --parts 2 --outliers 0 --input " + write("path.json", kPath));
  CHECK(r.status == 0);
  auto doc = io::Json::parse(r.out);
  CHECK(doc["feasible"] == true);
  CHECK(doc["witness"]["max_expansion"] == "1/1");
  Run no = run("decide --xi 1/2 --parts 2 --outliers 0 --input " + write("path.json", kPath));
  CHECK(no.status == 1);
  CHECK(io::Json::parse(no.out)["feasible"] == false);
}

TEST_CASE("optimize and kmax") {
  const std::string star = write("star.json", kStar);
  Run one = run("optimize --parts 1 --outliers 0 --input " + star);
  CHECK(one.status == 0);
  CHECK(io::Json::parse(one.out)["xi_star"] == "0/1");
  Run four = run("optimize --parts 4 --outliers 0 --input " + star);
  CHECK(io::Json::parse(four.out)["xi_star"] == "3/1");
  Run five = run("optimize --parts 5 --outliers 0 --input " + star);
  CHECK(five.status == 1);
  CHECK(io::Json::parse(five.out)["xi_star"].is_null());
  Run k = run("kmax --xi 1 --outliers 0 --input " + star);
  CHECK(k.status == 0);
  CHECK(io::Json::parse(k.out)["k_max"] == 3);
  Run tol = run("optimize --parts 4 --outliers 0 --mode tol --tol 0.01 --input " + star);
  auto doc = io::Json::parse(tol.out);
  CHECK(doc["mode"] == "tol");
  CHECK(parse_rational(doc["xi_star"].get<std::string>()) - 3 <= Rational(1, 100));
}

TEST_CASE("output is byte-stable") {
  const std::string csv = write("g.csv", "u,v,cost\na,b,3\nb,c,2\na,c,1\nc,d,1\nd,e,4\nb,e,1\n");
  Run a = run("cluster --parts 2 --outliers 1 --input " + csv);
  Run b = run("cluster --parts 2 --outliers 1 --threads 3 --input " + csv);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(io::Json::parse(a.out)["expansions_measured_on"] == "spanning_forest");
}

TEST_CASE("cluster on a tree equals optimize") {
  const std::string star = write("star.json", kStar);
  Run c = run("cluster --parts 2 --outliers 1 --input " + star);
  Run o = run("optimize --parts 2 --outliers 1 --input " + star);
  auto cj = io::Json::parse(c.out), oj = io::Json::parse(o.out);
  CHECK(cj["xi_star"] == oj["xi_star"]);
  CHECK(cj["witness"] == oj["witness"]);
}

TEST_CASE("semi-supervised flags") {
  const std::string csv = write("p.csv", "u,v,cost\na,b,1\nb,c,1\n");
  Run yes = run("decide --xi 1 --parts 2 --outliers 1 --require-outlier b --input " + csv);
  CHECK(yes.status == 0);
  CHECK(io::Json::parse(yes.out)["witness"]["residue"] == io::Json::array({"b"}));
  Run no = run("decide --xi 1/2 --parts 2 --outliers 1 --require-outlier b --input " + csv);
  CHECK(no.status == 1);
  const std::string cyc = write("c.csv", "u,v,cost\na,b,1\nb,c,1\na,c,1\nc,d,1\n");
  CHECK(run("decide --xi 1 --parts 1 --outliers 1 --require-outlier d --input " + cyc).status == 2);
  CHECK(run("decide --xi 1 --parts 1 --outliers 1 --require-outlier a --input " + cyc).status == 0);
  CHECK(run("decide --xi 1 --parts 1 --outliers 1 --require-outlier a --forbid a --input " + cyc)
            .status == 2);
}

TEST_CASE("dot output") {
  const std::string dot = (scratch() / "out.dot").string();
  Run r = run("optimize --parts 2 --outliers 1 --emit-dot " + dot + " --input " +
              write("star.json", kStar));
  CHECK(r.status == 0);
  std::ifstream in(dot);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("graph treecut") == 0);
}

TEST_CASE("errors exit 2") {
  CHECK(run("decide --xi 1 --parts 2 --input /nonexistent.json").status == 2);
  CHECK(run("decide --parts 2 --input " + write("path.json", kPath)).status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("decide --xi abc --parts 2 --input " + write("path.json", kPath)).status == 2);
  CHECK(run("decide --xi 1 --input " + write("bad.json", "{not json")).status == 2);
  CHECK(run("decide --xi 1 --input " + write("bad.csv", "u,v,cost\na,b,0\n")).status == 2);
  CHECK(run("decide --xi 1 --input " + write("cyc.csv", "u,v,cost\na,b,1\nb,c,1\na,c,1\n"))
            .status == 2);
  CHECK(run("--help").status == 0);
}

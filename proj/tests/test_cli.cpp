#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "ahg/report.hpp"

using namespace ahg;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + AHG_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("verify --family F4-2 --r 1/3 --order 12").status == 0);
  auto bad = run("verify --family G3 --variant table4-plus-x --r 1/3");
  CHECK(bad.status == 1);
  CHECK(bad.out.find("certificate    at x:") != std::string::npos);
  CHECK(run("verify --family nosuch").status == 2);
  CHECK(run("verify --family F4-2 --r 1/2").status == 2);
  CHECK(run("verify --family F4-2 --r one-third").status == 2);
  CHECK(run("verify --family F4-2 --branch nope=+1").status == 2);
  CHECK(run("verify --family F4-2 --variant nope").status == 2);
  CHECK(run("verify --family F4-2 --format yaml").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("verify --family F4-2 --family-file /nonexistent").status == 2);
  CHECK(run("census --family G3").status == 0);
  CHECK(run("decompose --family F4-1 --r 2/5").status == 0);
  CHECK(run("relation --family H5 --r 1/3 --s 1/5").status == 0);
  CHECK(run("extract --family H4-3 --order 8").status == 0);
}

TEST_CASE("output is byte-stable") {
  for (const char* args : {"verify --family H4-1 --r 1/3,2/5", "verify --family H4-3 --format json",
                           "census --family FC-2 --n 3", "expand --family F4-2 --symbolic 2"}) {
    auto a = run(args), b = run(args);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}

TEST_CASE("JSON verdicts round-trip and agree with text mode") {
  auto j = run("verify --family F4-1 --r 1/3 --format json");
  REQUIRE(j.status == 0);
  Verdict v = verdict_from_json(Json::parse(j.out));
  CHECK(verdict_to_json(v).dump(2) + "\n" == j.out);
  auto t = run("verify --family F4-1 --r 1/3");
  CHECK(render_verdict(v) == t.out);
  CHECK(v.pass);
  CHECK(v.branch.at("e1") == -1);
}

TEST_CASE("default order from the environment") {
  auto j = Json::parse(run("verify --family F4-2 --format json", "AHG_ORDER=6").out);
  CHECK(j["order"] == 6);
  j = Json::parse(run("verify --family F4-2 --format json --order 8", "AHG_ORDER=6").out);
  CHECK(j["order"] == 8);
  j = Json::parse(run("verify --family F4-2 --format json").out);
  CHECK(j["order"] == 12);
  CHECK(run("verify --family F4-2", "AHG_ORDER=zero").status == 2);
}

TEST_CASE("explicit branches and family files") {
  auto wrong = run("verify --family F4-1 --branch e1=+1,s1=+1");
  CHECK(wrong.status == 1);
  CHECK(run("verify --family F4-1 --branch e1=-1").status == 0);

  std::string path = "cli_test_family.txt";
  std::ofstream(path) << "family Toy\nvariables z\ngrid 2\nconfig\n 1 0 0 1\n 0 1 0 1\n 0 0 1 -1\nend\nh 1 1 1\n"
                         "lattice\n -1 -1 1 1\nend\nbeta -r, -r - 1/2, -1/2\nbasis 1 2 3\nbasis 1 2 4\n"
                         "coefficients 1, 0\nhorn theta(z)*(theta(z) - 1/2) - z*(theta(z) + r)*(theta(z) + r + 1/2)\n"
                         "phi = ((1 + sqrt(z))^(-2*r) + (1 - sqrt(z))^(-2*r))/2\npower-form no\n";
  CHECK(run("verify --family Toy --family-file " + path).status == 0);
  CHECK(run("verify --family Other --family-file " + path).status == 2);
  CHECK(run("verify-all --family-file " + path).status == 0);
  std::remove(path.c_str());
}

TEST_CASE("symbolic head output") {
  auto r = run("expand --family F4-2 --symbolic 2");
  CHECK(r.status == 0);
  CHECK(r.out == "Phi(r) = 1 + 2r√x + 2r√y + (r+2r²)x + (2r+4r²)√(xy) + (r+2r²)y + ...\n");
}

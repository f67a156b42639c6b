#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cty::cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("check-cartan reports D and t") {
  auto r = call({"check-cartan", "--matrix", "[[2,-1],[-5,2]]"});
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["message"] == "tamely laced, D=diag(5,1), t=5");
  CHECK(j["d"] == json({5, 1}));
  CHECK(j["t"] == 5);

  r = call({"check-cartan", "--matrix", "[[2,-1],[-5,2]]", "--text"});
  CHECK(r.out == "tamely laced, D=diag(5,1), t=5\n");
}

TEST_CASE("exit codes") {
  CHECK(call({"check-cartan", "--matrix", "[[2,-2],[-2,2]]"}).code == 1);
  CHECK(json::parse(call({"check-cartan", "--matrix", "[[2,-2],[-2,2]]"}).out)["message"] == "not tamely laced");
  // not symmetrizable: 1*1*1 around a triangle against 2*1*1
  CHECK(call({"check-cartan", "--matrix", "[[2,-1,-1],[-2,2,-1],[-1,-1,2]]"}).code == 2);
  CHECK(call({"check-cartan", "--matrix", "[[2,1],[1,2]]"}).code == 2);
  CHECK(call({"check-cartan", "--matrix", "[[2,-1],[-5"}).code == 2);
  CHECK(call({"build-quiver", "--matrix", "[[2,-1],[-2,2]]", "--level", "1"}).code == 2);
  CHECK(call({"build-quiver", "--matrix", "[[2,-2],[-2,2]]"}).code == 2);
  CHECK(call({"verify-t", "--matrix", "[[2,-1],[-2,2]]", "--window", "1,3"}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"run", "--help"}).code == 0);
}

TEST_CASE("verify-periodicity on the t = 4 rank-2 quiver") {
  auto r = call({"verify-periodicity", "--matrix", "[[2,-1],[-4,2]]", "--level", "2"});
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["ok"] == true);
  CHECK(j["reports"].size() == 2);
}

TEST_CASE("verify-t and verify-y pass on small rank 2") {
  for (const char* mode : {"trivial", "semifield"}) {
    auto r = call({"verify-t", "--matrix", "[[2,-1],[-2,2]]", "--level", "2", "--mode", mode});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["ok"] == true);
  }
  auto r = call({"verify-y", "--matrix", "[[2,-1],[-3,2]]", "--level", "2", "--window", "-6,6", "--text"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
}

TEST_CASE("input file with explicit signs and colors") {
  const std::string path = "cli_input_test.json";
  {
    std::ofstream f(path);
    f << R"({"cartan": [[2,-1],[-3,2]], "signs": ["-","+"], "colors": ["-","-"], "level": 3})";
  }
  auto r = call({"build-quiver", "--input", path});
  CHECK(r.code == 0);
  auto q = json::parse(r.out)["quiver"];
  // t = 3, level 3: three left columns of height t*l - 1 = 8 and one right column of 2
  CHECK(q["vertices"].size() == 3 * 2 + 8);
  CHECK(call({"verify-t", "--input", path, "--level", "2"}).code == 0);
  std::remove(path.c_str());
}

TEST_CASE("schedule and export formats") {
  auto r = call({"schedule", "--matrix", "[[2,-1],[-2,2]]"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["batches"].size() == 4);

  auto dot = call({"export", "--matrix", "[[2,-1],[-2,2]]", "--format", "dot", "--step", "2"});
  CHECK(dot.code == 0);
  CHECK(dot.out.rfind("digraph", 0) == 0);
  // a full cycle returns the initial quiver
  CHECK(call({"export", "--matrix", "[[2,-1],[-2,2]]", "--step", "4"}).out ==
        call({"export", "--matrix", "[[2,-1],[-2,2]]", "--step", "0"}).out.replace(
            call({"export", "--matrix", "[[2,-1],[-2,2]]", "--step", "0"}).out.find("\"step\": 0"), 9,
            "\"step\": 4"));
}

TEST_CASE("identical input gives byte-identical output") {
  const std::vector<std::vector<std::string>> cmds = {
      {"run", "--matrix", "[[2,-1],[-2,2]]", "--mode", "semifield", "--window", "3"},
      {"verify-y", "--matrix", "[[2,-1],[-2,2]]", "--full"},
      {"build-quiver", "--matrix", "[[2,-1],[-3,2]]", "--format", "dot"},
  };
  for (const auto& c : cmds) {
    auto a = call(c), b = call(c);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

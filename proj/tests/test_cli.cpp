#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>
#include <vector>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string data(const std::string& name) { return std::string(LVMKIT_EXAMPLES_DIR) + "/" + name; }

// stdout only; stderr is discarded
Run run(const std::string& args) {
  const std::string cmd = std::string(LVMKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

} // namespace

TEST_CASE("analyze") {
  const Run e1 = run("analyze " + data("e1.json"));
  CHECK(e1.code == 0);
  CHECK(has(e1.out, "type (2,6,4)"));
  CHECK(has(e1.out, "indispensable {1,2,3,4}"));
  CHECK(has(e1.out, "regime NonResonant"));

  const Run dbl = run("analyze " + data("double_p0.json"));
  CHECK(dbl.code == 0);
  CHECK(has(dbl.out, "regime Double{p=0}"));
  CHECK(has(dbl.out, "cohomology (5,10,5,0)"));
  const Run sgl = run("analyze " + data("single_p0q2.json"));
  CHECK(sgl.code == 0);
  CHECK(has(sgl.out, "regime Single{p=0,q=2}"));

  const Run five = run("analyze " + data("five_vectors.json"));
  CHECK(five.code == 1);
  CHECK(has(five.out, "type is not (2,6,4)"));

  CHECK(run("analyze " + data("malformed.json")).code == 2);
  CHECK(run("analyze " + data("does_not_exist.json")).code == 2);
  CHECK(run("analyze").code == 2);

  const Run js = run("analyze --json " + data("e1.json"));
  REQUIRE(js.code == 0);
  const auto doc = nlohmann::json::parse(js.out);
  CHECK(doc.contains("config"));
  CHECK(doc.contains("holonomy"));
  CHECK(doc.contains("resonances"));
}

TEST_CASE("resonances") {
  const Run r = run("resonances " + data("eigen_single.json"));
  CHECK(r.code == 0);
  CHECK(has(r.out, "(3, [1,2,0])"));
  CHECK(has(r.out, "regime Single{p=1,q=2}"));
  const Run e = run("resonances " + data("eigen_e1.json"));
  CHECK(e.code == 0);
  CHECK(has(e.out, "regime NonResonant"));
  // the configuration and its eigen-data give the same resonance report
  CHECK(run("resonances " + data("e1.json")).out == e.out);
  CHECK(run("resonances --tol 0 " + data("eigen_e1.json")).code == 2);
}

TEST_CASE("verify") {
  const Run g = run("verify group-laws --seed 7");
  CHECK(g.code == 0);
  CHECK(has(g.out, "seed=7"));
  CHECK(run("verify gluing --p 1 --samples 100").code == 0);
  CHECK(run("verify developing --samples 20").code == 0);
  CHECK(run("verify action --samples 5").code == 0);
  CHECK(run("verify all --samples 10 --inject-fault").code == 1);
  CHECK(run("verify group-laws --samples 10 --inject-fault").code == 1);
  CHECK(run("verify nonsense").code == 2);
  CHECK(run("verify group-laws --tol 0").code == 2);
  CHECK(run("verify group-laws --tol -1").code == 2);
  CHECK(run("verify group-laws --samples 0").code == 2);

  const Run j = run("verify gluing --samples 10 --json");
  REQUIRE(j.code == 0);
  CHECK_NOTHROW((void)nlohmann::json::parse(j.out));
}

TEST_CASE("deform") {
  for (const char* name : {"deform_nonresonant.json", "deform_single.json", "deform_double.json"}) {
    const Run r = run(std::string("deform --samples 30 ") + data(name));
    CHECK(r.code == 0);
    CHECK(has(r.out, "PASS"));
  }
  CHECK(run("deform " + data("e1.json")).code == 2);
}

TEST_CASE("reports are byte-identical across runs") {
  for (const std::string& args : std::vector<std::string>{"verify all --samples 5 --seed 3", "analyze --json " + data("e1.json"),
                                 "deform --samples 20 --seed 4 " + data("deform_double.json")}) {
    const Run a = run(args), b = run(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cutproj/builtins.hpp"
#include "cutproj/schemefile.hpp"

using namespace cutproj;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

// Runs the CLI with the given arguments; stderr is captured through a temp file.
Run run(const std::string& args) {
  const char* bin = std::getenv("CUTPROJ_BIN");
  REQUIRE(bin != nullptr);
  auto errf = fs::temp_directory_path() / "cutproj_cli_err.txt";
  std::string cmd = std::string(bin) + " " + args + " 2>" + errf.string();
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  std::ifstream e(errf);
  r.err.assign(std::istreambuf_iterator<char>(e), {});
  return r;
}

fs::path temp_file(const std::string& name, const std::string& text) {
  auto p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  auto i = s.find(from);
  REQUIRE(i != std::string::npos);
  return s.replace(i, from.size(), to);
}

}  // namespace

TEST_CASE("scheme files round trip for every builtin") {
  for (auto& name : builtin_names()) {
    CAPTURE(name);
    auto spec = builtin_spec(name);
    auto text = scheme_to_json(spec);
    auto back = scheme_from_json(text);
    CHECK(scheme_to_json(back) == text);
    auto a = validate(spec), b = validate(back);
    CHECK(a.sys.proj == b.sys.proj);
    CHECK(a.sys.vertices == b.sys.vertices);
    CHECK(a.sys.halfspaces.size() == b.sys.halfspaces.size());
    CHECK(back.field->describe() == spec.field->describe());
  }
}

TEST_CASE("malformed scheme text") {
  CHECK_THROWS_AS(scheme_from_json("{"), ValidationFailure);
  CHECK_THROWS_AS(scheme_from_json("{}"), ValidationFailure);
  auto good = scheme_to_json(builtin_spec("fibonacci"));
  CHECK_THROWS_AS(scheme_from_json(replace_once(good, "\"k\": 2", "\"k\": 3")), ValidationFailure);
  try {
    scheme_from_json("[1, 2]");
  } catch (const ValidationFailure& e) {
    CHECK(e.code() == ValidationCode::MALFORMED);
  }
}

TEST_CASE("examples subcommand") {
  auto r = run("examples list");
  CHECK(r.code == 0);
  for (auto& name : builtin_names()) CHECK(r.out.find(name) != std::string::npos);
  auto show = run("examples show fibonacci");
  CHECK(show.code == 0);
  CHECK(scheme_to_json(scheme_from_json(show.out)) == show.out);
  auto path = fs::temp_directory_path() / "cutproj_ab.json";
  CHECK(run("examples export ammann_beenker " + path.string()).code == 0);
  auto v = run("validate " + path.string());
  CHECK(v.code == 0);
  CHECK(v.out.find("valid: ammann_beenker") != std::string::npos);
}

TEST_CASE("classify reports LR for the octagonal example") {
  auto r = run("classify examples/ammann_beenker");
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict: LR ") != std::string::npos);
  auto j = run("classify fibonacci --json");
  CHECK(j.code == 0);
  CHECK(j.out.find("\"verdict\": \"LR\"") != std::string::npos);
  auto c = run("classify cubical_demo");
  CHECK(c.out.find("verdict: NOT_LR") != std::string::npos);
}

TEST_CASE("validation failures exit with code 2") {
  // Rational slope: the internal projection of Z^2 is discrete.
  auto spec = builtin_spec("fibonacci");
  auto periodic = spec;
  FE half(spec.field, Rat(1, 2));
  periodic.proj_internal = {{FE(spec.field, Rat(1)), half}};
  auto p = temp_file("cutproj_periodic.json", scheme_to_json(periodic));
  auto r = run("validate " + p.string());
  CHECK(r.code == 2);
  CHECK(r.err.find("\"error\":\"PERIODIC\"") != std::string::npos);

  auto m = temp_file("cutproj_malformed.json", "{\"name\": \"x\"");
  auto rm = run("analyze " + m.string());
  CHECK(rm.code == 2);
  CHECK(rm.err.find("MALFORMED") != std::string::npos);
}

TEST_CASE("unsupported dimension exits with code 3") {
  // 6-to-3 product of three 2-to-1 schemes over Q(cbrt 2), unit cube window.
  SchemeSpec s;
  s.name = "cube3";
  s.field = builtin_spec("canonical_k3n1").field;
  s.k = 6;
  s.d = 3;
  s.n = 3;
  FE th = FE::theta(s.field), z(s.field, Rat(0)), o(s.field, Rat(1));
  s.proj_internal.assign(3, FieldVec(6, z));
  s.proj_physical.assign(3, FieldVec(6, z));
  for (int i = 0; i < 3; ++i) {
    s.proj_internal[i][i] = o;
    s.proj_internal[i][3 + i] = th;
    s.proj_physical[i][i] = o;
    s.proj_physical[i][3 + i] = -th * th;
    FieldVec e(3, z);
    e[i] = o;
    s.halfspaces.push_back({e, o});
    e[i] = -o;
    s.halfspaces.push_back({e, z});
  }
  auto p = temp_file("cutproj_cube3.json", scheme_to_json(s));
  CHECK(run("validate " + p.string()).code == 0);
  auto r = run("regions " + p.string() + " --r 1");
  CHECK(r.code == 3);
  CHECK(r.err.find("DIMENSION_UNSUPPORTED") != std::string::npos);
}

TEST_CASE("empirical subcommands") {
  auto dir = fs::temp_directory_path();
  auto csv = dir / "cutproj_pts.csv", svg = dir / "cutproj_pts.svg";
  auto r = run("points fibonacci --eta 100 --seed 3 --csv " + csv.string() + " --svg " + svg.string());
  CHECK(r.code == 0);
  CHECK(fs::file_size(csv) > 0);
  CHECK(fs::file_size(svg) > 0);
  auto c = run("complexity fibonacci --rmax 5");
  CHECK(c.code == 0);
  CHECK(c.out.find("r,p_hat,centers") == 0);
  CHECK(c.out.find("\n1,3,") != std::string::npos);
  auto rp = run("repetitivity fibonacci --rmax 3");
  CHECK(rp.code == 0);
  auto d = run("dioscan fibonacci --rlist 10,100");
  CHECK(d.code == 0);
  CHECK(d.out.find("0,1,100,") != std::string::npos);
  CHECK(d.out.find("CERTIFIED_D") != std::string::npos);
  auto g = run("regions fibonacci --r 5");
  CHECK(g.code == 0);
  CHECK(g.out.find("(= |W|)") != std::string::npos);
  CHECK(run("decompose square_product").out.find("factors: 2") != std::string::npos);
  CHECK(run("analyze ammann_beenker").out.find("alpha: 2") != std::string::npos);
  CHECK(run("analyze no_such_scheme").code == 1);
}

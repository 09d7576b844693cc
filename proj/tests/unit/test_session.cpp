#include <sstream>

#include "csr/errors.hpp"
#include "csr/session.hpp"
#include "doctest.h"

using namespace csr;

namespace {

int run(const std::string& script, Session& s, std::string* out = nullptr, std::string* err = nullptr) {
  std::istringstream in(script);
  std::ostringstream o, e;
  int code = run_script(in, s, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

}  // namespace

TEST_CASE("empty script passes with an empty report") {
  Session s;
  CHECK(run("", s) == 0);
  auto r = s.report();
  CHECK(r["entries"].empty());
  CHECK(r["results"].empty());
  CHECK(r["status"] == "PASS");
  CHECK(run("# only a comment\n\n   \n", s) == 0);
  CHECK(s.report()["entries"].empty());
}

TEST_CASE("script errors exit 2 with the line number") {
  std::string err;
  Session a;
  CHECK(run("ring R = C(1|0)\nfrobnicate x\n", a, nullptr, &err) == 2);
  CHECK(err.find("line 2") != std::string::npos);
  CHECK(err.find("frobnicate") != std::string::npos);

  Session b;
  CHECK(run("nf x1\n", b, nullptr, &err) == 2);
  Session c;
  CHECK(run("ring R = C(1|1)\nnf sin(\n", c, nullptr, &err) == 2);
  CHECK(err.find("line 2") != std::string::npos);
  Session d;
  CHECK(run("ring R = C(1|1)\nelem a = t1\napply exp a\n", d, nullptr, &err) == 2);
  Session e;
  CHECK(run("ring R = C(1|0)\npoints grid=0\n", e) == 2);
  Session f;
  CHECK(run("ring R = C(1|0)\nelem R = x1\n", f, nullptr, &err) == 2);
  CHECK(err.find("already defined") != std::string::npos);
  Session g;
  CHECK(run("ring R = C(1|0)\nelem x1 = 2\n", g) == 2);
}

TEST_CASE("verdicts carry provenance and tolerances") {
  SessionConfig cfg;
  cfg.tol.rel = 1e-7;
  Session s(cfg);
  CHECK(run("ring R = C(1|0)\nequal sin(x1)^2 + cos(x1)^2 == 1\nnf x1*x1\n", s) == 0);
  auto entries = s.report()["entries"];
  REQUIRE(entries.size() == 3);
  CHECK(entries[0]["provenance"].is_null());
  CHECK(entries[1]["provenance"] == "sampled");
  CHECK(entries[1]["tolerances"]["rel"] == 1e-7);
  CHECK(entries[2]["provenance"] == "exact");
  CHECK(entries[2].contains("tolerances"));
}

TEST_CASE("failing expectations exit 1") {
  Session s;
  CHECK(run("ring R = C(1|0)\nexpect nf x1*x1 => x1^2\n", s) == 0);
  Session t;
  CHECK(run("ring R = C(1|0)\nexpect nf x1*x1 => x1^3\n", t) == 1);
  CHECK(t.report()["status"] == "FAIL");
  Session u;
  CHECK(run("ring A = C(1|0)\nring B = C(1|0) / (x1)\nmorphism f : B -> A = [x1 -> 1]\n", u) == 1);
}

TEST_CASE("nonsplit report") {
  Session s;
  const char* script =
      "ring R = C(1|2) / (x1^2 + t1t2)\n"
      "nf x1^2\n"
      "nf x1^4\n"
      "split\n"
      "evenpart\n";
  CHECK(run(script, s) == 0);
  auto res = s.report()["results"];
  CHECK(res["x1^4"] == "0");
  CHECK(res["x1^2"] == "-t1t2");
  CHECK(res["split"] == "NotSplit");
  CHECK(res["evenpart"] == "C(1|0) / (x1^4)");
  for (const auto& e : s.report()["entries"]) CHECK(e["elapsed_ms"].is_null());
}

TEST_CASE("repl keeps state across lines and reports errors inline") {
  Session s;
  std::istringstream in("ring R = C(1|2); elem a = x1 + sin(x1)*t1t2; apply exp a\nbogus\nnf a*a\nquit\nnf a\n");
  std::ostringstream out;
  repl(in, s, out, false);
  std::string text = out.str();
  CHECK(text.find("exp(x1) + exp(x1)*sin(x1)*t1t2\n") != std::string::npos);
  CHECK(text.find("error: line 2: unknown command 'bogus'") != std::string::npos);
  CHECK(text.find("x1^2 + 2*x1*sin(x1)*t1t2") != std::string::npos);
  CHECK(s.quit_requested());
  CHECK(s.report()["entries"].size() == 4);
}

TEST_CASE("points feed the svg plot") {
  Session s;
  CHECK(run("ring C = C(2|0) / (x1^2 + x2^2 - 1)\npoints grid=40\n", s) == 0);
  REQUIRE(s.point_sets().size() == 1);
  CHECK(s.point_sets()[0].points.size() >= 20);
  std::string svg = points_svg(s.point_sets());
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<circle") != std::string::npos);
}

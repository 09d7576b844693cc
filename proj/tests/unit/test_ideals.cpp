#include <cmath>
#include <random>

#include "csr/cinfty.hpp"
#include "csr/errors.hpp"
#include "csr/ideals.hpp"
#include "doctest.h"

using namespace csr;

namespace {

QuotientRing quotient(int p, int q, std::vector<const char*> gens) {
  std::vector<SuperElement> g;
  for (const char* s : gens) g.push_back(parse_element(s, p, q));
  return QuotientRing(SuperIdeal(p, q, g));
}

SamplerConfig sampler(double lo = -2, double hi = 2, int p = 1) {
  SamplerConfig c;
  c.box = Box::cube(p, lo, hi);
  c.seed = 42;
  return c;
}

}  // namespace

TEST_CASE("orientation") {
  QuotientRing ns = quotient(1, 2, {"x1^2 + t1t2"});
  REQUIRE(ns.rules().rules.size() == 1);
  CHECK(ns.rules().rules[0].to_string() == "x1^2 -> -t1t2");
  QuotientRing odd = quotient(1, 2, {"t1"});
  CHECK(odd.rules().rules[0].to_string() == "t1 -> 0");
  QuotientRing circle = quotient(2, 0, {"x1^2 + x2^2 - 1"});
  CHECK(circle.rules().rules[0].to_string() == "x1^2 -> 1 - x2^2");
  CHECK_THROWS_AS(quotient(1, 2, {"sin(x1) + t1t2"}), UnorientableGenerator);
  try {
    quotient(1, 2, {"t1", "sin(x1) + t1t2"});
  } catch (const UnorientableGenerator& e) {
    CHECK(e.indices() == std::vector<std::size_t>{1});
  }
  CHECK_THROWS_AS(quotient(1, 1, {"x1 + t1"}), ParityError);
}

TEST_CASE("normal forms in the non-split example") {
  QuotientRing ns = quotient(1, 2, {"x1^2 + t1t2"});
  CHECK(ns.normal_form(ns.element("x1^4")).is_zero());
  CHECK(ns.normal_form(ns.element("x1^2")) == ns.element("-t1t2"));
  CHECK(ns.normal_form(ns.element("x1^3")) == ns.element("-x1*t1t2"));
  CHECK(ns.normal_form(ns.element("t1t2t1")).is_zero());
  CHECK(ns.normal_form(ns.element("sin(x1)*x1^2 + t1")) == ns.element("-sin(x1)*t1t2 + t1"));
  CHECK(ns.reduces_to_zero(ns.element("x1^2 + t1t2")));
}

TEST_CASE("normal form is idempotent, linear, multiplicative and graded") {
  std::vector<QuotientRing> rings = {quotient(1, 2, {"x1^2 + t1t2"}), quotient(2, 2, {"x1*t1", "x2^2 - x1"}),
                                     quotient(1, 3, {"t1t2 - x1*t2t3", "x1^3"}), quotient(2, 0, {"x1^2 + x2^2 - 1"})};
  std::mt19937_64 rng(8);
  for (const auto& R : rings) {
    for (int t = 0; t < 8; ++t) {
      auto rand_elem = [&](bool odd) {
        SuperElement e(R.p(), R.q());
        std::uniform_int_distribution<int> coin(0, 1), ex(0, 3);
        for (MultiIndex I = 0; I < (1u << R.q()); ++I) {
          if ((degree(I) % 2 == 1) != odd || !coin(rng)) continue;
          SmoothExpr c = SmoothExpr::constant(Number(ex(rng) + 1), R.p());
          for (int i = 1; i <= R.p(); ++i) c = c * SmoothExpr::pow(SmoothExpr::var(i, R.p()), ex(rng));
          if (coin(rng)) c = c * parse_expr("sin(x1)", R.p());
          e.add_term(I, c);
        }
        return e;
      };
      SuperElement a = rand_elem(false), b = rand_elem(t % 2 == 1);
      SuperElement na = R.normal_form(a), nb = R.normal_form(b);
      CHECK(R.normal_form(na) == na);
      CHECK(R.normal_form(a + b) == R.normal_form(na + nb));
      CHECK(R.normal_form(mul(a, b)) == R.normal_form(mul(na, nb)));
      if (!nb.is_zero()) CHECK(nb.parity() == b.parity());
      for (const auto& g : R.ideal().generators()) CHECK(R.reduces_to_zero(g));
    }
  }
}

TEST_CASE("zero sets") {
  ZeroSet flat = find_zeros({parse_expr("flat(x1)", 1)}, 1, sampler());
  REQUIRE(flat.points.size() == 1);
  CHECK(std::fabs(flat.points[0][0]) < 1e-6);
  ZeroSet two = find_zeros({parse_expr("x1*(x1 - 1)", 1)}, 1, sampler());
  REQUIRE(two.points.size() == 2);
  CHECK(two.points[0][0] == doctest::Approx(0.0));
  CHECK(two.points[1][0] == doctest::Approx(1.0));
  ZeroSet circle = find_zeros({parse_expr("x1^2 + x2^2 - 1", 2)}, 2, sampler(-2, 2, 2));
  CHECK(circle.points.size() > 8);
  for (const auto& z : circle.points) CHECK(std::fabs(z[0] * z[0] + z[1] * z[1] - 1) < 1e-9);
  CHECK(find_zeros({parse_expr("3", 1)}, 1, sampler()).empty_exact);
  CHECK(find_zeros({}, 1, sampler()).whole_space);
}

TEST_CASE("multiple roots and flat factors are located sharply") {
  // simplify expands the product, so the double root survives into the surrogate
  ZeroSet dbl = find_zeros({parse_expr("(x1 - 1)^2*(x1 + 1)", 1)}, 1, sampler());
  REQUIRE(dbl.points.size() == 2);
  CHECK(std::fabs(dbl.points[1][0] - 1.0) < 1e-12);
  ZeroSet triple = find_zeros({parse_expr("(x1 - 0.5)^3", 1)}, 1, sampler());
  REQUIRE(triple.points.size() == 1);
  CHECK(std::fabs(triple.points[0][0] - 0.5) < 1e-10);
  // flat(x1)*(x1^2 - 1) expands to a sum; the shared flat factor is divided out
  ZeroSet mixed = find_zeros({parse_expr("flat(x1)*(x1^2 - 1)", 1)}, 1, sampler());
  REQUIRE(mixed.points.size() == 3);
  CHECK(mixed.points[0][0] == doctest::Approx(-1.0));
  CHECK(std::fabs(mixed.points[1][0]) < 1e-12);
  CHECK(mixed.points[2][0] == doctest::Approx(1.0));
  auto v = radical_membership(parse_expr("x1^3 - x1", 1), {parse_expr("flat(x1)*(x1^2 - 1)", 1)}, 1, sampler());
  CHECK(v.kind == Membership::In);
}

TEST_CASE("C-infinity radical membership") {
  QuotientRing fl = quotient(1, 0, {"flat(x1)"});
  auto in = radical_membership(fl.element("x1"), fl, sampler());
  CHECK(in.kind == Membership::In);
  QuotientRing any = quotient(1, 2, {"x1"});
  auto odd = radical_membership(any.element("t1"), any, sampler());
  CHECK(odd.kind == Membership::In);
  CHECK(odd.provenance == Provenance::Exact);
  auto out = radical_membership(any.element("1"), any, sampler());
  CHECK(out.kind == Membership::Out);
  REQUIRE(out.witness.has_value());
  CHECK(std::fabs((*out.witness)[0]) < 1e-9);
  QuotientRing free(1, 0);
  CHECK(radical_membership(free.element("x1"), free, sampler()).kind == Membership::Out);
  CHECK(radical_membership(free.element("sin(x1)^2 + cos(x1)^2 - 1"), free, sampler()).kind == Membership::In);
}

TEST_CASE("radical laws on sampled zero sets") {
  auto cfg = sampler();
  std::vector<SmoothExpr> I{parse_expr("x1", 1)}, H{parse_expr("x1 - 1", 1)};
  std::vector<SmoothExpr> IH{parse_expr("x1*(x1 - 1)", 1)};
  std::vector<SmoothExpr> probes = {parse_expr("x1", 1), parse_expr("x1 - 1", 1), parse_expr("x1^2 - x1", 1),
                                    parse_expr("sin(3.14159265358979*x1)", 1), parse_expr("1", 1)};
  // Z(I*H) = Z(I) u Z(H), and the product radical equals the intersection radical
  auto zih = find_zeros(IH, 1, cfg).points;
  auto zi = find_zeros(I, 1, cfg).points, zh = find_zeros(H, 1, cfg).points;
  REQUIRE(zih.size() == zi.size() + zh.size());
  for (const auto& f : probes) {
    bool in_both = radical_membership(f, I, 1, cfg).kind == Membership::In &&
                   radical_membership(f, H, 1, cfg).kind == Membership::In;
    CHECK((radical_membership(f, IH, 1, cfg).kind == Membership::In) == in_both);
    // I subset of sqrt(I), and monotonicity along I*H subset of I
    if (radical_membership(f, IH, 1, cfg).kind == Membership::Out) continue;
    CHECK(radical_membership(f, I, 1, cfg).kind == Membership::In);
  }
  for (const auto& g : IH) CHECK(radical_membership(g, IH, 1, cfg).kind == Membership::In);
}

TEST_CASE("classical radical is inside the C-infinity radical") {
  QuotientRing R = quotient(1, 2, {"x1^3 - x1^2*t1t2"});
  for (const char* s : {"x1", "x1^2", "x1*sin(x1)", "x1 + 1", "t1"}) {
    SuperElement f = R.element(s);
    bool classical = nilpotency_order(f, R, 8).has_value();
    if (classical) CHECK(radical_membership(f, R, sampler()).kind == Membership::In);
  }
}

TEST_CASE("flat ideal: powers of x are not members") {
  std::vector<SmoothExpr> gens{parse_expr("flat(x1)", 1)};
  auto zs = find_zeros(gens, 1, sampler()).points;
  for (int n = 1; n <= 8; ++n) {
    SmoothExpr xn = SmoothExpr::pow(SmoothExpr::var(1, 1), n);
    CHECK(diverges_near(xn, gens, zs, 1));
  }
  std::vector<SmoothExpr> sq{parse_expr("x1^2", 1)};
  auto z2 = find_zeros(sq, 1, sampler()).points;
  CHECK(diverges_near(parse_expr("x1", 1), sq, z2, 1));
  CHECK_FALSE(diverges_near(parse_expr("x1^2*sin(x1)", 1), sq, z2, 1));
}

TEST_CASE("superreducedness") {
  CHECK(is_cinfty_superreduced(QuotientRing(1, 2), sampler()).kind == Decision::Yes);
  auto ns = is_cinfty_superreduced(quotient(1, 2, {"x1^2 + t1t2"}), sampler());
  CHECK(ns.kind == Decision::No);
  REQUIRE(ns.witness.has_value());
  CHECK(ns.witness->to_string() == "x1");
  auto fl = is_cinfty_superreduced(quotient(1, 0, {"flat(x1)"}), sampler());
  CHECK(fl.kind == Decision::No);
  REQUIRE(fl.witness.has_value());
  CHECK(fl.witness->to_string() == "x1");
  CHECK(is_cinfty_superreduced(quotient(2, 1, {"x1^2 + x2^2 - 1"}), sampler(-2, 2, 2)).kind == Decision::Yes);
}

TEST_CASE("splitness") {
  auto s1 = is_split(quotient(1, 2, {"x1*t1t2", "t1"}));
  CHECK(s1.kind == Splitness::Split);
  CHECK(s1.section == "x1 -> x1");
  auto s2 = is_split(quotient(1, 2, {"x1^2 + t1t2"}));
  CHECK(s2.kind == Splitness::NotSplit);
  REQUIRE(s2.obstruction.has_value());
  CHECK(*s2.obstruction == std::make_pair(2, 4));
  CHECK(is_split(QuotientRing(2, 3)).kind == Splitness::Split);
  CHECK(is_split(quotient(1, 2, {"x1 + t1t2"})).kind == Splitness::Unknown);
}

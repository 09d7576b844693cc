#include <random>

#include "csr/cinfty.hpp"
#include "csr/errors.hpp"
#include "csr/structure.hpp"
#include "doctest.h"

using namespace csr;

namespace {

QuotientRing quotient(int p, int q, std::vector<const char*> gens) {
  std::vector<SuperElement> g;
  for (const char* s : gens) g.push_back(parse_element(s, p, q));
  return QuotientRing(SuperIdeal(p, q, g));
}

WeilSuperAlgebra weil(int q, std::vector<const char*> rels) {
  std::vector<SuperElement> r;
  for (const char* s : rels) r.push_back(parse_element(s, 0, q));
  return WeilSuperAlgebra(q, r);
}

}  // namespace

TEST_CASE("canonical superideal") {
  CHECK(canonical_superideal(QuotientRing(1, 2)).to_string() == "(t1, t2)");
  CHECK(canonical_superideal(QuotientRing(3, 0)).empty());
  QuotientRing ns = quotient(1, 2, {"x1^2 + t1t2"});
  CHECK(canonical_superideal(ns).generators().size() == 2);
  CHECK(in_canonical_superideal(ns.element("x1^2"), ns));
  CHECK(in_canonical_superideal(ns.element("t1t2 + x1*t1"), ns));
  CHECK_FALSE(in_canonical_superideal(ns.element("x1"), ns));
  CHECK_FALSE(in_canonical_superideal(QuotientRing(1, 2).element("x1^2"), QuotientRing(1, 2)));
}

TEST_CASE("associated graded") {
  QuotientRing free(1, 2);
  CHECK(associated_graded(free).to_string() == free.to_string());
  QuotientRing ns = quotient(1, 2, {"x1^2 + t1t2"});
  QuotientRing gr = associated_graded(ns);
  CHECK(gr.to_string() == "C(1|2) / (x1^2)");
  // hand count: C(x)/(x^2) has local dimension 2, so piece n has dimension 2 * binom(2, n)
  std::vector<int> want{2, 4, 2};
  CHECK(graded_dimensions(ns, {0.0}, 6) == want);
  CHECK(graded_dimensions(gr, {0.0}, 6) == want);
  // away from the zero set the local ring is zero
  CHECK(graded_dimensions(ns, {1.0}, 4) == std::vector<int>{0, 0, 0});
  CHECK(graded_dimensions(QuotientRing(0, 3), {}, 0) == std::vector<int>{1, 3, 3, 1});
  QuotientRing odd = quotient(0, 1, {});
  CHECK(associated_graded(odd).to_string() == odd.to_string());
  QuotientRing mixed = quotient(1, 3, {"x1^3", "t1t2 - x1*t2t3"});
  CHECK(graded_dimensions(mixed, {0.0}, 6) == graded_dimensions(associated_graded(mixed), {0.0}, 6));
}

TEST_CASE("even part of the non-split example") {
  QuotientRing ns = quotient(1, 2, {"x1^2 + t1t2"});
  auto ev = even_part_presentation(ns);
  REQUIRE(ev.has_value());
  CHECK(ev->to_string() == "C(1|0) / (x1^4)");
  // oracle: x^3 survives and x^4 dies in the original quotient
  CHECK_FALSE(ns.reduces_to_zero(ns.element("x1^3")));
  CHECK(ns.reduces_to_zero(ns.element("x1^4")));
  CHECK(superreduction(ns).to_string() == "C(1|0) / (x1^2)");
  CHECK(even_part_presentation(QuotientRing(2, 1))->to_string() == "C(2|0)");
  CHECK_FALSE(even_part_presentation(quotient(1, 2, {"sin(x1)*t1t2"})).has_value());
}

TEST_CASE("Weil superalgebras") {
  WeilSuperAlgebra g2 = weil(2, {});
  CHECK(weil_apply(parse_expr("x1^3", 1), {g2.element("1 + t1t2")}, g2) == g2.element("1 + 3*t1t2"));
  CHECK(weil_apply(parse_expr("exp(x1)", 1), {g2.element("t1t2")}, g2) == g2.element("1 + t1t2"));
  WeilSuperAlgebra j2 = weil(3, {"t1t2", "t1t3", "t2t3"});
  CHECK(j2.element("t1t2").is_zero());
  CHECK(weil_apply(parse_expr("sin(x1)", 1), {j2.element("t1t2")}, j2).is_zero());
  CHECK(j2.dimension() == 4);
  CHECK(j2.nilpotency_index() == 2);
  CHECK(j2.element("t1*t2 + 2*t3").to_string() == "2*t3");
  CHECK_THROWS_AS(weil(1, {"1 + t1"}), ParityError);
  CHECK_THROWS_AS(weil(2, {"1 + t1t2"}), ArityError);
  WeilSuperAlgebra g4 = weil(4, {});
  CHECK(g4.nilpotency_index() == 5);
  SuperElement s = g4.element("t1t2 + t3t4");
  CHECK(weil_apply(parse_expr("x1*x2", 2), {s, s}, g4) == mul(s, s));
}

TEST_CASE("Weil quotients are local with nilpotent maximal ideal") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 30; ++t) {
    int q = 1 + t % 5;
    std::vector<SuperElement> rels;
    std::uniform_int_distribution<int> coef(-3, 3), coin(0, 2);
    for (int r = 0; r < 1 + t % 3; ++r) {
      bool odd = coin(rng) == 0;
      SuperElement g(0, q);
      for (MultiIndex I = 1; I < (1u << q); ++I) {
        if ((degree(I) % 2 == 1) != odd || coin(rng) != 0) continue;
        g.add_term(I, SmoothExpr::constant(Number(coef(rng))));
      }
      rels.push_back(g);
    }
    WeilSuperAlgebra W(q, rels);
    CHECK(W.nilpotency_index() <= q + 1);
    CHECK(W.dimension() == 1 + W.maximal_ideal_dimension());
    CHECK(W.basis().front() == 0);
    for (const auto& g : W.relations()) CHECK(W.reduce(g).is_zero());
    // reduction is a ring morphism on the quotient
    SuperElement a = random_even_element(0, q, 1, rng), b = random_even_element(0, q, 1, rng);
    a = a.map_coefficients([](const SmoothExpr& c) { return SmoothExpr::constant(Number::real(eval(c, {}))); });
    b = b.map_coefficients([](const SmoothExpr& c) { return SmoothExpr::constant(Number::real(eval(c, {}))); });
    CHECK(super_equal(W.reduce(mul(W.reduce(a), W.reduce(b))), W.reduce(mul(a, b)), 1).equal);
  }
}

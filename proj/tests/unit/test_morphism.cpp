#include <cmath>
#include <random>

#include "csr/cinfty.hpp"
#include "csr/errors.hpp"
#include "csr/morphism.hpp"
#include "doctest.h"

using namespace csr;

namespace {

QuotientRing quotient(int p, int q, std::vector<const char*> gens) {
  std::vector<SuperElement> g;
  for (const char* s : gens) g.push_back(parse_element(s, p, q));
  return QuotientRing(SuperIdeal(p, q, g));
}

std::vector<SuperElement> elems(const QuotientRing& R, std::vector<const char*> texts) {
  std::vector<SuperElement> out;
  for (const char* s : texts) out.push_back(R.element(s));
  return out;
}

Morphism make(const QuotientRing& A, const QuotientRing& B, std::vector<const char*> ev, std::vector<const char*> od) {
  return Morphism(A, B, elems(B, ev), elems(B, od));
}

SamplerConfig sampler(int p = 1, double lo = -2, double hi = 2) {
  SamplerConfig c;
  c.box = Box::cube(p, lo, hi);
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("application examples") {
  QuotientRing R(1, 2);
  Morphism id = Morphism::identity(R);
  CHECK(id.apply(R.element("sin(x1)*t1 + x1^2*t1t2")) == R.element("sin(x1)*t1 + x1^2*t1t2"));
  Morphism swap = make(R, R, {"x1"}, {"t2", "t1"});
  CHECK(swap.apply(R.element("t1t2")) == R.element("-t1t2"));
  Morphism shift = make(R, R, {"x1 + t1t2"}, {"t1", "t2"});
  CHECK(shift.apply(R.element("sin(x1)")) == R.element("sin(x1) + cos(x1)*t1t2"));
  CHECK(shift.well_formedness() == Provenance::Exact);
}

TEST_CASE("ill-formed morphisms are rejected eagerly") {
  QuotientRing circle = quotient(2, 0, {"x1^2 + x2^2 - 1"});
  QuotientRing plane(2, 0);
  CHECK_THROWS_AS(make(circle, plane, {"x1", "x2"}, {}), IllFormedMorphism);
  CHECK_NOTHROW(make(circle, plane, {"cos(x1)", "sin(x1)"}, {}));
  CHECK(make(circle, plane, {"cos(x1)", "sin(x1)"}, {}).well_formedness() == Provenance::Sampled);
  QuotientRing R(1, 2);
  CHECK_THROWS_AS(make(R, R, {"t1t2"}, {"x1", "t2"}), ParityError);
  CHECK_THROWS_AS(make(R, R, {"x1"}, {"t1"}), ArityError);
}

TEST_CASE("morphisms commute with smooth operations and compose functorially") {
  std::mt19937_64 rng(31);
  QuotientRing R(2, 3), S(1, 3);
  Morphism phi = make(S, R, {"x1*x2 + t1t2"}, {"t1 + x2*t3", "t2", "x1*t1t2t3 + t3"});
  Morphism psi = make(R, S, {"sin(x1) + t1t3", "x1^2"}, {"t1", "t2 + t3", "x1*t3"});
  for (int t = 0; t < 12; ++t) {
    SmoothExpr h = random_expr(2, 2, rng);
    SuperElement a = random_even_element(1, 3, 1, rng), b = random_even_element(1, 3, 1, rng);
    CHECK(super_equal(phi.apply(apply_smooth(h, {a, b})), apply_smooth(h, {phi.apply(a), phi.apply(b)}), 3).equal);
    SuperElement r = random_even_element(2, 3, 1, rng) + mul(random_even_element(2, 3, 1, rng), R.element("t2"));
    CHECK(super_equal(compose(psi, phi).apply(a), psi.apply(phi.apply(a)), 4).equal);
    CHECK(super_equal(compose(phi, psi).apply(r), phi.apply(psi.apply(r)), 4).equal);
    // naturality of superreduction
    CHECK(super_equal(superreduction_functor(phi).apply(SuperElement::scalar(a.body(), 1, 0)),
                      SuperElement::scalar(phi.apply(a).body(), 2, 0), 6)
              .equal);
  }
}

TEST_CASE("superreduction and trivial extension") {
  QuotientRing ns = quotient(1, 2, {"x1^2 + t1t2"});
  QuotientRing F = superreduction(ns);
  CHECK(F.to_string() == "C(1|0) / (x1^2)");
  CHECK(same_morphism(superreduction_functor(Morphism::identity(ns)), Morphism::identity(F)));
  // Hom(R, G(c)) = Hom(F(R), c)
  QuotientRing c(1, 0);
  Morphism phi = make(ns, c, {"0"}, {"0", "0"});
  Morphism m = adjunction_mu(phi);
  CHECK(m.domain().to_string() == F.to_string());
  CHECK(same_morphism(adjunction_mu_inverse(m, ns), phi));
  QuotientRing R(1, 2);
  Morphism phi2 = make(R, c, {"sin(x1)"}, {"0", "0"});
  CHECK(same_morphism(adjunction_mu_inverse(adjunction_mu(phi2), R), phi2));
  CHECK(adjunction_mu(phi2).apply(QuotientRing(1, 0).element("x1^2")).to_string() == "sin(x1)^2");
  // a morphism into an even ring kills J_R, so it factors through F(R)
  CHECK(phi2.apply(R.element("x1*t1t2 + t2")).is_zero());
  Morphism g = trivial_extension(make(c, c, {"x1^3"}, {}));
  CHECK(g.apply(c.element("x1")) == c.element("x1^3"));
  CHECK_THROWS_AS(trivial_extension(Morphism::identity(R)), ArityError);
}

TEST_CASE("coproduct of split superrings") {
  QuotientRing A(1, 1), B(1, 1);
  Coproduct c = coproduct(A, B);
  CHECK(c.ring.p() == 2);
  CHECK(c.ring.q() == 2);
  CHECK(c.beta.apply(B.element("x1*t1")) == c.ring.element("x2*t2"));
  CHECK(c.alpha.apply(A.element("sin(x1)*t1")) == c.ring.element("sin(x1)*t1"));
  QuotientRing W(1, 2);
  Morphism phi = make(A, W, {"x1"}, {"t1"}), psi = make(B, W, {"x1"}, {"t2"});
  auto rep = universal_property_check(c, phi, psi);
  CHECK(rep.ok());
  CHECK(rep.u->to_string() == "x1 -> x1, x2 -> x1, t1 -> t1, t2 -> t2");
  auto self = universal_property_check(c, c.alpha, c.beta);
  CHECK(self.ok());
  CHECK(same_morphism(*self.u, Morphism::identity(c.ring)));
  // adjoining an odd variable
  QuotientRing circle = quotient(2, 1, {"x1^2 + x2^2 - 1"});
  Coproduct odd = coproduct(circle, QuotientRing(0, 1));
  CHECK(odd.ring.to_string() == "C(2|2) / (-1 + x1^2 + x2^2)");
  CHECK(circle.to_string() == "C(2|1) / (-1 + x1^2 + x2^2)");
  // unit: the coproduct with R is the ring itself
  Coproduct unit = coproduct(circle, QuotientRing(0, 0));
  CHECK(unit.ring.to_string() == circle.to_string());
  CHECK_THROWS_AS(coproduct(quotient(1, 2, {"x1^2 + t1t2"}), A), IllFormedMorphism);
  // associativity up to relabeling: both sides are C(3|3)
  Coproduct left = coproduct(coproduct(A, B).ring, A), right = coproduct(A, coproduct(B, A).ring);
  CHECK(left.ring.to_string() == right.ring.to_string());
}

TEST_CASE("spectrum functor is contravariant on points") {
  QuotientRing L(1, 0);
  Morphism sq = make(L, L, {"x1^2"}, {});
  CHECK(point_map(sq, {1.5})[0] == doctest::Approx(2.25));
  Morphism sn = make(L, L, {"sin(x1)"}, {});
  for (double a : {-1.0, 0.3, 2.0}) {
    Point via = spec_functor(sn, spec_functor(sq, {{a}}))[0];
    CHECK(spec_functor(compose(sq, sn), {{a}})[0][0] == doctest::Approx(via[0]));
  }
  QuotientRing plane(2, 0), circle = quotient(2, 0, {"x1^2 + x2^2 - 1"});
  Morphism incl = make(plane, circle, {"x1", "x2"}, {});
  for (const auto& z : spec_functor(incl, find_rpoints(circle, sampler(2)).points)) {
    CHECK(z[0] * z[0] + z[1] * z[1] == doctest::Approx(1.0));
  }
}

TEST_CASE("localized morphisms make the square commute") {
  std::mt19937_64 rng(41);
  QuotientRing L(1, 0);
  Morphism sq = make(L, L, {"x1^2"}, {});
  JetMorphism jm = localize_morphism(sq, {1.0}, 4);
  CHECK(jm.y()[0] == 1.0);
  // chain rule oracle: the jet of sin(u) at 1 pulled back along u = x^2
  LocalElement pulled = jm(localize(L.element("sin(x1)"), {1.0}, 4));
  LocalElement direct = localize(L.element("sin(x1^2)"), {1.0}, 4);
  CHECK(distance(pulled, direct) < 1e-12);
  QuotientRing R(2, 3);
  Morphism phi = make(R, R, {"x1 + t1t2", "x1*x2 + t2t3"}, {"t1 + x1*t3", "t2", "t3 + t1t2t3"});
  std::vector<SuperElement> probes;
  for (int t = 0; t < 20; ++t) {
    probes.push_back(random_even_element(2, 3, 1, rng) + mul(random_even_element(2, 3, 1, rng), R.element("t1")));
  }
  CHECK(localize_morphism(phi, {0.3, -0.4}, 5).square_defect(probes) < 1e-9);
  CHECK(localize_morphism(Morphism::identity(R), {0.2, 0.1}, 3).square_defect(probes) < 1e-12);
  Morphism kill = make(R, QuotientRing(2, 0), {"x1", "x2"}, {"0", "0", "0"});
  JetMorphism jk = localize_morphism(kill, {0.5, 0.5}, 3);
  CHECK(jk(localize(R.element("sin(x1)*t1 + t1t2t3"), {0.5, 0.5}, 3)).is_zero(0.0));
}

TEST_CASE("adjunction round trip") {
  QuotientRing R(1, 1);
  auto ok = adjunction_roundtrip(Morphism::identity(R), elems(R, {"x1", "sin(x1)*t1", "t1"}), sampler());
  CHECK(ok.ok());
  QuotientRing S(1, 2);
  Morphism swap = make(S, S, {"x1"}, {"t2", "t1"});
  auto sw = adjunction_roundtrip(swap, elems(S, {"x1*t1", "t1t2", "exp(x1)*t2"}), sampler());
  CHECK(sw.ok());
  // a non-fair ring: the round trip closes only after fairfication
  QuotientRing nf = quotient(1, 2, {"bump(x1, 0, 1)*t1t2"});
  std::vector<SuperElement> probes = elems(nf, {"x1", "t1", "bump(x1, 0.2, 0.8)*t1t2"});
  auto before = adjunction_roundtrip(Morphism::identity(nf), probes, sampler());
  CHECK(before.sheaf_square);
  CHECK(before.point_map);
  CHECK_FALSE(before.elements_recovered);
  REQUIRE(before.lost.size() == 1);
  std::vector<SuperElement> gens = nf.ideal().generators();
  gens.push_back(before.lost[0]);
  QuotientRing fa(SuperIdeal(1, 2, gens));
  auto after = adjunction_roundtrip(Morphism::identity(fa), elems(fa, {"x1", "t1", "bump(x1, 0.2, 0.8)*t1t2"}),
                                    sampler());
  CHECK(after.ok());
}

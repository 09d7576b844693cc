#include <chrono>
#include <cmath>
#include <random>

#include "csr/cinfty.hpp"
#include "csr/errors.hpp"
#include "csr/spectrum.hpp"
#include "doctest.h"

using namespace csr;

namespace {

QuotientRing quotient(int p, int q, std::vector<const char*> gens) {
  std::vector<SuperElement> g;
  for (const char* s : gens) g.push_back(parse_element(s, p, q));
  return QuotientRing(SuperIdeal(p, q, g));
}

SamplerConfig sampler(int p = 1, double lo = -2, double hi = 2) {
  SamplerConfig c;
  c.box = Box::cube(p, lo, hi);
  c.seed = 7;
  return c;
}

// Taylor coefficient d^beta f(a) / beta! from symbolic derivatives.
double taylor_coefficient(const SmoothExpr& f, const std::vector<int>& beta, const Point& a) {
  SmoothExpr d = f;
  double fact = 1.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    for (int k = 0; k < beta[i]; ++k) {
      d = partial(d, static_cast<int>(i) + 1);
      fact *= k + 1;
    }
  }
  return eval(d, a) / fact;
}

void check_against_partials(const SmoothExpr& f, const Point& a, int order) {
  Jet j = jet_of(f, a, order).jet;
  for (std::size_t i = 0; i < j.space().size(); ++i) {
    double want = taylor_coefficient(f, j.space().monomial(i), a);
    CHECK(j.coefficients()[i] == doctest::Approx(want).epsilon(1e-8).scale(1.0));
  }
}

}  // namespace

TEST_CASE("jet of sin(x1)*t1 at 0 to order 3") {
  LocalElement L = localize(parse_element("sin(x1)*t1", 1, 1), {0.0}, 3);
  REQUIRE(L.terms().count(single(1)) == 1);
  const auto& c = L.terms().at(single(1)).coefficients();
  REQUIRE(c.size() == 4);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == doctest::Approx(1.0));
  CHECK(c[2] == doctest::Approx(0.0));
  CHECK(c[3] == doctest::Approx(-1.0 / 6.0));
  CHECK(L.to_string() == "(x1 - 0.166666666667*x1^3)*t1");
  CHECK_FALSE(L.exact());
  CHECK(localize(parse_element("x1^2*t1 + 1", 1, 1), {1.0}, 2).to_string() ==
        "1 + (1 + 2*(x1 - 1) + (x1 - 1)^2)*t1");
}

TEST_CASE("jets match symbolic Taylor coefficients") {
  for (const char* s : {"exp(x1)*sin(x2)", "log(1 + x1^2)*cos(x2)", "sqrt(2 + x1)/(3 + x2)", "tan(x1*x2)",
                        "flat(x1 - 0.3)", "bump(x2, -1, 1)*x1^3", "(x1 + x2)^-2"}) {
    CAPTURE(s);
    SmoothExpr f = parse_expr(s, 2);
    check_against_partials(f, {0.7, 0.4}, 5);
    check_against_partials(f, {-0.2, 0.5}, 4);
  }
  std::mt19937_64 rng(11);
  for (int t = 0; t < 25; ++t) {
    SmoothExpr f = random_expr(2, 3, rng);
    CAPTURE(f.to_string());
    check_against_partials(f, {0.3, -0.6}, 4);
  }
}

TEST_CASE("flat and bump jets") {
  for (int k = 0; k <= 8; ++k) {
    JetResult j = jet_of(parse_expr("flat(x1)", 1), {0.0}, k);
    CHECK(j.jet.is_zero(0.0));
    CHECK_FALSE(j.germ_zero);
  }
  // derivatives of flat up to order 6 vanish at 0
  SmoothExpr d = parse_expr("flat(x1)", 1);
  for (int k = 0; k <= 6; ++k) {
    CHECK(std::fabs(eval(d, {0.0})) < 1e-12);
    d = partial(d, 1);
  }
  LocalElement b = localize(parse_element("bump(x1, 1, 2)", 1, 0), {0.0}, 6);
  CHECK(b.is_zero(0.0));
  CHECK(b.germ_zero());
  // poles absorbed by a flat factor, as in pointwise evaluation
  CHECK(jet_of(parse_expr("flat(x1)/x1^3", 1), {0.0}, 4).jet.is_zero(0.0));
  CHECK_THROWS_AS(jet_of(parse_expr("1/x1", 1), {0.0}, 2), DomainError);
  CHECK_THROWS_AS(jet_of(parse_expr("log(x1)", 1), {-1.0}, 2), DomainError);
}

TEST_CASE("localization is a parity-preserving ring morphism") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    int q = 1 + t % 4;
    SuperElement a = random_even_element(2, q, 2, rng);
    SuperElement b = random_even_element(2, q, 2, rng);
    if (t % 2) b = mul(b, SuperElement::theta(1, 2, q));
    Point x{0.25 * (t % 5) - 0.5, 0.1 * t - 1.0};
    LocalElement lab = localize(mul(a, b), x, 4);
    LocalElement prod = localize(a, x, 4) * localize(b, x, 4);
    double scale = 1.0;
    for (double v : lab.to_vector()) scale = std::max(scale, std::fabs(v));
    CHECK(distance(lab, prod) <= 1e-9 * scale);
    CHECK(distance(localize(a + b, x, 4), localize(a, x, 4) + localize(b, x, 4)) <= 1e-9 * scale);
    LocalElement lb = localize(b, x, 4);
    for (const auto& [I, j] : lb.terms()) {
      if (!j.is_zero(0.0)) CHECK((degree(I) % 2 == 1) == (t % 2 == 1));
    }
  }
  SuperElement p = parse_element("x1^2 + x1*t1t2", 1, 2), s = parse_element("3 - x1*t1t2", 1, 2);
  LocalElement lp = localize(mul(p, s), {1.0}, 3);
  CHECK(lp.exact());
  CHECK(distance(lp, localize(p, {1.0}, 3) * localize(s, {1.0}, 3)) == 0.0);
}

TEST_CASE("R-points") {
  QuotientRing circle = quotient(2, 1, {"x1^2 + x2^2 - 1"});
  SamplerConfig cfg = sampler(2);
  cfg.grid = 100;
  auto start = std::chrono::steady_clock::now();
  ZeroSet pts = find_rpoints(circle, cfg);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(30));
  CHECK(pts.points.size() > 20);
  for (const auto& z : pts.points) CHECK(std::fabs(z[0] * z[0] + z[1] * z[1] - 1) < 1e-9);
  ZeroSet free = find_rpoints(QuotientRing(1, 2), sampler());
  CHECK(free.whole_space);
  CHECK(free.points.size() == 9);
  ZeroSet none = find_rpoints(quotient(1, 0, {"1"}), sampler());
  CHECK(none.points.empty());
  CHECK(none.empty_exact);
  // points of R_0 and of the reduced ring coincide
  QuotientRing R = quotient(1, 2, {"x1*t1", "x1^2 - 1 + t1t2"});
  std::vector<SmoothExpr> even_bodies;
  for (const auto& g : R.ideal().generators()) {
    if (g.is_even()) even_bodies.push_back(g.body());
    for (int i = 1; i <= R.q(); ++i) {
      if (!g.is_even()) even_bodies.push_back(mul(SuperElement::theta(i, 1, 2), g).body());
    }
  }
  ZeroSet z0 = find_zeros(even_bodies, 1, sampler());
  ZeroSet zr = find_rpoints(R, sampler());
  REQUIRE(z0.points.size() == zr.points.size());
  for (std::size_t i = 0; i < z0.points.size(); ++i) CHECK(z0.points[i][0] == doctest::Approx(zr.points[i][0]));
}

TEST_CASE("psi kernel test") {
  QuotientRing lin = quotient(1, 1, {"x1"});
  auto v = psi_kernel_test(lin.element("x1*t1"), lin, sampler());
  CHECK(v.kind == ZeroKind::Zero);
  CHECK(v.provenance == Provenance::Exact);
  CHECK(psi_kernel_test(lin.element("0"), lin, sampler()).provenance == Provenance::Exact);
  QuotientRing nf = quotient(1, 2, {"bump(x1, 0, 1)*t1t2"});
  auto w = psi_kernel_test(nf.element("bump(x1, -1, 0.5)*t1t2"), nf, sampler());
  CHECK(w.kind == ZeroKind::NonZero);
  REQUIRE(w.witness.has_value());
  CHECK((*w.witness)[0] > -1.0);
  CHECK((*w.witness)[0] <= 0.0);
  REQUIRE(w.local.has_value());
  CHECK_FALSE(w.local->is_zero(0.0));
  // the unit bump(0,1) generates everything locally inside (0, 1)
  auto inside = psi_kernel_test(nf.element("bump(x1, 0.2, 0.8)*t1t2"), nf, sampler());
  CHECK(inside.kind == ZeroKind::Zero);
  CHECK(inside.provenance == Provenance::Sampled);
  // a local unit makes every multiple of the generator locally zero
  QuotientRing unit = quotient(1, 1, {"exp(x1)*t1"});
  SuperElement probe = unit.element("sin(x1)*t1");
  CHECK_FALSE(unit.reduces_to_zero(probe));
  CHECK(locally_zero(probe, unit, {0.4}, 5));
  QuotientRing sq = quotient(1, 0, {"x1^2"});
  CHECK_FALSE(locally_zero(sq.element("x1"), sq, {0.0}, 3));
  CHECK(locally_zero(sq.element("x1^2*sin(x1)"), sq, {0.0}, 6));
  CHECK(psi_kernel_test(sq.element("x1"), sq, sampler()).kind == ZeroKind::NonZero);
}

TEST_CASE("fairfication") {
  std::vector<const char*> probes = {"1", "x1", "x1*t1", "sin(x1)*t1t2", "bump(x1, 0.2, 0.8)*t1t2"};
  auto to_elems = [&](const QuotientRing& Q) {
    std::vector<SuperElement> out;
    for (const char* s : probes) out.push_back(Q.element(s));
    return out;
  };
  QuotientRing free(1, 2);
  FairficationReport fr = fairfication(free, to_elems(free), sampler());
  CHECK(fr.fair());
  QuotientRing nf = quotient(1, 2, {"bump(x1, 0, 1)*t1t2"});
  FairficationReport rep = fairfication(nf, to_elems(nf), sampler());
  CHECK_FALSE(rep.fair());
  REQUIRE(rep.killed().size() == 1);
  CHECK(rep.killed()[0] == nf.element("bump(x1, 0.2, 0.8)*t1t2"));
  CHECK_FALSE(rep.entries[0].killed);
  CHECK(rep.entries[4].verdict.provenance == Provenance::Sampled);
  // the killed probe is zero in the fairfied quotient, the rest keep their verdicts
  std::vector<SuperElement> gens = nf.ideal().generators();
  for (const auto& k : rep.killed()) gens.push_back(k);
  QuotientRing fa(SuperIdeal(1, 2, gens));
  FairficationReport again = fairfication(fa, to_elems(fa), sampler());
  CHECK(again.fair());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    bool zero_in_fa = again.entries[i].verdict.kind == ZeroKind::Zero;
    CHECK(zero_in_fa == (rep.entries[i].verdict.kind == ZeroKind::Zero));
  }
}

TEST_CASE("Zariski predicates and separation") {
  QuotientRing circle = quotient(2, 0, {"x1^2 + x2^2 - 1"});
  auto pts = find_rpoints(circle, sampler(2)).points;
  REQUIRE(pts.size() > 8);
  SuperElement x1 = circle.element("x1");
  for (const auto& z : pts) CHECK(in_D(x1, z) == (std::fabs(z[0]) > 1e-12));
  SuperElement a = circle.element("x1 - x2"), b = circle.element("x1 + x2");
  auto zab = Z_of({mul(a, b)}, pts), za = Z_of({a}, pts), zb = Z_of({b}, pts);
  CHECK(zab.size() == za.size() + zb.size());
  CHECK(Z_of({circle.element("1")}, pts).empty());
  // distinct points lie in disjoint basic opens cut out by a coordinate;
  // pairs closer than 0.1 would push the bump values below double range
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Point &p = pts[i], &q = pts[(i + pts.size() / 2) % pts.size()];
    if (std::max(std::fabs(p[0] - q[0]), std::fabs(p[1] - q[1])) < 0.1) continue;
    int c = std::fabs(p[0] - q[0]) > std::fabs(p[1] - q[1]) ? 1 : 2;
    double u = p[static_cast<std::size_t>(c - 1)], w = q[static_cast<std::size_t>(c - 1)];
    double mid = 0.5 * (u + w);
    std::string var = "x" + std::to_string(c);
    SuperElement lo = circle.element("bump(" + var + ", " + std::to_string(mid - 10) + ", " + std::to_string(mid) + ")");
    SuperElement hi = circle.element("bump(" + var + ", " + std::to_string(mid) + ", " + std::to_string(mid + 10) + ")");
    SuperElement& near_p = u < w ? lo : hi;
    SuperElement& near_q = u < w ? hi : lo;
    CHECK(in_D(near_p, p));
    CHECK(in_D(near_q, q));
    for (const auto& z : pts) CHECK_FALSE((in_D(lo, z) && in_D(hi, z)));
  }
}

TEST_CASE("gluing local representatives over two principal opens") {
  QuotientRing circle = quotient(2, 1, {"x1^2 + x2^2 - 1"});
  auto pts = find_rpoints(circle, sampler(2)).points;
  SuperElement r = circle.element("sin(x1)*t1 + x2");
  SuperElement r1 = r + mul(circle.element("x1^2 + x2^2 - 1"), circle.element("exp(x2)*t1"));
  SuperElement r2 = r + circle.element("(x1^2 + x2^2 - 1)*x1");
  SuperElement c1 = circle.element("x1 + 0.5"), c2 = circle.element("x1 - 0.5");
  std::size_t overlap = 0;
  for (const auto& x : pts) {
    bool u1 = in_D(c1, x), u2 = in_D(c2, x);
    if (u1 && u2) {
      ++overlap;
      CHECK(locally_zero(r1 - r2, circle, x, 4));
    }
    if (u1) CHECK(locally_zero(r1 - r, circle, x, 4));
    if (u2) CHECK(locally_zero(r2 - r, circle, x, 4));
  }
  CHECK(overlap > 0);
  GlobalSection s = global_section(r1, circle, pts, 3);
  CHECK(s.representative == circle.normal_form(r1));
  CHECK(s.stalks.size() == pts.size());
}

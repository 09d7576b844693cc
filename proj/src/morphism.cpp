#include "csr/morphism.hpp"

#include <algorithm>
#include <cmath>

#include "csr/cinfty.hpp"
#include "csr/errors.hpp"

namespace csr {

namespace {

void check_image(const SuperElement& e, const QuotientRing& cod, bool odd, const std::string& name) {
  if (e.p() != cod.p() || e.q() != cod.q()) {
    throw ArityError("image of " + name + " has arity (" + std::to_string(e.p()) + "|" + std::to_string(e.q()) +
                     "), codomain is (" + std::to_string(cod.p()) + "|" + std::to_string(cod.q()) + ")");
  }
  if (e.is_zero()) return;
  if (e.parity() != (odd ? Parity::Odd : Parity::Even)) {
    throw ParityError("image of " + name + " must be " + (odd ? "odd" : "even") + ": " + e.to_string());
  }
}

bool vanishes_in(const SuperElement& e, const QuotientRing& Q, std::uint64_t seed, Provenance& prov) {
  SuperElement n = Q.normal_form(e);
  if (n.is_zero()) return true;
  EqualityVerdict v = super_equal(n, SuperElement(n.p(), n.q()), seed);
  if (!v.equal) return false;
  if (v.provenance == Provenance::Sampled) prov = Provenance::Sampled;
  return true;
}

}  // namespace

Morphism::Morphism(QuotientRing domain, QuotientRing codomain, std::vector<SuperElement> even_images,
                   std::vector<SuperElement> odd_images, std::uint64_t seed)
    : domain_(std::move(domain)), codomain_(std::move(codomain)) {
  if (static_cast<int>(even_images.size()) != domain_.p() || static_cast<int>(odd_images.size()) != domain_.q()) {
    throw ArityError("a morphism out of C(" + std::to_string(domain_.p()) + "|" + std::to_string(domain_.q()) +
                     ") needs " + std::to_string(domain_.p()) + " even and " + std::to_string(domain_.q()) +
                     " odd images");
  }
  for (std::size_t i = 0; i < even_images.size(); ++i) {
    check_image(even_images[i], codomain_, false, "x" + std::to_string(i + 1));
    even_.push_back(codomain_.normal_form(even_images[i]));
  }
  for (std::size_t j = 0; j < odd_images.size(); ++j) {
    check_image(odd_images[j], codomain_, true, "t" + std::to_string(j + 1));
    odd_.push_back(codomain_.normal_form(odd_images[j]));
  }
  for (const auto& g : domain_.ideal().generators()) {
    SuperElement img = apply_unreduced(g);
    if (!vanishes_in(img, codomain_, seed, provenance_)) {
      throw IllFormedMorphism("generator " + g.to_string() + " maps to " + codomain_.normal_form(img).to_string() +
                              ", which is not zero in " + codomain_.to_string());
    }
  }
}

Morphism Morphism::identity(const QuotientRing& ring) {
  std::vector<SuperElement> ev, od;
  for (int i = 1; i <= ring.p(); ++i) ev.push_back(SuperElement::coordinate(i, ring.p(), ring.q()));
  for (int j = 1; j <= ring.q(); ++j) od.push_back(SuperElement::theta(j, ring.p(), ring.q()));
  return Morphism(ring, ring, ev, od);
}

SuperElement Morphism::apply_unreduced(const SuperElement& r) const {
  if (r.p() != domain_.p() || r.q() != domain_.q()) {
    throw ArityError("element of arity (" + std::to_string(r.p()) + "|" + std::to_string(r.q()) +
                     ") applied to a morphism out of (" + std::to_string(domain_.p()) + "|" +
                     std::to_string(domain_.q()) + ")");
  }
  const int p = codomain_.p(), q = codomain_.q();
  SuperElement out(p, q);
  for (const auto& [I, c] : r.terms()) {
    SuperElement coeff = c.is_constant() ? SuperElement::constant(c->value, p, q)
                                         : apply_smooth(c.with_arity(domain_.p()), even_);
    SuperElement term = coeff;
    for (int j : indices(I)) term = mul(term, odd_[static_cast<std::size_t>(j - 1)]);
    out += term;
  }
  return out;
}

SuperElement Morphism::apply(const SuperElement& r) const { return codomain_.normal_form(apply_unreduced(r)); }

std::string Morphism::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < even_.size(); ++i) {
    if (!s.empty()) s += ", ";
    s += "x" + std::to_string(i + 1) + " -> " + even_[i].to_string();
  }
  for (std::size_t j = 0; j < odd_.size(); ++j) {
    if (!s.empty()) s += ", ";
    s += "t" + std::to_string(j + 1) + " -> " + odd_[j].to_string();
  }
  return s;
}

Morphism compose(const Morphism& phi, const Morphism& psi) {
  if (psi.codomain().p() != phi.domain().p() || psi.codomain().q() != phi.domain().q()) {
    throw ArityError("cannot compose: codomain and domain arities differ");
  }
  std::vector<SuperElement> ev, od;
  for (const auto& e : psi.even_images()) ev.push_back(phi.apply(e));
  for (const auto& o : psi.odd_images()) od.push_back(phi.apply(o));
  return Morphism(psi.domain(), phi.codomain(), ev, od);
}

bool same_morphism(const Morphism& a, const Morphism& b, std::uint64_t seed) {
  if (a.domain().p() != b.domain().p() || a.domain().q() != b.domain().q() ||
      a.codomain().p() != b.codomain().p() || a.codomain().q() != b.codomain().q()) {
    return false;
  }
  Provenance prov = Provenance::Exact;
  for (std::size_t i = 0; i < a.even_images().size(); ++i) {
    if (!vanishes_in(a.even_images()[i] - b.even_images()[i], a.codomain(), seed, prov)) return false;
  }
  for (std::size_t j = 0; j < a.odd_images().size(); ++j) {
    if (!vanishes_in(a.odd_images()[j] - b.odd_images()[j], a.codomain(), seed, prov)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- functors

QuotientRing superreduction(const QuotientRing& ring) {
  std::vector<SuperElement> gens;
  for (const auto& g : ring.ideal().reduced_generators()) gens.push_back(SuperElement::scalar(g, ring.p(), 0));
  return QuotientRing(SuperIdeal(ring.p(), 0, gens));
}

Morphism superreduction_functor(const Morphism& phi) {
  QuotientRing fd = superreduction(phi.domain()), fc = superreduction(phi.codomain());
  std::vector<SuperElement> ev;
  for (const auto& e : phi.even_images()) ev.push_back(SuperElement::scalar(e.body(), fc.p(), 0));
  return Morphism(fd, fc, ev, {});
}

Morphism trivial_extension(const Morphism& psi) {
  if (psi.domain().q() != 0 || psi.codomain().q() != 0) {
    throw ArityError("the trivial extension takes a morphism of C-infinity rings (q = 0)");
  }
  return psi;
}

Morphism adjunction_mu(const Morphism& phi) {
  if (phi.codomain().q() != 0) throw ArityError("mu takes a morphism into a purely even ring");
  QuotientRing fd = superreduction(phi.domain());
  return Morphism(fd, phi.codomain(), phi.even_images(), {});
}

Morphism adjunction_mu_inverse(const Morphism& psi, const QuotientRing& R) {
  const QuotientRing& c = psi.codomain();
  std::vector<SuperElement> od(static_cast<std::size_t>(R.q()), SuperElement(c.p(), c.q()));
  return Morphism(R, c, psi.even_images(), od);
}

// ---------------------------------------------------------------- coproduct

namespace {

SuperElement embed(const SuperElement& e, int offset_x, int offset_t, int p, int q) {
  std::vector<SmoothExpr> vars;
  for (int i = 1; i <= e.p(); ++i) vars.push_back(SmoothExpr::var(offset_x + i, p));
  SuperElement out(p, q);
  for (const auto& [I, c] : e.terms()) {
    SmoothExpr moved = e.p() == 0 || offset_x == 0 ? c.with_arity(p) : simplify(substitute(c, vars, p));
    out.add_term(I << offset_t, moved);
  }
  return out;
}

void require_split(const QuotientRing& R) {
  for (const auto& g : R.ideal().generators()) {
    if (!g.soul().is_zero()) {
      throw IllFormedMorphism("coproduct needs a split presentation; generator " + g.to_string() + " has a soul");
    }
  }
}

}  // namespace

Coproduct coproduct(const QuotientRing& R, const QuotientRing& S) {
  require_split(R);
  require_split(S);
  const int a = R.p(), b = S.p(), q = R.q(), n = S.q();
  const int p = a + b, qq = q + n;
  std::vector<SuperElement> gens;
  for (const auto& g : R.ideal().generators()) gens.push_back(embed(g, 0, 0, p, qq));
  for (const auto& g : S.ideal().generators()) gens.push_back(embed(g, a, q, p, qq));
  QuotientRing T{SuperIdeal(p, qq, gens)};
  std::vector<SuperElement> ae, ao, be, bo;
  for (int i = 1; i <= a; ++i) ae.push_back(SuperElement::coordinate(i, p, qq));
  for (int j = 1; j <= q; ++j) ao.push_back(SuperElement::theta(j, p, qq));
  for (int i = 1; i <= b; ++i) be.push_back(SuperElement::coordinate(a + i, p, qq));
  for (int j = 1; j <= n; ++j) bo.push_back(SuperElement::theta(q + j, p, qq));
  Morphism alpha(R, T, ae, ao), beta(S, T, be, bo);
  return {T, alpha, beta};
}

UniversalPropertyReport universal_property_check(const Coproduct& c, const Morphism& phi, const Morphism& psi) {
  UniversalPropertyReport rep;
  const QuotientRing& W = phi.codomain();
  if (W.p() != psi.codomain().p() || W.q() != psi.codomain().q() || W.to_string() != psi.codomain().to_string()) {
    rep.detail = "phi and psi have different codomains";
    return rep;
  }
  std::vector<SuperElement> ev = phi.even_images(), od = phi.odd_images();
  ev.insert(ev.end(), psi.even_images().begin(), psi.even_images().end());
  od.insert(od.end(), psi.odd_images().begin(), psi.odd_images().end());
  try {
    rep.u = Morphism(c.ring, W, ev, od);
  } catch (const Error& e) {
    rep.detail = e.what();
    return rep;
  }
  rep.exists = true;
  rep.commutes_alpha = same_morphism(compose(*rep.u, c.alpha), phi);
  rep.commutes_beta = same_morphism(compose(*rep.u, c.beta), psi);
  // u is forced on every generator of T that is an image of alpha or beta
  std::vector<SuperElement> hit = c.alpha.even_images();
  hit.insert(hit.end(), c.beta.even_images().begin(), c.beta.even_images().end());
  std::vector<SuperElement> hit_odd = c.alpha.odd_images();
  hit_odd.insert(hit_odd.end(), c.beta.odd_images().begin(), c.beta.odd_images().end());
  bool forced = static_cast<int>(hit.size()) == c.ring.p() && static_cast<int>(hit_odd.size()) == c.ring.q();
  for (int i = 1; forced && i <= c.ring.p(); ++i) {
    forced = hit[static_cast<std::size_t>(i - 1)] == SuperElement::coordinate(i, c.ring.p(), c.ring.q());
  }
  for (int j = 1; forced && j <= c.ring.q(); ++j) {
    forced = hit_odd[static_cast<std::size_t>(j - 1)] == SuperElement::theta(j, c.ring.p(), c.ring.q());
  }
  rep.unique = forced;
  rep.detail = rep.ok() ? "u = [" + rep.u->to_string() + "]" : "diagram does not commute";
  return rep;
}

// ---------------------------------------------------------------- spectrum functor

Point point_map(const Morphism& phi, const Point& x) {
  Point y;
  for (const auto& e : phi.even_images()) y.push_back(eval(e.body(), x));
  return y;
}

std::vector<Point> spec_functor(const Morphism& phi, const std::vector<Point>& codomain_points) {
  std::vector<Point> out;
  for (const auto& x : codomain_points) out.push_back(point_map(phi, x));
  return out;
}

namespace {

LocalElement scaled(const LocalElement& a, double s) {
  LocalElement r(a.base(), a.order(), a.q());
  r.set_exact(a.exact());
  r.set_germ_zero(a.germ_zero());
  for (const auto& [I, j] : a.terms()) r.add(I, j.scaled(s));
  return r;
}

LocalElement local_one(const Point& x, int order, int q) {
  LocalElement one(x, order, q);
  one.add(0, Jet::constant(one.space(), 1.0));
  one.set_germ_zero(false);
  return one;
}

}  // namespace

JetMorphism::JetMorphism(const Morphism& phi, Point x, int order)
    : phi_(phi), x_(std::move(x)), order_(order), source_order_(order + phi.codomain().q() / 2) {
  y_ = point_map(phi_, x_);
  for (std::size_t i = 0; i < phi_.even_images().size(); ++i) {
    LocalElement u = localize(phi_.even_images()[i], x_, order_);
    LocalElement shift(x_, order_, phi_.codomain().q());
    shift.add(0, Jet::constant(shift.space(), -y_[i]));
    shifted_even_.push_back(u + shift);
  }
  for (const auto& o : phi_.odd_images()) odd_.push_back(localize(o, x_, order_));
}

LocalElement JetMorphism::operator()(const LocalElement& ly) const {
  const int q = phi_.codomain().q();
  LocalElement out(x_, order_, q);
  out.set_germ_zero(false);
  const JetSpace& src = *ly.space();
  const std::size_t p = shifted_even_.size();
  std::vector<std::vector<LocalElement>> powers(p);
  for (std::size_t i = 0; i < p; ++i) {
    powers[i].push_back(local_one(x_, order_, q));
    for (int e = 1; e <= src.order(); ++e) powers[i].push_back(powers[i].back() * shifted_even_[i]);
  }
  for (const auto& [I, jet] : ly.terms()) {
    LocalElement acc(x_, order_, q);
    for (std::size_t b = 0; b < src.size(); ++b) {
      double c = jet.coefficients()[b];
      if (c == 0.0) continue;
      LocalElement term = local_one(x_, order_, q);
      for (std::size_t i = 0; i < p; ++i) {
        int e = src.monomial(b)[i];
        if (e > 0) term = term * powers[i][static_cast<std::size_t>(e)];
      }
      acc = acc + scaled(term, c);
    }
    for (int j : indices(I)) acc = acc * odd_[static_cast<std::size_t>(j - 1)];
    out = out + acc;
  }
  return out;
}

double JetMorphism::square_defect(const std::vector<SuperElement>& probes) const {
  double worst = 0.0;
  for (const auto& r : probes) {
    LocalElement direct = localize(phi_.apply_unreduced(r), x_, order_);
    LocalElement via = (*this)(localize(r, y_, source_order_));
    double scale = 1.0;
    for (double v : direct.to_vector()) scale = std::max(scale, std::fabs(v));
    worst = std::max(worst, distance(direct, via) / scale);
  }
  return worst;
}

JetMorphism localize_morphism(const Morphism& phi, const Point& x, int order) { return JetMorphism(phi, x, order); }

AdjunctionReport adjunction_roundtrip(const Morphism& phi, const std::vector<SuperElement>& probes,
                                      const SamplerConfig& cfg, int order) {
  AdjunctionReport rep;
  ZeroSet zs = find_rpoints(phi.codomain(), cfg);
  rep.points = zs.points.size();
  rep.probes = probes.size();
  bool square = true, points = true;
  double worst = 0.0;
  for (const auto& x : zs.points) {
    JetMorphism jm(phi, x, order);
    try {
      double d = jm.square_defect(probes);
      worst = std::max(worst, d);
      if (d > 1e-8) square = false;
    } catch (const DomainError&) {
      continue;
    }
    // the residue field map of L(R(f, f#)) at x recovers f(x)
    for (int i = 1; i <= phi.domain().p(); ++i) {
      SuperElement xi = SuperElement::coordinate(i, phi.domain().p(), phi.domain().q());
      LocalElement img = jm(localize(xi, jm.y(), jm.source_order()));
      double residue = img.terms().count(0) ? img.terms().at(0).value() : 0.0;
      if (std::fabs(residue - jm.y()[static_cast<std::size_t>(i - 1)]) > 1e-9) points = false;
    }
  }
  rep.sheaf_square = square && rep.points > 0;
  rep.point_map = points && rep.points > 0;
  std::vector<SuperElement> images;
  for (const auto& r : probes) images.push_back(phi.apply(r));
  FairficationReport fr = fairfication(phi.codomain(), images, cfg, order);
  rep.lost = fr.killed();
  rep.elements_recovered = rep.lost.empty();
  rep.detail = "max square defect " + std::to_string(worst) + " over " + std::to_string(rep.points) + " points";
  if (!rep.lost.empty()) rep.detail += "; " + std::to_string(rep.lost.size()) + " image(s) vanish only after fairfication";
  return rep;
}

}  // namespace csr

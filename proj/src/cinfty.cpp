#include "csr/cinfty.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "csr/errors.hpp"
#include "csr/syntax.hpp"

namespace csr {

SuperElement apply_smooth(const SmoothExpr& h, const std::vector<SuperElement>& args, TaylorOrder order) {
  if (args.empty()) throw ArityError("apply_smooth needs at least one argument");
  const int p = args.front().p();
  const int q = args.front().q();
  const int k = static_cast<int>(args.size());
  for (const auto& a : args) {
    check_same_arity(args.front(), a);
    if (!a.is_even()) throw ParityError("smooth functions apply to even elements only; got " + a.to_string());
  }
  if (h->max_var > k) {
    throw ArityError("function uses x" + std::to_string(h->max_var) + " but only " + std::to_string(k) +
                     " arguments were given");
  }
  const SmoothExpr hk = h.with_arity(k);
  const int budget = order == TaylorOrder::Full ? q / 2 : 1;

  std::vector<SmoothExpr> bodies;
  std::vector<std::vector<SuperElement>> soul_powers(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const SuperElement& a = args[static_cast<std::size_t>(i)];
    bodies.push_back(a.body().with_arity(p));
    auto& pw = soul_powers[static_cast<std::size_t>(i)];
    pw.push_back(SuperElement::constant(Number(1), p, q));
    SuperElement n = a.soul();
    for (int e = 1; e <= budget && !n.is_zero(); ++e) {
      SuperElement next = mul(pw.back(), n);
      if (next.is_zero()) break;
      pw.push_back(next);
    }
  }

  SuperElement result(p, q);
  std::function<void(int, int, const SmoothExpr&, Number, const SuperElement&)> walk =
      [&](int i, int left, const SmoothExpr& deriv, Number weight, const SuperElement& prod) {
        if (i == k) {
          SmoothExpr value = substitute(deriv, bodies, p);
          result += prod.scaled(SmoothExpr::constant(weight, p) * value);
          return;
        }
        const auto& pw = soul_powers[static_cast<std::size_t>(i)];
        SmoothExpr d = deriv;
        for (int e = 0; e <= left && e < static_cast<int>(pw.size()); ++e) {
          if (e > 0) {
            d = partial(d, i + 1);
            weight = weight / Number(e);
          }
          if (d.is_zero_literal()) break;
          SuperElement next = e == 0 ? prod : mul(prod, pw[static_cast<std::size_t>(e)]);
          if (next.is_zero()) break;
          walk(i + 1, left - e, d, weight, next);
        }
      };
  walk(0, budget, simplify(hk), Number(1), SuperElement::constant(Number(1), p, q));
  return result;
}

EqualityVerdict super_equal(const SuperElement& a, const SuperElement& b, std::uint64_t seed, int samples,
                            double rel) {
  EqualityVerdict v;
  check_same_arity(a, b);
  SuperElement d = a - b;
  if (d.is_zero()) {
    v.equal = true;
    v.provenance = Provenance::Exact;
    return v;
  }
  v.provenance = Provenance::Sampled;
  std::mt19937_64 rng(seed);
  Box box = Box::cube(a.p(), -1.0, 1.0);
  int n = a.p() == 0 ? 1 : samples;
  int valid = 0;
  for (int s = 0; s < n; ++s) {
    Point x = box.sample(rng);
    bool ok = true;
    std::optional<std::string> mismatch;
    for (const auto& [I, c] : d.terms()) {
      double va, vb;
      try {
        va = eval(a.coeff(I), x);
        vb = eval(b.coeff(I), x);
      } catch (const DomainError&) {
        ok = false;
        break;
      }
      if (!nearly_equal(va, vb, rel, 1e-10)) {
        mismatch = "coefficient of " + (I == 0 ? std::string("1") : monomial_string(I)) + ": " +
                   std::to_string(va) + " vs " + std::to_string(vb);
        break;
      }
    }
    if (!ok) continue;
    ++valid;
    if (mismatch) {
      v.equal = false;
      v.witness = x;
      v.detail = *mismatch;
      return v;
    }
  }
  v.equal = valid > 0;
  if (!v.equal) v.detail = "no sample point inside the domain";
  return v;
}

SuperElement random_even_element(int p, int q, int depth, std::mt19937_64& rng) {
  SuperElement out(p, q);
  std::uniform_int_distribution<int> coin(0, 2);
  for (MultiIndex I = 0; I < (MultiIndex{1} << q); ++I) {
    if (degree(I) % 2 != 0) continue;
    if (I != 0 && coin(rng) == 0) continue;
    out.add_term(I, random_expr(p, depth, rng));
  }
  return out;
}

namespace {

std::vector<SuperElement> random_arguments(const SplitSuperRing& ring, int count, std::mt19937_64& rng) {
  std::vector<SuperElement> out;
  for (int i = 0; i < count; ++i) out.push_back(random_even_element(ring.p, ring.q, 1, rng));
  return out;
}

template <class Trial>
AxiomReport run_trials(const std::string& name, int trials, Trial&& trial) {
  struct Outcome {
    bool pass = false;
    Provenance provenance = Provenance::Exact;
    AxiomFailure failure;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(std::max(trials, 0)));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t; (t = next.fetch_add(1)) < trials;) {
      Outcome& o = outcomes[static_cast<std::size_t>(t)];
      try {
        o.pass = trial(t, o.provenance, o.failure);
      } catch (const std::exception& e) {
        o.pass = false;
        o.failure.description = std::string("error: ") + e.what();
      }
      o.failure.trial = t;
    }
  };
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  unsigned nthreads = std::min<unsigned>(hw, static_cast<unsigned>(std::max(trials, 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  AxiomReport r;
  r.axiom = name;
  r.trials = trials;
  for (const auto& o : outcomes) {
    if (o.pass) {
      ++r.passed;
      (o.provenance == Provenance::Exact ? r.exact : r.sampled) += 1;
    } else {
      r.failures.push_back(o.failure);
    }
  }
  return r;
}

bool record(const SuperElement& lhs, const SuperElement& rhs, std::uint64_t seed, const std::string& what,
            Provenance& prov, AxiomFailure& failure) {
  EqualityVerdict v = super_equal(lhs, rhs, seed);
  prov = v.provenance;
  if (v.equal) return true;
  failure.description = what + (v.detail.empty() ? "" : " (" + v.detail + ")");
  failure.lhs = lhs.to_string();
  failure.rhs = rhs.to_string();
  failure.witness = v.witness;
  return false;
}

}  // namespace

AxiomReport check_projection_axiom(const SplitSuperRing& ring, int trials, std::uint64_t seed, TaylorOrder order) {
  return run_trials("projection", trials, [&](int t, Provenance& prov, AxiomFailure& failure) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    int k = std::uniform_int_distribution<int>(1, 3)(rng);
    int i = std::uniform_int_distribution<int>(1, k)(rng);
    auto args = random_arguments(ring, k, rng);
    SuperElement lhs = apply_smooth(SmoothExpr::var(i, k), args, order);
    return record(lhs, args[static_cast<std::size_t>(i - 1)], mix_seed(seed, 1000003u + static_cast<std::uint64_t>(t)),
                  "Phi_{x" + std::to_string(i) + "} differs from the projection", prov, failure);
  });
}

AxiomReport check_composition_axiom(const SplitSuperRing& ring, int trials, std::uint64_t seed, TaylorOrder order) {
  return run_trials("composition", trials, [&](int t, Provenance& prov, AxiomFailure& failure) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    int m = std::uniform_int_distribution<int>(1, 2)(rng);
    auto args = random_arguments(ring, m, rng);
    std::uint64_t eq_seed = mix_seed(seed, 2000003u + static_cast<std::uint64_t>(t));
    int kind = t % 3;
    if (kind == 0) {
      int n = std::uniform_int_distribution<int>(1, 2)(rng);
      SmoothExpr h = random_expr(n, 2, rng);
      std::vector<SmoothExpr> g;
      std::vector<SuperElement> inner;
      for (int j = 0; j < n; ++j) {
        g.push_back(random_expr(m, 2, rng));
        inner.push_back(apply_smooth(g.back(), args, order));
      }
      SuperElement lhs = apply_smooth(substitute(h, g, m), args, order);
      SuperElement rhs = apply_smooth(h, inner, order);
      return record(lhs, rhs, eq_seed, "Phi_{h(g)} differs from Phi_h(Phi_g) for h = " + h.to_string(), prov, failure);
    }
    SmoothExpr g1 = random_expr(m, 2, rng);
    SmoothExpr g2 = random_expr(m, 2, rng);
    SuperElement a = apply_smooth(g1, args, order);
    SuperElement b = apply_smooth(g2, args, order);
    if (kind == 1) {
      SuperElement lhs = apply_smooth(g1 * g2, args, order);
      return record(lhs, mul(a, b), eq_seed, "Phi_{g1*g2} differs from Phi_{g1}*Phi_{g2}", prov, failure);
    }
    SuperElement lhs = apply_smooth(g1 + g2, args, order);
    return record(lhs, a + b, eq_seed, "Phi_{g1+g2} differs from Phi_{g1}+Phi_{g2}", prov, failure);
  });
}

namespace {

SuperElement from_syntax(const syntax::Node& s, int p, int q);

SmoothExpr constant_body(const SuperElement& e, std::size_t pos) {
  SmoothExpr b = e.body();
  if (!e.soul().is_zero() || !b.is_constant()) throw ParseError("bump interval ends must be constants", pos);
  return b;
}

SuperElement call(const syntax::Node& s, int p, int q) {
  std::vector<SuperElement> args;
  for (const auto& a : s.args) args.push_back(from_syntax(a, p, q));
  if (s.name == "bump") {
    if (args.size() != 3) throw ParseError("bump takes (u, a, b)", s.position);
    Number lo = constant_body(args[1], s.position)->value;
    Number hi = constant_body(args[2], s.position)->value;
    if (!(lo.value() < hi.value())) throw ParseError("bump needs a < b", s.position);
    return apply_smooth(SmoothExpr::bump(SmoothExpr::var(1, 1), lo, hi), {args[0]});
  }
  if (args.size() != 1) throw ParseError(s.name + " takes one argument", s.position);
  SmoothExpr h = parse_expr(s.name + "(x1)", 1);
  return apply_smooth(h, args);
}

SuperElement reciprocal(const SuperElement& b) { return apply_smooth(SmoothExpr::constant(Number(1), 1) / SmoothExpr::var(1, 1), {b}); }

SuperElement from_syntax(const syntax::Node& s, int p, int q) {
  using syntax::Kind;
  switch (s.kind) {
    case Kind::Number:
      return SuperElement::constant(s.number, p, q);
    case Kind::Var:
      if (s.index > p) {
        throw ParseError("variable index out of range: x" + std::to_string(s.index) + " with p = " + std::to_string(p),
                         s.position);
      }
      return SuperElement::coordinate(s.index, p, q);
    case Kind::Theta: {
      SuperElement out = SuperElement::constant(Number(1), p, q);
      for (int i : s.thetas) {
        if (i > q) {
          throw ParseError("odd index out of range: t" + std::to_string(i) + " with q = " + std::to_string(q),
                           s.position);
        }
        out = mul(out, SuperElement::theta(i, p, q));
      }
      return out;
    }
    case Kind::Add: {
      SuperElement out(p, q);
      for (const auto& a : s.args) out += from_syntax(a, p, q);
      return out;
    }
    case Kind::Mul: {
      SuperElement out = SuperElement::constant(Number(1), p, q);
      for (const auto& a : s.args) out = mul(out, from_syntax(a, p, q));
      return out;
    }
    case Kind::Div: {
      SuperElement num = from_syntax(s.args[0], p, q);
      SuperElement den = from_syntax(s.args[1], p, q);
      if (den.soul().is_zero()) {
        SmoothExpr d = den.body();
        return num.map_coefficients([&](const SmoothExpr& c) { return c / d; });
      }
      return mul(num, reciprocal(den));
    }
    case Kind::Pow: {
      SuperElement base = from_syntax(s.args[0], p, q);
      if (s.index >= 0) {
        if (base.soul().is_zero()) return SuperElement::scalar(SmoothExpr::pow(base.body(), s.index), p, q);
        return power(base, s.index);
      }
      if (base.soul().is_zero()) return SuperElement::scalar(SmoothExpr::pow(base.body(), s.index), p, q);
      return power(reciprocal(base), -s.index);
    }
    case Kind::Call:
      return call(s, p, q);
  }
  return SuperElement(p, q);
}

}  // namespace

SuperElement parse_element(std::string_view text, int p, int q) { return from_syntax(syntax::parse(text), p, q); }

}  // namespace csr

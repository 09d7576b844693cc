#include "csr/ideals.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "csr/cinfty.hpp"
#include "csr/errors.hpp"

namespace csr {

namespace {

// c * x^beta * (product of rest), one summand of a coefficient.
struct PolyTerm {
  Number c{1};
  std::vector<int> beta;
  std::vector<std::pair<NodePtr, int>> rest;  // non-polynomial factors with exponents
};

std::vector<PolyTerm> decompose(const SmoothExpr& coeff, int p) {
  SmoothExpr s = simplify(coeff);
  std::vector<NodePtr> summands;
  if (s.op() == Op::Add) {
    summands = s->args;
  } else if (!s.is_zero_literal()) {
    summands.push_back(s.node());
  }
  std::vector<PolyTerm> out;
  for (const auto& t : summands) {
    PolyTerm pt;
    pt.beta.assign(static_cast<std::size_t>(p), 0);
    std::vector<NodePtr> factors;
    if (t->op == Op::Const) {
      pt.c = t->value;
    } else if (t->op == Op::Mul) {
      for (const auto& f : t->args) {
        if (f->op == Op::Const) {
          pt.c = pt.c * f->value;
        } else {
          factors.push_back(f);
        }
      }
    } else {
      factors.push_back(t);
    }
    for (const auto& f : factors) {
      if (f->op == Op::Var) {
        pt.beta[static_cast<std::size_t>(f->index - 1)] += 1;
      } else if (f->op == Op::Pow && f->index > 0 && f->args[0]->op == Op::Var) {
        pt.beta[static_cast<std::size_t>(f->args[0]->index - 1)] += f->index;
      } else if (f->op == Op::Pow && f->index > 0) {
        pt.rest.emplace_back(f->args[0], f->index);
      } else {
        pt.rest.emplace_back(f, 1);
      }
    }
    out.push_back(std::move(pt));
  }
  return out;
}

SmoothExpr monomial_expr(const Number& c, const std::vector<int>& beta,
                         const std::vector<std::pair<NodePtr, int>>& rest, int p) {
  std::vector<SmoothExpr> f{SmoothExpr::constant(c, p)};
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (beta[i] > 0) f.push_back(SmoothExpr::pow(SmoothExpr::var(static_cast<int>(i) + 1, p), beta[i]));
  }
  for (const auto& [base, e] : rest) {
    if (e > 0) f.push_back(SmoothExpr::pow(SmoothExpr::from_node(base, p), e));
  }
  return simplify(SmoothExpr::product(f)).with_arity(p);
}

// Term order used for orientation: lower Grassmann degree is larger, then
// canonical theta order, then degrevlex on the exponents.
bool key_greater(MultiIndex I1, const std::vector<int>& b1, MultiIndex I2, const std::vector<int>& b2) {
  if (degree(I1) != degree(I2)) return degree(I1) < degree(I2);
  if (I1 != I2) return MonomialLess{}(I1, I2);
  int t1 = 0, t2 = 0;
  for (int v : b1) t1 += v;
  for (int v : b2) t2 += v;
  if (t1 != t2) return t1 > t2;
  for (std::size_t i = b1.size(); i-- > 0;) {
    if (b1[i] != b2[i]) return b1[i] < b2[i];
  }
  return false;
}

// Divides the factor list `have` by `need`; nullopt when some factor is missing.
std::optional<std::vector<std::pair<NodePtr, int>>> divide_factors(std::vector<std::pair<NodePtr, int>> have,
                                                                  const std::vector<std::pair<SmoothExpr, int>>& need) {
  for (const auto& [base, e] : need) {
    auto it = std::find_if(have.begin(), have.end(), [&](const auto& h) { return same_tree(h.first, base.node()); });
    if (it == have.end() || it->second < e) return std::nullopt;
    it->second -= e;
  }
  return have;
}

std::string monomial_lhs(MultiIndex theta, const std::vector<int>& beta,
                         const std::vector<std::pair<SmoothExpr, int>>& factors) {
  std::string s;
  for (const auto& [base, e] : factors) {
    if (!s.empty()) s += "*";
    s += SmoothExpr::pow(base, e).to_string();
  }
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (beta[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += "x" + std::to_string(i + 1);
    if (beta[i] > 1) s += "^" + std::to_string(beta[i]);
  }
  if (theta != 0) {
    if (!s.empty()) s += "*";
    s += monomial_string(theta);
  }
  return s.empty() ? "1" : s;
}

}  // namespace

// ------------------------------------------------------------------ ideals

SuperIdeal::SuperIdeal(int p, int q, std::vector<SuperElement> generators) : p_(p), q_(q) {
  for (auto& g : generators) {
    if (g.p() != p || g.q() != q) {
      throw ArityError("generator " + g.to_string() + " does not live in C(" + std::to_string(p) + "|" +
                       std::to_string(q) + ")");
    }
    if (!g.is_homogeneous()) throw ParityError("superideal generators must be homogeneous: " + g.to_string());
    if (!g.is_zero()) generators_.push_back(std::move(g));
  }
}

std::vector<SmoothExpr> SuperIdeal::reduced_generators() const {
  std::vector<SmoothExpr> out;
  for (const auto& g : generators_) {
    if (g.parity() != Parity::Even) continue;
    SmoothExpr b = g.body();
    if (!b.is_zero_literal()) out.push_back(b);
  }
  return out;
}

std::string SuperIdeal::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (i) s += ", ";
    s += generators_[i].to_string();
  }
  return s + ")";
}

SuperIdeal ideal_product(const SuperIdeal& a, const SuperIdeal& b) {
  std::vector<SuperElement> gens;
  for (const auto& g : a.generators()) {
    for (const auto& h : b.generators()) gens.push_back(mul(g, h));
  }
  return SuperIdeal(a.p(), a.q(), std::move(gens));
}

SuperIdeal ideal_sum(const SuperIdeal& a, const SuperIdeal& b) {
  std::vector<SuperElement> gens = a.generators();
  gens.insert(gens.end(), b.generators().begin(), b.generators().end());
  return SuperIdeal(a.p(), a.q(), std::move(gens));
}

std::string RewriteRule::lhs_string() const { return monomial_lhs(theta, exponents, factors); }

std::string RewriteRule::to_string() const { return lhs_string() + " -> " + rhs.to_string(); }

RewriteSystem orient(const SuperIdeal& ideal) {
  RewriteSystem rs;
  rs.p = ideal.p();
  rs.q = ideal.q();
  std::vector<std::size_t> bad;
  std::string detail;
  for (std::size_t gi = 0; gi < ideal.generators().size(); ++gi) {
    const SuperElement& g = ideal.generators()[gi];
    struct Group {
      MultiIndex I;
      std::vector<int> beta;
      Number c{0};
      bool transcendental = false;
    };
    std::vector<Group> groups;
    for (const auto& [I, coeff] : g.terms()) {
      for (auto& pt : decompose(coeff, rs.p)) {
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const Group& gr) { return gr.I == I && gr.beta == pt.beta; });
        if (it == groups.end()) {
          groups.push_back({I, pt.beta, Number(0), false});
          it = groups.end() - 1;
        }
        if (pt.rest.empty()) {
          it->c = it->c + pt.c;
        } else {
          it->transcendental = true;
        }
      }
    }
    // A single term generator c*x^beta*T*theta^I rewrites to 0 whatever T is.
    if (g.terms().size() == 1) {
      auto pts = decompose(g.terms().begin()->second, rs.p);
      if (pts.size() == 1 && !pts.front().rest.empty()) {
        RewriteRule rule;
        rule.generator = gi;
        rule.theta = g.terms().begin()->first;
        rule.exponents = pts.front().beta;
        for (const auto& [base, e] : pts.front().rest) rule.factors.emplace_back(SmoothExpr::from_node(base, rs.p), e);
        rule.rhs = SuperElement(rs.p, rs.q);
        rs.rules.push_back(std::move(rule));
        continue;
      }
    }
    const Group* lead = nullptr;
    for (const auto& gr : groups) {
      if (!lead || key_greater(gr.I, gr.beta, lead->I, lead->beta)) lead = &gr;
    }
    if (!lead || lead->transcendental || lead->c.is_zero()) {
      bad.push_back(gi);
      if (!detail.empty()) detail += "; ";
      detail += g.to_string();
      continue;
    }
    SuperElement leading = SuperElement::monomial(monomial_expr(lead->c, lead->beta, {}, rs.p), lead->I, rs.p, rs.q);
    RewriteRule rule;
    rule.generator = gi;
    rule.theta = lead->I;
    rule.exponents = lead->beta;
    rule.rhs = (g - leading).scaled(SmoothExpr::constant(Number(-1) / lead->c, rs.p));
    rs.rules.push_back(std::move(rule));
  }
  if (!bad.empty()) {
    throw UnorientableGenerator("no polynomial leading term with a numeric coefficient in: " + detail, bad);
  }
  return rs;
}

QuotientRing::QuotientRing(int p, int q) : ideal_(p, q) {
  rules_.p = p;
  rules_.q = q;
}

QuotientRing::QuotientRing(SuperIdeal ideal) : ideal_(std::move(ideal)), rules_(orient(ideal_)) {}

SuperElement QuotientRing::normal_form(const SuperElement& a) const {
  if (a.p() != p() || a.q() != q()) {
    throw ArityError("element of C(" + std::to_string(a.p()) + "|" + std::to_string(a.q()) + ") used in " + to_string());
  }
  if (rules_.rules.empty()) return a;
  const int np = p();
  SuperElement cur = a;
  for (int iter = 0; iter < 100000; ++iter) {
    bool rewritten = false;
    for (const auto& [I, coeff] : cur.terms()) {
      std::vector<PolyTerm> pts = decompose(coeff, np);
      for (std::size_t k = 0; k < pts.size() && !rewritten; ++k) {
        const PolyTerm& pt = pts[k];
        for (const auto& rule : rules_.rules) {
          if ((rule.theta & ~I) != 0) continue;
          bool divisible = true;
          for (int v = 0; v < np; ++v) {
            if (pt.beta[static_cast<std::size_t>(v)] < rule.exponents[static_cast<std::size_t>(v)]) divisible = false;
          }
          if (!divisible) continue;
          auto rest = divide_factors(pt.rest, rule.factors);
          if (!rest) continue;
          SuperElement next(np, q());
          for (const auto& [J, c] : cur.terms()) {
            if (J != I) next.add_term(J, c);
          }
          std::vector<SmoothExpr> others;
          for (std::size_t m = 0; m < pts.size(); ++m) {
            if (m != k) others.push_back(monomial_expr(pts[m].c, pts[m].beta, pts[m].rest, np));
          }
          next.add_term(I, SmoothExpr::sum(others).with_arity(np));
          std::vector<int> quotient = pt.beta;
          for (int v = 0; v < np; ++v) quotient[static_cast<std::size_t>(v)] -= rule.exponents[static_cast<std::size_t>(v)];
          MultiIndex rest_theta = I & ~rule.theta;
          Number c = pt.c * Number(wedge_sign(rest_theta, rule.theta));
          SuperElement factor = SuperElement::monomial(monomial_expr(c, quotient, *rest, np), rest_theta, np, q());
          next += mul(factor, rule.rhs);
          cur = std::move(next);
          rewritten = true;
          break;
        }
      }
      if (rewritten) break;
    }
    if (!rewritten) return cur;
  }
  throw Error("normal form did not reach a fixpoint in " + to_string());
}

SuperElement QuotientRing::element(std::string_view text) const { return parse_element(text, p(), q()); }

std::string QuotientRing::to_string() const {
  std::string s = "C(" + std::to_string(p()) + "|" + std::to_string(q()) + ")";
  if (!ideal_.empty()) s += " / " + ideal_.to_string();
  return s;
}

// ------------------------------------------------------------------ zero sets

Box effective_box(const SamplerConfig& cfg, int p) {
  if (cfg.box.dim() == p) return cfg.box;
  if (cfg.box.dim() == 1 && p > 1) return Box::cube(p, cfg.box.lo[0], cfg.box.hi[0]);
  return Box::cube(p, -2.0, 2.0);
}

namespace {

std::vector<Point> grid_points(const Box& box, int per_axis_requested) {
  int p = box.dim();
  std::vector<Point> out;
  if (p == 0) {
    out.push_back({});
    return out;
  }
  int per_axis = std::max(2, per_axis_requested);
  while (per_axis > 2 && std::pow(per_axis, p) > 20000.0) --per_axis;
  std::vector<int> idx(static_cast<std::size_t>(p), 0);
  for (;;) {
    Point x(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
      double t = static_cast<double>(idx[static_cast<std::size_t>(i)]) / (per_axis - 1);
      x[static_cast<std::size_t>(i)] = box.lo[static_cast<std::size_t>(i)] +
                                       t * (box.hi[static_cast<std::size_t>(i)] - box.lo[static_cast<std::size_t>(i)]);
    }
    out.push_back(x);
    int i = 0;
    while (i < p && ++idx[static_cast<std::size_t>(i)] == per_axis) idx[static_cast<std::size_t>(i++)] = 0;
    if (i == p) break;
  }
  return out;
}

double norm(const Eigen::VectorXd& v) { return v.norm(); }

std::optional<Eigen::VectorXd> eval_all(const std::vector<SmoothExpr>& fs, const Point& x) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(fs.size()));
  try {
    for (std::size_t j = 0; j < fs.size(); ++j) v(static_cast<Eigen::Index>(j)) = eval(fs[j], x);
  } catch (const DomainError&) {
    return std::nullopt;
  }
  return v;
}

std::vector<Point> dedup_sorted(std::vector<Point> pts, double radius) {
  std::sort(pts.begin(), pts.end());
  std::vector<Point> kept;
  for (auto& x : pts) {
    bool dup = false;
    for (const auto& y : kept) {
      double d = 0;
      for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::fabs(x[i] - y[i]));
      if (d <= radius) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(std::move(x));
  }
  return kept;
}

}  // namespace

ZeroSet find_zeros(const std::vector<SmoothExpr>& fs_in, int p, const SamplerConfig& cfg) {
  ZeroSet zs;
  Box box = effective_box(cfg, p);
  std::vector<SmoothExpr> fs;
  for (const auto& f : fs_in) {
    SmoothExpr s = simplify(f).with_arity(p);
    if (s.is_zero_literal()) continue;
    if (s.is_constant()) {
      zs.empty_exact = true;
      return zs;
    }
    fs.push_back(s);
  }
  if (fs.empty()) {
    zs.whole_space = true;
    zs.points = grid_points(box, cfg.grid);
    return zs;
  }
  std::vector<SmoothExpr> sur;
  for (const auto& f : fs) sur.push_back(zero_surrogate(f).with_arity(p));
  std::vector<Point> starts = grid_points(box, cfg.grid);
  std::mt19937_64 rng(cfg.seed);
  for (int k = 0; k < 16; ++k) starts.push_back(box.sample(rng));

  // Systems for deflation: level k+1 adds the first partials of level k,
  // which vanish at multiple roots and make them simple.
  std::vector<std::vector<SmoothExpr>> systems{sur};
  std::vector<std::vector<std::vector<SmoothExpr>>> jacobians;
  auto jacobian_of = [&](const std::vector<SmoothExpr>& sys) {
    std::vector<std::vector<SmoothExpr>> jac;
    for (const auto& g : sys) {
      std::vector<SmoothExpr> row;
      for (int i = 1; i <= p; ++i) row.push_back(partial(g, i));
      jac.push_back(std::move(row));
    }
    return jac;
  };
  jacobians.push_back(jacobian_of(sur));

  auto jacobian_at = [&](std::size_t level, const Point& x) -> std::optional<Eigen::MatrixXd> {
    const auto& jac = jacobians[level];
    Eigen::MatrixXd J(static_cast<Eigen::Index>(jac.size()), p);
    try {
      for (std::size_t j = 0; j < jac.size(); ++j) {
        for (int i = 0; i < p; ++i) {
          J(static_cast<Eigen::Index>(j), i) = eval(jac[j][static_cast<std::size_t>(i)], x);
        }
      }
    } catch (const DomainError&) {
      return std::nullopt;
    }
    if (!J.allFinite()) return std::nullopt;
    return J;
  };

  // Damped Gauss-Newton on one system; false when the iterate leaves the domain.
  auto gauss_newton = [&](std::size_t level, Point& x) {
    const auto& sys = systems[level];
    for (int it = 0; it < cfg.max_iterations; ++it) {
      auto F = eval_all(sys, x);
      if (!F) return false;
      double fn = norm(*F);
      if (fn < 1e-15) break;
      auto J = jacobian_at(level, x);
      if (!J) return false;
      Eigen::VectorXd dx = J->completeOrthogonalDecomposition().solve(-*F);
      if (!dx.allFinite() || dx.norm() == 0.0) break;
      // backtracking keeps the residual from growing
      double step = 1.0;
      Point trial = x;
      bool improved = false;
      for (int b = 0; b < 8; ++b, step *= 0.5) {
        for (int i = 0; i < p; ++i) trial[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + step * dx(i);
        auto Ft = eval_all(sys, trial);
        if (Ft && norm(*Ft) < fn) {
          improved = true;
          break;
        }
      }
      if (!improved) break;
      x = trial;
      if (step * dx.norm() < 1e-16) break;
    }
    return true;
  };

  auto rank_deficient = [&](std::size_t level, const Point& x) {
    auto J = jacobian_at(level, x);
    if (!J) return false;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(*J);
    const auto& sv = svd.singularValues();
    double top = sv.size() ? sv(0) : 0.0;
    double bottom = sv.size() == p ? sv(sv.size() - 1) : 0.0;
    return bottom <= 1e-6 * std::max(top, 1.0);
  };

  std::vector<Point> found;
  for (Point x : starts) {
    bool ok = gauss_newton(0, x);
    // polish multiple roots through up to three deflation levels
    for (std::size_t level = 0; ok && level < 3 && rank_deficient(level, x); ++level) {
      if (systems.size() == level + 1) {
        std::vector<SmoothExpr> next = systems[level];
        for (const auto& row : jacobians[level]) {
          for (const auto& d : row) {
            SmoothExpr ds = simplify(d);
            if (!ds.is_constant()) next.push_back(ds);
          }
        }
        systems.push_back(next);
        jacobians.push_back(jacobian_of(next));
      }
      auto before = eval_all(fs, x);
      Point polished = x;
      if (!before || !gauss_newton(level + 1, polished)) break;
      auto after = eval_all(fs, polished);
      double moved = 0.0;
      for (int i = 0; i < p; ++i) {
        moved = std::max(moved, std::fabs(polished[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]));
      }
      if (!after || moved > 1e-3 || after->cwiseAbs().maxCoeff() > before->cwiseAbs().maxCoeff()) break;
      x = polished;
    }
    if (!ok || !box.contains(x, 1e-9)) continue;
    auto G = eval_all(fs, x);
    auto S = eval_all(sur, x);
    if (!G || !S) continue;
    if (G->cwiseAbs().maxCoeff() > cfg.residual || S->cwiseAbs().maxCoeff() > 1e-7) continue;
    for (double& v : x) {
      if (std::fabs(v) < 1e-15) v = 0.0;  // avoid printing -0
    }
    found.push_back(x);
  }
  zs.points = dedup_sorted(std::move(found), cfg.dedup);
  return zs;
}

bool diverges_near(const SmoothExpr& f, const std::vector<SmoothExpr>& gens, const std::vector<Point>& zeros,
                   std::uint64_t seed, Point* where) {
  if (zeros.empty()) return false;
  const std::size_t p = zeros.front().size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::size_t stride = std::max<std::size_t>(1, zeros.size() / 25);
  const double ts[] = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  for (std::size_t zi = 0; zi < zeros.size(); zi += stride) {
    const Point& z = zeros[zi];
    std::vector<Point> dirs;
    for (std::size_t i = 0; i < p; ++i) {
      Point d(p, 0.0);
      d[i] = 1.0;
      dirs.push_back(d);
      d[i] = -1.0;
      dirs.push_back(d);
    }
    for (int k = 0; k < 2 && p > 1; ++k) {
      Point d(p);
      double n = 0;
      for (auto& v : d) {
        v = normal(rng);
        n += v * v;
      }
      for (auto& v : d) v /= std::sqrt(n);
      dirs.push_back(d);
    }
    for (const auto& d : dirs) {
      std::vector<double> ratios;
      bool blew_up = false;
      bool valid = true;
      for (double t : ts) {
        Point x = z;
        for (std::size_t i = 0; i < p; ++i) x[i] += t * d[i];
        double fv, g2 = 0;
        try {
          fv = std::fabs(eval(f, x));
          for (const auto& g : gens) {
            double gv = eval(g, x);
            g2 += gv * gv;
          }
        } catch (const DomainError&) {
          valid = false;
          break;
        }
        double gn = std::sqrt(g2);
        if (gn == 0.0) {
          if (fv > 0.0) blew_up = true;
          else valid = false;
          break;
        }
        ratios.push_back(fv / gn);
      }
      if (!valid) continue;
      bool diverging = blew_up && !ratios.empty();
      if (!blew_up && ratios.size() == std::size(ts)) {
        bool increasing = true;
        for (std::size_t k = 1; k < ratios.size(); ++k) increasing = increasing && ratios[k] > ratios[k - 1];
        diverging = increasing && ratios.back() > 100.0 * ratios.front() && ratios.back() > 1e-12;
      }
      if (diverging) {
        if (where) *where = z;
        return true;
      }
    }
  }
  return false;
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::In: return "In";
    case Membership::Out: return "Out";
    case Membership::Unknown: return "Unknown";
  }
  return "?";
}

const char* to_string(Decision d) {
  switch (d) {
    case Decision::Yes: return "Yes";
    case Decision::No: return "No";
    case Decision::Unknown: return "Unknown";
  }
  return "?";
}

const char* to_string(Splitness s) {
  switch (s) {
    case Splitness::Split: return "Split";
    case Splitness::NotSplit: return "NotSplit";
    case Splitness::Unknown: return "Unknown";
  }
  return "?";
}

RadicalVerdict radical_membership(const SmoothExpr& f, const std::vector<SmoothExpr>& gens, int p,
                                  const SamplerConfig& cfg) {
  RadicalVerdict v;
  SmoothExpr s = simplify(f).with_arity(p);
  if (s.is_zero_literal()) {
    v.kind = Membership::In;
    v.provenance = Provenance::Exact;
    v.reason = "zero";
    return v;
  }
  for (const auto& g : gens) {
    if (simplify(g) == s) {
      v.kind = Membership::In;
      v.provenance = Provenance::Exact;
      v.reason = "generator of the ideal";
      return v;
    }
  }
  ZeroSet zs = find_zeros(gens, p, cfg);
  if (zs.empty_exact) {
    v.kind = Membership::In;
    v.provenance = Provenance::Exact;
    v.reason = "unit ideal";
    return v;
  }
  if (zs.whole_space) {
    ZeroVerdict z = is_zero(s, effective_box(cfg, p), 100, cfg.seed);
    v.provenance = z.provenance;
    if (z.kind == ZeroKind::Zero) {
      v.kind = Membership::In;
      v.reason = "vanishes identically";
    } else if (z.kind == ZeroKind::NonZero) {
      v.kind = Membership::Out;
      v.witness = z.witness;
      v.reason = "nonzero on the zero set R^" + std::to_string(p);
    } else {
      v.reason = "no sample inside the domain";
    }
    return v;
  }
  if (zs.points.empty()) {
    v.reason = "no zeros of the reduced ideal found in the box";
    return v;
  }
  for (const auto& z : zs.points) {
    double val;
    try {
      val = eval(s, z);
    } catch (const DomainError&) {
      v.reason = "element undefined at a zero";
      return v;
    }
    if (std::fabs(val) > cfg.vanish) {
      v.kind = Membership::Out;
      v.witness = z;
      v.reason = "does not vanish on the zero set";
      return v;
    }
  }
  v.kind = Membership::In;
  v.reason = "vanishes on " + std::to_string(zs.points.size()) + " sampled zeros";
  return v;
}

RadicalVerdict radical_membership(const SuperElement& a, const QuotientRing& ring, const SamplerConfig& cfg) {
  RadicalVerdict v;
  if (a.body().is_zero_literal()) {
    v.kind = Membership::In;
    v.provenance = Provenance::Exact;
    v.reason = a.is_zero() ? "zero" : "odd or nilpotent";
    return v;
  }
  if (ring.reduces_to_zero(a)) {
    v.kind = Membership::In;
    v.provenance = Provenance::Exact;
    v.reason = "element of the ideal";
    return v;
  }
  return radical_membership(a.body(), ring.ideal().reduced_generators(), ring.p(), cfg);
}

namespace {

bool regular_at_all(const std::vector<SmoothExpr>& gens, const std::vector<Point>& zeros, int p) {
  std::vector<std::vector<SmoothExpr>> jac;
  for (const auto& g : gens) {
    std::vector<SmoothExpr> row;
    for (int i = 1; i <= p; ++i) row.push_back(partial(g, i));
    jac.push_back(row);
  }
  for (const auto& z : zeros) {
    Eigen::MatrixXd J(static_cast<Eigen::Index>(gens.size()), p);
    try {
      for (std::size_t j = 0; j < gens.size(); ++j) {
        for (int i = 0; i < p; ++i) J(static_cast<Eigen::Index>(j), i) = eval(jac[j][static_cast<std::size_t>(i)], z);
      }
    } catch (const DomainError&) {
      return false;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    lu.setThreshold(1e-8);
    if (lu.rank() != static_cast<Eigen::Index>(gens.size())) return false;
  }
  return true;
}

}  // namespace

SuperreducedVerdict is_cinfty_superreduced(const QuotientRing& ring, const SamplerConfig& cfg) {
  SuperreducedVerdict v;
  const int p = ring.p();
  std::vector<SmoothExpr> gens = ring.ideal().reduced_generators();
  if (gens.empty()) {
    v.kind = Decision::Yes;
    v.provenance = Provenance::Exact;
    v.reason = "reduced ideal is zero";
    return v;
  }
  ZeroSet zs = find_zeros(gens, p, cfg);
  if (zs.empty_exact) {
    v.kind = Decision::Yes;
    v.provenance = Provenance::Exact;
    v.reason = "zero ring";
    return v;
  }
  if (zs.points.empty()) {
    v.reason = "no zeros of the reduced ideal found in the box";
    return v;
  }
  std::vector<SmoothExpr> candidates;
  for (int i = 1; i <= p; ++i) {
    double c = zs.points.front()[static_cast<std::size_t>(i - 1)];
    bool constant = std::all_of(zs.points.begin(), zs.points.end(),
                                [&](const Point& z) { return std::fabs(z[static_cast<std::size_t>(i - 1)] - c) < 1e-7; });
    if (!constant) continue;
    double r = std::round(c);
    Number n = std::fabs(c - r) < 1e-9 ? Number::real(r) : Number::real(c);
    candidates.push_back(simplify(SmoothExpr::var(i, p) - SmoothExpr::constant(n, p)).with_arity(p));
  }
  for (const auto& g : gens) candidates.push_back(zero_surrogate(g).with_arity(p));
  for (const auto& f : candidates) {
    if (f.is_constant()) continue;
    bool vanishes = true;
    for (const auto& z : zs.points) {
      try {
        if (std::fabs(eval(f, z)) > cfg.vanish) vanishes = false;
      } catch (const DomainError&) {
        vanishes = false;
      }
      if (!vanishes) break;
    }
    if (!vanishes) continue;
    Point where;
    if (diverges_near(f, gens, zs.points, cfg.seed, &where)) {
      v.kind = Decision::No;
      v.witness = SuperElement::scalar(f, p, ring.q());
      v.point = where;
      v.reason = "C-infinity nilpotent (vanishes on the zero set) but not in J: " + f.to_string();
      return v;
    }
  }
  if (regular_at_all(gens, zs.points, p)) {
    v.kind = Decision::Yes;
    v.reason = "reduced ideal is cut out regularly at every sampled zero";
    return v;
  }
  v.reason = "no witness found among the candidates";
  return v;
}

std::optional<int> nilpotency_order(const SuperElement& f, const QuotientRing& ring, int limit) {
  SuperElement pw = SuperElement::constant(Number(1), ring.p(), ring.q());
  for (int n = 1; n <= limit; ++n) {
    pw = ring.normal_form(mul(pw, f));
    if (pw.is_zero()) return n;
  }
  return std::nullopt;
}

SplitVerdict is_split(const QuotientRing& ring) {
  SplitVerdict v;
  const int p = ring.p(), q = ring.q();
  auto identity_section = [&] {
    std::string s;
    for (int i = 1; i <= p; ++i) {
      if (i > 1) s += ", ";
      s += "x" + std::to_string(i) + " -> x" + std::to_string(i);
    }
    return s.empty() ? std::string("1 -> 1") : s;
  };
  const auto& gens = ring.ideal().generators();
  if (gens.empty()) {
    v.kind = Splitness::Split;
    v.section = identity_section();
    v.reason = "free ring";
    return v;
  }
  bool inside_j = std::all_of(gens.begin(), gens.end(), [](const SuperElement& g) { return g.body().is_zero_literal(); });
  if (inside_j) {
    v.kind = Splitness::Split;
    v.section = identity_section();
    v.reason = "ideal contained in the canonical superideal J";
    return v;
  }
  bool bodies_in = std::all_of(gens.begin(), gens.end(), [&](const SuperElement& g) {
    return ring.reduces_to_zero(SuperElement::scalar(g.body(), p, q));
  });
  if (bodies_in) {
    v.kind = Splitness::Split;
    v.section = identity_section();
    v.reason = "ideal generated by its bodies and elements of J";
    return v;
  }
  // Curated non-split family: a single generator x_i^k + c*theta^K, |K| = 2, k >= 2.
  if (gens.size() == 1 && gens.front().is_even()) {
    const SuperElement& g = gens.front();
    SmoothExpr body = g.body();
    SuperElement soul = g.soul();
    std::vector<PolyTerm> bt = decompose(body, p);
    if (soul.terms().size() == 1 && degree(soul.terms().begin()->first) == 2 &&
        soul.terms().begin()->second.is_constant() && bt.size() == 1 && bt.front().rest.empty() &&
        bt.front().c.is_one()) {
      int var = -1, k = 0, nonzero = 0;
      for (int i = 0; i < p; ++i) {
        if (bt.front().beta[static_cast<std::size_t>(i)] > 0) {
          var = i + 1;
          k = bt.front().beta[static_cast<std::size_t>(i)];
          ++nonzero;
        }
      }
      if (nonzero == 1 && k >= 2) {
        auto order = nilpotency_order(SuperElement::coordinate(var, p, q), ring, 4 * k + 2);
        if (order && *order != k) {
          v.kind = Splitness::NotSplit;
          v.obstruction = std::make_pair(k, *order);
          v.reason = "x" + std::to_string(var) + " has nilpotency order " + std::to_string(k) +
                     " in the reduced ring but " + std::to_string(*order) + " in the even part";
          return v;
        }
      }
    }
  }
  v.reason = "outside the decidable class";
  return v;
}

}  // namespace csr

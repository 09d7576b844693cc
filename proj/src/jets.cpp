#include "csr/jets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <sstream>

#include "csr/errors.hpp"

namespace csr {

// ---------------------------------------------------------------- JetSpace

JetSpace::JetSpace(int p, int order) : p_(p), order_(order) {
  std::vector<int> beta(static_cast<std::size_t>(p), 0);
  // graded order: by total degree, then lexicographically descending in x1
  for (int d = 0; d <= order; ++d) {
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == p - 1 || p == 0) {
        if (p > 0) beta[static_cast<std::size_t>(i)] = left;
        if (p == 0 && left != 0) return;
        index_[beta] = static_cast<int>(monomials_.size());
        monomials_.push_back(beta);
        degrees_.push_back(d);
        return;
      }
      for (int e = left; e >= 0; --e) {
        beta[static_cast<std::size_t>(i)] = e;
        rec(i + 1, left - e);
      }
      beta[static_cast<std::size_t>(i)] = 0;
    };
    rec(0, d);
  }
  std::size_t n = monomials_.size();
  table_.assign(n * n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (degrees_[i] + degrees_[j] > order) continue;
      std::vector<int> s(static_cast<std::size_t>(p));
      for (std::size_t v = 0; v < s.size(); ++v) s[v] = monomials_[i][v] + monomials_[j][v];
      table_[i * n + j] = index_.at(s);
    }
  }
}

std::shared_ptr<const JetSpace> JetSpace::get(int p, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> cache;
  if (p < 0 || order < 0) throw ArityError("jet space needs p >= 0 and order >= 0");
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, order}];
  if (!slot) slot.reset(new JetSpace(p, order));
  return slot;
}

int JetSpace::index_of(const std::vector<int>& beta) const {
  auto it = index_.find(beta);
  return it == index_.end() ? -1 : it->second;
}

// ---------------------------------------------------------------- Jet

Jet::Jet(std::shared_ptr<const JetSpace> space) : space_(std::move(space)), c_(space_->size(), 0.0) {}

Jet Jet::constant(std::shared_ptr<const JetSpace> space, double c) {
  Jet j(std::move(space));
  j.c_[0] = c;
  return j;
}

Jet Jet::variable(std::shared_ptr<const JetSpace> space, int i, double base) {
  Jet j(std::move(space));
  j.c_[0] = base;
  if (j.space_->order() >= 1) {
    std::vector<int> e(static_cast<std::size_t>(j.space_->p()), 0);
    e[static_cast<std::size_t>(i - 1)] = 1;
    j.c_[static_cast<std::size_t>(j.space_->index_of(e))] = 1.0;
  }
  return j;
}

bool Jet::is_zero(double tol) const {
  return std::all_of(c_.begin(), c_.end(), [&](double v) { return std::fabs(v) <= tol; });
}

double Jet::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::fabs(v));
  return m;
}

Jet& Jet::operator+=(const Jet& b) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
  return *this;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a;
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.space_);
  const JetSpace& s = *a.space_;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (a.c_[i] == 0.0) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      int k = s.product(i, j);
      if (k >= 0 && b.c_[j] != 0.0) r.c_[static_cast<std::size_t>(k)] += a.c_[i] * b.c_[j];
    }
  }
  return r;
}

Jet Jet::scaled(double s) const {
  Jet r = *this;
  for (double& v : r.c_) v *= s;
  return r;
}

Jet Jet::compose(const std::vector<double>& d) const {
  Jet tail = *this;
  tail.c_[0] = 0.0;
  int k = space_->order();
  std::vector<double> fact(static_cast<std::size_t>(k + 1), 1.0);
  for (int n = 1; n <= k; ++n) fact[static_cast<std::size_t>(n)] = fact[static_cast<std::size_t>(n - 1)] * n;
  // Horner in the nilpotent tail: the tail^(k+1) truncates to zero
  Jet acc = Jet::constant(space_, d[static_cast<std::size_t>(k)] / fact[static_cast<std::size_t>(k)]);
  for (int n = k - 1; n >= 0; --n) {
    acc = acc * tail;
    acc.c_[0] += d[static_cast<std::size_t>(n)] / fact[static_cast<std::size_t>(n)];
  }
  return acc;
}

namespace {

std::string format_coefficient(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string Jet::to_string(const Point& base) const {
  const JetSpace& s = *space_;
  double scale = std::max(1.0, max_abs());
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double v = c_[i];
    if (std::fabs(v) <= 1e-14 * scale) continue;
    std::string mono;
    for (int j = 0; j < s.p(); ++j) {
      int e = s.monomial(i)[static_cast<std::size_t>(j)];
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      std::string var = "x" + std::to_string(j + 1);
      double a = j < static_cast<int>(base.size()) ? base[static_cast<std::size_t>(j)] : 0.0;
      if (a != 0.0) var = "(" + var + (a > 0 ? " - " : " + ") + format_coefficient(std::fabs(a)) + ")";
      mono += var;
      if (e > 1) mono += "^" + std::to_string(e);
    }
    bool neg = v < 0;
    double m = std::fabs(v);
    std::string term;
    if (mono.empty()) {
      term = format_coefficient(m);
    } else if (m == 1.0) {
      term = mono;
    } else {
      term = format_coefficient(m) + "*" + mono;
    }
    if (out.empty()) {
      out = (neg ? "-" : "") + term;
    } else {
      out += (neg ? " - " : " + ") + term;
    }
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- jet_of

namespace {

struct Ctx {
  std::shared_ptr<const JetSpace> space;
  const Point& a;
  int p;
};

struct JR {
  Jet jet;
  bool flat = false;  // all derivatives vanish at the point
  bool germ_zero = false;
};

[[noreturn]] void domain(const char* why, const NodePtr& n, int p) {
  throw DomainError(why, SmoothExpr::from_node(n, p).to_string());
}

// d^n/du^n u^alpha at u0
std::vector<double> power_derivatives(double u0, double alpha, int k) {
  std::vector<double> d(static_cast<std::size_t>(k + 1));
  double coef = 1.0;
  for (int n = 0; n <= k; ++n) {
    d[static_cast<std::size_t>(n)] = coef == 0.0 ? 0.0 : coef * std::pow(u0, alpha - n);
    coef *= alpha - n;
  }
  return d;
}

Jet zero_jet(const Ctx& cx) { return Jet(cx.space); }

JR flat_result(const Ctx& cx, bool germ_zero = false) { return {zero_jet(cx), true, germ_zero}; }

Jet power_jet(const Jet& u, double alpha, const NodePtr& n, int p) {
  double u0 = u.value();
  int k = u.space().order();
  bool integral = alpha == std::floor(alpha);
  if (u0 == 0.0) {
    if (integral && alpha >= 0) {
      Jet r = Jet::constant(u.space_ptr(), 1.0);
      for (int i = 0; i < static_cast<int>(alpha); ++i) r = r * u;
      return r;
    }
    if (alpha < 0) domain("pole", n, p);
    if (k > 0) domain("not differentiable", n, p);
    return Jet(u.space_ptr());
  }
  if (u0 < 0.0 && !integral) domain("sqrt of a negative number", n, p);
  return u.compose(power_derivatives(u0, alpha, k));
}

Jet exp_jet(const Jet& u) {
  std::vector<double> d(static_cast<std::size_t>(u.space().order() + 1), std::exp(u.value()));
  return u.compose(d);
}

Jet sin_cos_jet(const Jet& u, bool is_sin) {
  double s = std::sin(u.value()), c = std::cos(u.value());
  // derivatives of sin: s, c, -s, -c; of cos: c, -s, -c, s
  double cyc[4] = {s, c, -s, -c};
  int off = is_sin ? 0 : 1;
  std::vector<double> d(static_cast<std::size_t>(u.space().order() + 1));
  for (std::size_t n = 0; n < d.size(); ++n) d[n] = cyc[(n + static_cast<std::size_t>(off)) % 4];
  return u.compose(d);
}

JR jet_rec(const NodePtr& n, const Ctx& cx) {
  switch (n->op) {
    case Op::Const:
      if (n->value.is_zero()) return {zero_jet(cx), true, true};
      return {Jet::constant(cx.space, n->value.value())};
    case Op::Var:
      if (n->index > static_cast<int>(cx.a.size())) throw ArityError("point dimension too small for jet");
      return {Jet::variable(cx.space, n->index, cx.a[static_cast<std::size_t>(n->index - 1)])};
    case Op::Add: {
      JR r{zero_jet(cx), true, true};
      for (const auto& c : n->args) {
        JR t = jet_rec(c, cx);
        r.jet += t.jet;
        r.flat = r.flat && t.flat;
        r.germ_zero = r.germ_zero && t.germ_zero;
      }
      return r;
    }
    case Op::Mul: {
      // flat factors absorb poles of the others
      std::vector<JR> parts;
      bool any_flat = false, any_germ_zero = false;
      std::vector<const NodePtr*> deferred;
      for (const auto& c : n->args) {
        try {
          JR t = jet_rec(c, cx);
          any_flat = any_flat || t.flat;
          any_germ_zero = any_germ_zero || t.germ_zero;
          parts.push_back(std::move(t));
        } catch (const DomainError&) {
          deferred.push_back(&c);
        }
      }
      if (any_flat) return flat_result(cx, any_germ_zero);
      if (!deferred.empty()) jet_rec(*deferred.front(), cx);  // rethrows
      JR r{Jet::constant(cx.space, 1.0)};
      for (const auto& t : parts) r.jet = r.jet * t.jet;
      return r;
    }
    case Op::Div: {
      JR a = jet_rec(n->args[0], cx);
      if (a.flat) return a;
      JR b = jet_rec(n->args[1], cx);
      if (b.jet.value() == 0.0) domain("division by zero", n, cx.p);
      return {a.jet * power_jet(b.jet, -1.0, n, cx.p)};
    }
    case Op::Pow: {
      JR a = jet_rec(n->args[0], cx);
      if (a.flat && n->index > 0) return a;
      if (n->index == 0) return {Jet::constant(cx.space, 1.0)};
      return {power_jet(a.jet, n->index, n, cx.p)};
    }
    case Op::Exp:
      return {exp_jet(jet_rec(n->args[0], cx).jet)};
    case Op::Log: {
      Jet u = jet_rec(n->args[0], cx).jet;
      double u0 = u.value();
      if (!(u0 > 0.0)) domain("log of a non-positive number", n, cx.p);
      std::vector<double> d(static_cast<std::size_t>(u.space().order() + 1));
      d[0] = std::log(u0);
      double f = 1.0;
      for (std::size_t k = 1; k < d.size(); ++k) {
        d[k] = ((k % 2 == 1) ? 1.0 : -1.0) * f / std::pow(u0, static_cast<double>(k));
        f *= static_cast<double>(k);
      }
      return {u.compose(d)};
    }
    case Op::Sin:
      return {sin_cos_jet(jet_rec(n->args[0], cx).jet, true)};
    case Op::Cos:
      return {sin_cos_jet(jet_rec(n->args[0], cx).jet, false)};
    case Op::Tan: {
      Jet u = jet_rec(n->args[0], cx).jet;
      Jet c = sin_cos_jet(u, false);
      if (c.value() == 0.0) domain("tan pole", n, cx.p);
      return {sin_cos_jet(u, true) * power_jet(c, -1.0, n, cx.p)};
    }
    case Op::Sqrt: {
      Jet u = jet_rec(n->args[0], cx).jet;
      if (u.value() < 0.0) domain("sqrt of a negative number", n, cx.p);
      return {power_jet(u, 0.5, n, cx.p)};
    }
    case Op::Flat: {
      Jet u = jet_rec(n->args[0], cx).jet;
      if (u.value() == 0.0) return flat_result(cx);
      Jet inv2 = power_jet(u, -2.0, n, cx.p);
      return {exp_jet(inv2.scaled(-1.0))};
    }
    case Op::Bump: {
      Jet u = jet_rec(n->args[0], cx).jet;
      double lo = n->args[1]->value.value(), hi = n->args[2]->value.value();
      double u0 = u.value();
      if (u0 < lo || u0 > hi) return flat_result(cx, true);
      if (u0 == lo || u0 == hi) return flat_result(cx);
      Jet w = (u - Jet::constant(cx.space, lo)) * (Jet::constant(cx.space, hi) - u);
      return {exp_jet(power_jet(w, -1.0, n, cx.p).scaled(-1.0))};
    }
  }
  return {zero_jet(cx)};
}

}  // namespace

JetResult jet_of(const SmoothExpr& e, const Point& a, int order) {
  int p = std::max(e.arity(), static_cast<int>(a.size()));
  Ctx cx{JetSpace::get(static_cast<int>(a.size()), order), a, p};
  JR r = jet_rec(e.node(), cx);
  return {std::move(r.jet), r.germ_zero};
}

// ---------------------------------------------------------------- LocalElement

LocalElement::LocalElement(Point base, int order, int q)
    : base_(std::move(base)),
      order_(order),
      q_(q),
      space_(JetSpace::get(static_cast<int>(base_.size()), order)) {}

void LocalElement::add(MultiIndex I, const Jet& j) {
  auto it = terms_.find(I);
  if (it == terms_.end()) {
    terms_.emplace(I, j);
  } else {
    it->second += j;
  }
}

bool LocalElement::is_zero(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(), [&](const auto& kv) { return kv.second.is_zero(tol); });
}

double distance(const LocalElement& a, const LocalElement& b) {
  std::vector<double> va = a.to_vector(), vb = b.to_vector();
  double d = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) d = std::max(d, std::fabs(va[i] - vb[i]));
  return d;
}

LocalElement operator*(const LocalElement& a, const LocalElement& b) {
  LocalElement r(a.base_, a.order_, a.q_);
  r.exact_ = a.exact_ && b.exact_;
  r.germ_zero_ = a.germ_zero_ || b.germ_zero_;
  for (const auto& [I, ja] : a.terms_) {
    for (const auto& [J, jb] : b.terms_) {
      int s = wedge_sign(I, J);
      if (s == 0) continue;
      Jet prod = ja * jb;
      r.add(I | J, s > 0 ? prod : prod.scaled(-1.0));
    }
  }
  return r;
}

LocalElement operator+(const LocalElement& a, const LocalElement& b) {
  LocalElement r = a;
  r.exact_ = a.exact_ && b.exact_;
  r.germ_zero_ = a.germ_zero_ && b.germ_zero_;
  for (const auto& [J, jb] : b.terms_) r.add(J, jb);
  return r;
}

std::vector<double> LocalElement::to_vector() const {
  std::size_t n = space_->size();
  std::vector<double> v((std::size_t{1} << q_) * n, 0.0);
  for (const auto& [I, j] : terms_) {
    std::copy(j.coefficients().begin(), j.coefficients().end(), v.begin() + static_cast<std::ptrdiff_t>(I * n));
  }
  return v;
}

std::string LocalElement::to_string() const {
  std::string out;
  for (const auto& [I, j] : terms_) {
    if (j.is_zero(1e-14 * std::max(1.0, j.max_abs()))) continue;
    std::string c = j.to_string(base_);
    std::string piece;
    if (I == 0) {
      piece = c;
    } else {
      bool sum = c.find(" + ") != std::string::npos || c.find(" - ") != std::string::npos;
      if (c == "1") {
        piece = monomial_string(I);
      } else if (c == "-1") {
        piece = "-" + monomial_string(I);
      } else {
        piece = (sum ? "(" + c + ")" : c) + "*" + monomial_string(I);
      }
    }
    if (out.empty()) {
      out = piece;
    } else if (piece[0] == '-') {
      out += " - " + piece.substr(1);
    } else {
      out += " + " + piece;
    }
  }
  return out.empty() ? "0" : out;
}

LocalElement localize(const SuperElement& r, const Point& x, int order) {
  if (static_cast<int>(x.size()) != r.p()) {
    throw ArityError("localize: point has dimension " + std::to_string(x.size()) + ", ring has p = " +
                     std::to_string(r.p()));
  }
  LocalElement out(x, order, r.q());
  bool exact = true, germ_zero = true;
  for (const auto& [I, c] : r.terms()) {
    exact = exact && c.is_polynomial();
    JetResult j = jet_of(c, x, order);
    germ_zero = germ_zero && j.germ_zero;
    out.add(I, j.jet);
  }
  out.set_exact(exact);
  out.set_germ_zero(germ_zero);
  return out;
}

}  // namespace csr

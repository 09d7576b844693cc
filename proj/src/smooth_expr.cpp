#include "csr/smooth_expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "csr/errors.hpp"
#include "csr/syntax.hpp"

namespace csr {

namespace {

// Products of sums are expanded only while the result stays this small.
constexpr std::size_t kExpandCap = 48;

std::size_t combine(std::size_t seed, std::size_t v) { return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2)); }

NodePtr mk(Op op, Number value, int index, std::vector<NodePtr> args) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->value = value;
  n->index = index;
  n->args = std::move(args);
  std::size_t h = std::hash<int>{}(static_cast<int>(op));
  h = combine(h, op == Op::Const ? value.hash() : 0);
  h = combine(h, std::hash<int>{}(index));
  int mv = op == Op::Var ? index : 0;
  for (const auto& a : n->args) {
    h = combine(h, a->hash);
    mv = std::max(mv, a->max_var);
  }
  n->hash = h;
  n->max_var = mv;
  return n;
}

NodePtr cnst(Number v) { return mk(Op::Const, v, 0, {}); }
NodePtr zero_node() {
  static const NodePtr z = cnst(Number(0));
  return z;
}
NodePtr one_node() {
  static const NodePtr o = cnst(Number(1));
  return o;
}
NodePtr varn(int i) { return mk(Op::Var, Number(0), i, {}); }
NodePtr fn(Op op, NodePtr a) { return mk(op, Number(0), 0, {std::move(a)}); }
NodePtr pown(NodePtr a, int k) { return mk(Op::Pow, Number(0), k, {std::move(a)}); }
NodePtr add(std::vector<NodePtr> args) { return mk(Op::Add, Number(0), 0, std::move(args)); }
NodePtr mul(std::vector<NodePtr> args) { return mk(Op::Mul, Number(0), 0, std::move(args)); }
NodePtr divn(NodePtr a, NodePtr b) { return mk(Op::Div, Number(0), 0, {std::move(a), std::move(b)}); }

bool is_const(const NodePtr& n) { return n->op == Op::Const; }
bool is_const_value(const NodePtr& n, long long v) { return n->op == Op::Const && n->value == Number(v); }

bool is_unary_function(Op op) {
  switch (op) {
    case Op::Exp:
    case Op::Log:
    case Op::Sin:
    case Op::Cos:
    case Op::Tan:
    case Op::Sqrt:
    case Op::Flat:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------- printing

enum class Ctx { Top, AddTerm, MulHead, MulTail, Denominator, PowBase };

bool const_is_plain(const Number& v) { return v.is_integer() && !v.is_negative(); }

// A term is "negative" when it prints with a leading minus.
bool negative_term(const NodePtr& n) {
  if (n->op == Op::Const) return n->value.is_negative();
  if (n->op == Op::Mul && !n->args.empty() && is_const(n->args.front())) return n->args.front()->value.is_negative();
  return false;
}

NodePtr negate_term(const NodePtr& n) {
  if (n->op == Op::Const) return cnst(-n->value);
  std::vector<NodePtr> args = n->args;
  Number c = -args.front()->value;
  if (c.is_one()) {
    args.erase(args.begin());
    if (args.size() == 1) return args.front();
  } else {
    args.front() = cnst(c);
  }
  return mul(std::move(args));
}

void print(const NodePtr& n, Ctx ctx, std::string& out);

void print_paren(const NodePtr& n, std::string& out) {
  out += '(';
  print(n, Ctx::Top, out);
  out += ')';
}

void print(const NodePtr& n, Ctx ctx, std::string& out) {
  switch (n->op) {
    case Op::Const: {
      const Number& v = n->value;
      bool wrap = false;
      if (ctx == Ctx::PowBase) wrap = !const_is_plain(v);
      if (ctx == Ctx::MulTail || ctx == Ctx::Denominator) wrap = v.is_negative() || (v.is_exact() && !v.is_integer());
      if (wrap) out += '(';
      out += v.to_string();
      if (wrap) out += ')';
      return;
    }
    case Op::Var:
      out += 'x';
      out += std::to_string(n->index);
      return;
    case Op::Add: {
      if (ctx != Ctx::Top) {
        print_paren(n, out);
        return;
      }
      for (std::size_t i = 0; i < n->args.size(); ++i) {
        const NodePtr& t = n->args[i];
        if (i == 0) {
          print(t, Ctx::AddTerm, out);
        } else if (negative_term(t)) {
          out += " - ";
          print(negate_term(t), Ctx::AddTerm, out);
        } else {
          out += " + ";
          print(t, Ctx::AddTerm, out);
        }
      }
      return;
    }
    case Op::Mul: {
      if (n->args.size() == 1) {
        print(n->args.front(), ctx, out);
        return;
      }
      if (ctx == Ctx::PowBase || ctx == Ctx::MulTail || ctx == Ctx::Denominator) {
        print_paren(n, out);
        return;
      }
      std::size_t start = 0;
      if (is_const_value(n->args.front(), -1)) {
        out += '-';
        start = 1;
      }
      for (std::size_t i = start; i < n->args.size(); ++i) {
        if (i > start) out += '*';
        const NodePtr& f = n->args[i];
        if (f->op == Op::Div || f->op == Op::Mul) {
          print_paren(f, out);
        } else {
          print(f, i == start ? Ctx::MulHead : Ctx::MulTail, out);
        }
      }
      return;
    }
    case Op::Div: {
      if (ctx == Ctx::PowBase || ctx == Ctx::MulTail || ctx == Ctx::Denominator) {
        print_paren(n, out);
        return;
      }
      print(n->args[0], Ctx::MulHead, out);
      out += '/';
      const NodePtr& d = n->args[1];
      if (d->op == Op::Mul || d->op == Op::Div) {
        print_paren(d, out);
      } else {
        print(d, Ctx::Denominator, out);
      }
      return;
    }
    case Op::Pow: {
      const NodePtr& b = n->args[0];
      bool atomic = b->op == Op::Var || b->op == Op::Const || is_unary_function(b->op) || b->op == Op::Bump;
      if (atomic) {
        print(b, Ctx::PowBase, out);
      } else {
        print_paren(b, out);
      }
      out += '^';
      out += std::to_string(n->index);
      return;
    }
    default: {
      out += op_name(n->op);
      out += '(';
      for (std::size_t i = 0; i < n->args.size(); ++i) {
        if (i) out += ", ";
        print(n->args[i], Ctx::Top, out);
      }
      out += ')';
      return;
    }
  }
}

// ---------------------------------------------------------------- evaluation

struct Value {
  double v;
  bool flat_zero;  // exact zero that absorbs poles in products
};

struct EvalContext {
  explicit EvalContext(const Point& p) : x(p) {}
  const Point& x;
  const ExprNode* offender = nullptr;
  std::string offender_reason;
};

Value ev(const ExprNode& n, EvalContext& cx);

Value finish(const ExprNode& n, EvalContext& cx, Value result, bool inputs_finite, const char* reason) {
  if (!std::isfinite(result.v) && inputs_finite && cx.offender == nullptr) {
    cx.offender = &n;
    cx.offender_reason = reason;
  }
  return result;
}

Value ev(const ExprNode& n, EvalContext& cx) {
  switch (n.op) {
    case Op::Const:
      return {n.value.value(), false};
    case Op::Var:
      if (static_cast<std::size_t>(n.index) > cx.x.size()) {
        throw ArityError("point has dimension " + std::to_string(cx.x.size()) + " but expression uses x" +
                         std::to_string(n.index));
      }
      return {cx.x[static_cast<std::size_t>(n.index - 1)], false};
    case Op::Add: {
      double s = 0.0;
      bool all_flat = true;
      bool finite = true;
      for (const auto& a : n.args) {
        Value v = ev(*a, cx);
        if (v.flat_zero) continue;
        all_flat = false;
        finite = finite && std::isfinite(v.v);
        s += v.v;
      }
      if (all_flat) return {0.0, true};
      return finish(n, cx, {s, false}, finite, "non-finite sum");
    }
    case Op::Mul: {
      double p = 1.0;
      bool finite = true;
      bool absorbed = false;
      for (const auto& a : n.args) {
        Value v = ev(*a, cx);
        if (v.flat_zero) absorbed = true;
        finite = finite && std::isfinite(v.v);
        p *= v.v;
      }
      if (absorbed) return {0.0, true};
      return finish(n, cx, {p, false}, finite, "non-finite product");
    }
    case Op::Div: {
      Value a = ev(*n.args[0], cx);
      if (a.flat_zero) return {0.0, true};
      Value b = ev(*n.args[1], cx);
      bool finite = std::isfinite(a.v) && std::isfinite(b.v);
      return finish(n, cx, {a.v / b.v, false}, finite, "division by zero");
    }
    case Op::Pow: {
      Value a = ev(*n.args[0], cx);
      if (a.flat_zero && n.index > 0) return {0.0, true};
      return finish(n, cx, {std::pow(a.v, n.index), false}, std::isfinite(a.v), "negative power of zero");
    }
    case Op::Exp: {
      Value a = ev(*n.args[0], cx);
      return finish(n, cx, {std::exp(a.v), false}, std::isfinite(a.v), "exp overflow");
    }
    case Op::Log: {
      Value a = ev(*n.args[0], cx);
      double r = a.v > 0.0 ? std::log(a.v) : std::nan("");
      return finish(n, cx, {r, false}, std::isfinite(a.v), "log of a non-positive number");
    }
    case Op::Sin: {
      Value a = ev(*n.args[0], cx);
      return finish(n, cx, {std::sin(a.v), false}, std::isfinite(a.v), "sin");
    }
    case Op::Cos: {
      Value a = ev(*n.args[0], cx);
      return finish(n, cx, {std::cos(a.v), false}, std::isfinite(a.v), "cos");
    }
    case Op::Tan: {
      Value a = ev(*n.args[0], cx);
      return finish(n, cx, {std::tan(a.v), false}, std::isfinite(a.v), "tan");
    }
    case Op::Sqrt: {
      Value a = ev(*n.args[0], cx);
      double r = a.v >= 0.0 ? std::sqrt(a.v) : std::nan("");
      return finish(n, cx, {r, false}, std::isfinite(a.v), "sqrt of a negative number");
    }
    case Op::Flat: {
      Value a = ev(*n.args[0], cx);
      if (!std::isfinite(a.v)) return {a.v, false};
      if (a.v == 0.0) return {0.0, true};
      double r = std::exp(-1.0 / (a.v * a.v));
      return {r, r == 0.0};
    }
    case Op::Bump: {
      Value u = ev(*n.args[0], cx);
      double lo = ev(*n.args[1], cx).v;
      double hi = ev(*n.args[2], cx).v;
      if (!std::isfinite(u.v)) return {u.v, false};
      if (u.v <= lo || u.v >= hi) return {0.0, true};
      double r = std::exp(-1.0 / ((u.v - lo) * (hi - u.v)));
      return {r, r == 0.0};
    }
  }
  return {0.0, false};
}

// ---------------------------------------------------------------- simplification

NodePtr simp(const NodePtr& n);
NodePtr simp_mul(std::vector<NodePtr> children);
NodePtr simp_add(std::vector<NodePtr> children);
NodePtr simp_pow(const NodePtr& base, int k);

struct NodeLess {
  bool operator()(const NodePtr& a, const NodePtr& b) const { return compare(a, b) < 0; }
};

// Splits a simplified term into its numeric coefficient and the remaining
// monomial (nullptr for a pure constant).
std::pair<Number, NodePtr> split_coefficient(const NodePtr& t) {
  if (t->op == Op::Const) return {t->value, nullptr};
  if (t->op == Op::Mul && is_const(t->args.front())) {
    std::vector<NodePtr> rest(t->args.begin() + 1, t->args.end());
    if (rest.size() == 1) return {t->args.front()->value, rest.front()};
    return {t->args.front()->value, mul(std::move(rest))};
  }
  return {Number(1), t};
}

NodePtr make_product(const Number& c, std::vector<NodePtr> factors) {
  if (c.is_zero()) return zero_node();
  if (factors.empty()) return cnst(c);
  if (c.is_one() && factors.size() == 1) return factors.front();
  std::vector<NodePtr> args;
  args.reserve(factors.size() + 1);
  if (!c.is_one()) args.push_back(cnst(c));
  for (auto& f : factors) args.push_back(std::move(f));
  return mul(std::move(args));
}

NodePtr scale_monomial(const Number& c, const NodePtr& monomial) {
  if (!monomial) return cnst(c);
  if (monomial->op == Op::Mul) return make_product(c, monomial->args);
  return make_product(c, {monomial});
}

NodePtr simp_add(std::vector<NodePtr> children) {
  struct Acc {
    Number coeff;
    double magnitude = 0.0;
  };
  std::map<NodePtr, Acc, NodeLess> terms;
  Acc constant{Number(0), 0.0};
  std::function<void(const NodePtr&)> visit = [&](const NodePtr& c) {
    if (c->op == Op::Add) {
      for (const auto& a : c->args) visit(a);
      return;
    }
    auto [coeff, mono] = split_coefficient(c);
    Acc& acc = mono ? terms[mono] : constant;
    if (mono && acc.magnitude == 0.0 && acc.coeff.is_zero()) acc.coeff = Number(0);
    acc.coeff = acc.coeff + coeff;
    acc.magnitude += std::fabs(coeff.value());
  };
  for (const auto& c : children) visit(c);

  auto negligible = [](const Acc& a) {
    if (a.coeff.is_zero()) return true;
    return !a.coeff.is_exact() && std::fabs(a.coeff.value()) <= 1e-14 * a.magnitude;
  };
  std::vector<NodePtr> out;
  if (!negligible(constant)) out.push_back(cnst(constant.coeff));
  for (const auto& [mono, acc] : terms) {
    if (negligible(acc)) continue;
    out.push_back(scale_monomial(acc.coeff, mono));
  }
  if (out.empty()) return zero_node();
  if (out.size() == 1) return out.front();
  return add(std::move(out));
}

NodePtr simp_mul(std::vector<NodePtr> children) {
  Number c(1);
  std::vector<NodePtr> factors;
  for (const auto& ch : children) {
    if (ch->op == Op::Const) {
      c = c * ch->value;
    } else if (ch->op == Op::Mul) {
      for (const auto& a : ch->args) {
        if (a->op == Op::Const) {
          c = c * a->value;
        } else {
          factors.push_back(a);
        }
      }
    } else {
      factors.push_back(ch);
    }
  }
  if (c.is_zero()) return zero_node();

  // Distribute over sums while the expansion stays small.
  std::size_t expanded = 1;
  bool has_sum = false;
  for (const auto& f : factors) {
    if (f->op == Op::Add) {
      has_sum = true;
      expanded *= f->args.size();
      if (expanded > kExpandCap) break;
    }
  }
  if (has_sum && expanded <= kExpandCap) {
    std::vector<NodePtr> plain{cnst(c)};
    std::vector<NodePtr> sums;
    for (const auto& f : factors) (f->op == Op::Add ? sums : plain).push_back(f);
    std::vector<NodePtr> acc{simp_mul(plain)};
    for (const auto& s : sums) {
      std::vector<NodePtr> next;
      next.reserve(acc.size() * s->args.size());
      for (const auto& a : acc) {
        for (const auto& t : s->args) next.push_back(simp_mul({a, t}));
      }
      acc = std::move(next);
    }
    return simp_add(std::move(acc));
  }

  // Collect equal bases; positive and negative exponents are kept apart so
  // that x * x^-1 keeps its pole at 0.
  struct Entry {
    NodePtr base;
    int exponent;
  };
  std::vector<Entry> entries;
  for (const auto& f : factors) {
    NodePtr base = f->op == Op::Pow ? f->args[0] : f;
    int e = f->op == Op::Pow ? f->index : 1;
    bool merged = false;
    for (auto& en : entries) {
      if ((en.exponent > 0) == (e > 0) && same_tree(en.base, base)) {
        en.exponent += e;
        merged = true;
        break;
      }
    }
    if (!merged) entries.push_back({base, e});
  }
  std::vector<NodePtr> out;
  for (const auto& en : entries) {
    if (en.exponent == 1) {
      out.push_back(en.base);
    } else {
      out.push_back(pown(en.base, en.exponent));
    }
  }
  std::sort(out.begin(), out.end(), NodeLess{});
  return make_product(c, std::move(out));
}

NodePtr simp_pow(const NodePtr& a, int k) {
  if (k == 0) return one_node();
  if (k == 1) return a;
  if (a->op == Op::Const) {
    const Number& v = a->value;
    if (v.is_zero() && k < 0) return pown(a, k);
    if (v.is_exact()) return cnst(v.pow(k));
    double r = std::pow(v.value(), k);
    if (std::isfinite(r)) return cnst(Number::real(r));
    return pown(a, k);
  }
  if (a->op == Op::Pow && !(a->index < 0 && k < 0)) return simp_pow(a->args[0], a->index * k);
  if (a->op == Op::Mul) {
    std::vector<NodePtr> parts;
    for (const auto& f : a->args) parts.push_back(simp_pow(f, k));
    return simp_mul(std::move(parts));
  }
  if (a->op == Op::Add && k > 0) {
    double size = std::pow(static_cast<double>(a->args.size()), k);
    if (size <= static_cast<double>(kExpandCap)) {
      NodePtr acc = a;
      for (int i = 1; i < k; ++i) acc = simp_mul({acc, a});
      return acc;
    }
  }
  return pown(a, k);
}

NodePtr simp_div(const NodePtr& a, const NodePtr& b) {
  if (is_const_value(b, 1)) return a;
  if (is_const_value(a, 0)) return zero_node();
  if (b->op == Op::Const && !b->value.is_zero()) {
    return simp_mul({cnst(Number(1) / b->value), a});
  }
  return divn(a, b);
}

NodePtr simp_function(Op op, std::vector<NodePtr> args) {
  NodePtr n = mk(op, Number(0), 0, std::move(args));
  bool all_const = std::all_of(n->args.begin(), n->args.end(), [](const NodePtr& x) { return is_const(x); });
  if (all_const) {
    Point empty;
    EvalContext cx(empty);
    Value v = ev(*n, cx);
    if (v.flat_zero) return zero_node();
    if (std::isfinite(v.v) && std::floor(v.v) == v.v && std::fabs(v.v) < 1e15) {
      return cnst(Number(static_cast<long long>(v.v)));
    }
  }
  return n;
}

NodePtr simp(const NodePtr& n) {
  switch (n->op) {
    case Op::Const:
    case Op::Var:
      return n;
    case Op::Add: {
      std::vector<NodePtr> ch;
      ch.reserve(n->args.size());
      for (const auto& a : n->args) ch.push_back(simp(a));
      return simp_add(std::move(ch));
    }
    case Op::Mul: {
      std::vector<NodePtr> ch;
      ch.reserve(n->args.size());
      for (const auto& a : n->args) ch.push_back(simp(a));
      return simp_mul(std::move(ch));
    }
    case Op::Div:
      return simp_div(simp(n->args[0]), simp(n->args[1]));
    case Op::Pow:
      return simp_pow(simp(n->args[0]), n->index);
    default: {
      std::vector<NodePtr> ch;
      for (const auto& a : n->args) ch.push_back(simp(a));
      return simp_function(n->op, std::move(ch));
    }
  }
}

// ---------------------------------------------------------------- differentiation

NodePtr diff(const NodePtr& n, int i) {
  if (n->max_var < i) return zero_node();
  switch (n->op) {
    case Op::Const:
      return zero_node();
    case Op::Var:
      return n->index == i ? one_node() : zero_node();
    case Op::Add: {
      std::vector<NodePtr> terms;
      for (const auto& a : n->args) terms.push_back(diff(a, i));
      return add(std::move(terms));
    }
    case Op::Mul: {
      std::vector<NodePtr> terms;
      for (std::size_t k = 0; k < n->args.size(); ++k) {
        if (n->args[k]->max_var < i) continue;
        std::vector<NodePtr> f = n->args;
        f[k] = diff(n->args[k], i);
        terms.push_back(mul(std::move(f)));
      }
      return add(std::move(terms));
    }
    case Op::Div: {
      const NodePtr& a = n->args[0];
      const NodePtr& b = n->args[1];
      NodePtr num = add({mul({diff(a, i), b}), mul({cnst(Number(-1)), a, diff(b, i)})});
      return divn(num, pown(b, 2));
    }
    case Op::Pow: {
      const NodePtr& a = n->args[0];
      return mul({cnst(Number(n->index)), pown(a, n->index - 1), diff(a, i)});
    }
    case Op::Exp:
      return mul({n, diff(n->args[0], i)});
    case Op::Log:
      return divn(diff(n->args[0], i), n->args[0]);
    case Op::Sin:
      return mul({fn(Op::Cos, n->args[0]), diff(n->args[0], i)});
    case Op::Cos:
      return mul({cnst(Number(-1)), fn(Op::Sin, n->args[0]), diff(n->args[0], i)});
    case Op::Tan:
      return mul({add({one_node(), pown(n, 2)}), diff(n->args[0], i)});
    case Op::Sqrt:
      return divn(diff(n->args[0], i), mul({cnst(Number(2)), n}));
    case Op::Flat: {
      const NodePtr& u = n->args[0];
      return mul({divn(cnst(Number(2)), pown(u, 3)), n, diff(u, i)});
    }
    case Op::Bump: {
      const NodePtr& u = n->args[0];
      const NodePtr& lo = n->args[1];
      const NodePtr& hi = n->args[2];
      NodePtr neg_u = mul({cnst(Number(-1)), u});
      NodePtr slope = add({lo, hi, mul({cnst(Number(-2)), u})});
      NodePtr denom = pown(mul({add({u, mul({cnst(Number(-1)), lo})}), add({hi, neg_u})}), 2);
      return mul({n, divn(slope, denom), diff(u, i)});
    }
  }
  return zero_node();
}

NodePtr subst(const NodePtr& n, const std::vector<SmoothExpr>& args) {
  switch (n->op) {
    case Op::Const:
      return n;
    case Op::Var:
      if (static_cast<std::size_t>(n->index) > args.size()) {
        throw ArityError("substitution supplies " + std::to_string(args.size()) + " arguments but expression uses x" +
                         std::to_string(n->index));
      }
      return args[static_cast<std::size_t>(n->index - 1)].node();
    default: {
      std::vector<NodePtr> ch;
      ch.reserve(n->args.size());
      for (const auto& a : n->args) ch.push_back(subst(a, args));
      return mk(n->op, n->value, n->index, std::move(ch));
    }
  }
}

bool polynomial(const NodePtr& n) {
  switch (n->op) {
    case Op::Const:
    case Op::Var:
      return true;
    case Op::Add:
    case Op::Mul:
      return std::all_of(n->args.begin(), n->args.end(), polynomial);
    case Op::Pow:
      return n->index >= 0 && polynomial(n->args[0]);
    default:
      return false;
  }
}

// Divides one occurrence of phi (as a factor or a power base) out of term.
std::optional<NodePtr> divide_out(const NodePtr& term, const NodePtr& phi) {
  auto lower = [&](const NodePtr& f) -> std::optional<NodePtr> {
    if (same_tree(f, phi)) return one_node();
    if (f->op == Op::Pow && f->index > 0 && same_tree(f->args[0], phi)) {
      return f->index == 2 ? phi : pown(phi, f->index - 1);
    }
    return std::nullopt;
  };
  if (term->op != Op::Mul) return lower(term);
  for (std::size_t i = 0; i < term->args.size(); ++i) {
    if (auto r = lower(term->args[i])) {
      std::vector<NodePtr> rest = term->args;
      rest[i] = *r;
      return simp(mul(std::move(rest)));
    }
  }
  return std::nullopt;
}

NodePtr surrogate(const NodePtr& n);

// A factor shared by every term of a sum, e.g. flat(x1) in flat(x1)*x1^2 - flat(x1).
NodePtr surrogate_sum(const NodePtr& n) {
  const NodePtr& first = n->args.front();
  std::vector<NodePtr> candidates = first->op == Op::Mul ? first->args : std::vector<NodePtr>{first};
  for (NodePtr phi : candidates) {
    if (phi->op == Op::Pow && phi->index > 0) phi = phi->args[0];
    if (is_const(phi)) continue;
    std::vector<NodePtr> quotients;
    for (const auto& t : n->args) {
      auto q = divide_out(t, phi);
      if (!q) break;
      quotients.push_back(*q);
    }
    if (quotients.size() == n->args.size()) return mul({surrogate(phi), surrogate(simp(add(std::move(quotients))))});
  }
  return n;
}

NodePtr surrogate(const NodePtr& n) {
  switch (n->op) {
    case Op::Add:
      return surrogate_sum(n);
    case Op::Mul: {
      std::vector<NodePtr> keep;
      for (const auto& f : n->args) {
        NodePtr s = surrogate(f);
        if (!is_const(s)) keep.push_back(s);
      }
      if (keep.empty()) return one_node();
      return keep.size() == 1 ? keep.front() : mul(std::move(keep));
    }
    case Op::Pow:
      return n->index > 0 ? surrogate(n->args[0]) : one_node();
    case Op::Flat:
    case Op::Sqrt:
      return surrogate(n->args[0]);
    case Op::Div:
      return surrogate(n->args[0]);
    case Op::Exp:
      return one_node();
    case Op::Const:
      return n->value.is_zero() ? n : one_node();
    default:
      return n;
  }
}

NodePtr from_syntax(const syntax::Node& s, int arity) {
  using syntax::Kind;
  switch (s.kind) {
    case Kind::Number:
      return cnst(s.number);
    case Kind::Var:
      if (s.index > arity) {
        throw ParseError("variable index out of range: x" + std::to_string(s.index) + " with p = " +
                             std::to_string(arity),
                         s.position);
      }
      return varn(s.index);
    case Kind::Theta:
      throw ParseError("odd generators are not allowed in a smooth expression", s.position);
    case Kind::Add:
    case Kind::Mul: {
      std::vector<NodePtr> ch;
      for (const auto& a : s.args) ch.push_back(from_syntax(a, arity));
      return s.kind == Kind::Add ? add(std::move(ch)) : mul(std::move(ch));
    }
    case Kind::Div:
      return divn(from_syntax(s.args[0], arity), from_syntax(s.args[1], arity));
    case Kind::Pow:
      return pown(from_syntax(s.args[0], arity), s.index);
    case Kind::Call: {
      static const std::map<std::string, Op> ops = {{"exp", Op::Exp},   {"log", Op::Log},   {"sin", Op::Sin},
                                                    {"cos", Op::Cos},   {"tan", Op::Tan},   {"sqrt", Op::Sqrt},
                                                    {"flat", Op::Flat}, {"bump", Op::Bump}};
      Op op = ops.at(s.name);
      if (op == Op::Bump) {
        if (s.args.size() != 3) throw ParseError("bump takes (u, a, b)", s.position);
        NodePtr lo = simp(from_syntax(s.args[1], arity));
        NodePtr hi = simp(from_syntax(s.args[2], arity));
        if (!is_const(lo) || !is_const(hi)) throw ParseError("bump interval ends must be constants", s.position);
        if (!(lo->value.value() < hi->value.value())) throw ParseError("bump needs a < b", s.position);
        return mk(Op::Bump, Number(0), 0, {from_syntax(s.args[0], arity), lo, hi});
      }
      if (s.args.size() != 1) throw ParseError(s.name + " takes one argument", s.position);
      return fn(op, from_syntax(s.args[0], arity));
    }
  }
  return zero_node();
}

NodePtr random_node(int arity, int depth, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 9);
  if (depth <= 0 || pick(rng) < 3) {
    if (arity > 0 && pick(rng) < 7) {
      std::uniform_int_distribution<int> v(1, arity);
      return varn(v(rng));
    }
    static const long long consts[] = {1, 2, 3, -1, -2};
    std::uniform_int_distribution<int> c(0, 4);
    return cnst(Number(consts[c(rng)]));
  }
  switch (pick(rng) % 4) {
    case 0:
      return add({random_node(arity, depth - 1, rng), random_node(arity, depth - 1, rng)});
    case 1:
      return mul({random_node(arity, depth - 1, rng), random_node(arity, depth - 1, rng)});
    case 2:
      return fn(Op::Sin, random_node(arity, depth - 1, rng));
    default:
      return fn(Op::Exp, random_node(arity, depth - 1, rng));
  }
}

int max_var_of(const NodePtr& n) { return n->max_var; }

}  // namespace

// ---------------------------------------------------------------- public API

const char* op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Add: return "add";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Pow: return "pow";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Sqrt: return "sqrt";
    case Op::Flat: return "flat";
    case Op::Bump: return "bump";
  }
  return "?";
}

const char* to_string(ZeroKind k) {
  switch (k) {
    case ZeroKind::Zero: return "Zero";
    case ZeroKind::NonZero: return "NonZero";
    case ZeroKind::Unknown: return "Unknown";
  }
  return "?";
}

bool same_tree(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (a->hash != b->hash || a->op != b->op || a->index != b->index || a->args.size() != b->args.size()) return false;
  if (a->op == Op::Const && !(a->value == b->value)) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    if (!same_tree(a->args[i], b->args[i])) return false;
  }
  return true;
}

int compare(const NodePtr& a, const NodePtr& b) {
  if (a == b) return 0;
  // Order powers next to their bases: x1 < x1^2 < x2.
  const NodePtr& ba = a->op == Op::Pow ? a->args[0] : a;
  const NodePtr& bb = b->op == Op::Pow ? b->args[0] : b;
  if (a->op == Op::Pow || b->op == Op::Pow) {
    int c = compare(ba, bb);
    if (c != 0) return c;
    int ea = a->op == Op::Pow ? a->index : 1;
    int eb = b->op == Op::Pow ? b->index : 1;
    if (ea != eb) return ea < eb ? -1 : 1;
    if (a->op != b->op) return a->op == Op::Pow ? 1 : -1;
    return 0;
  }
  if (a->op != b->op) return static_cast<int>(a->op) < static_cast<int>(b->op) ? -1 : 1;
  switch (a->op) {
    case Op::Const:
      return Number::compare(a->value, b->value);
    case Op::Var:
      return a->index == b->index ? 0 : (a->index < b->index ? -1 : 1);
    default: {
      std::size_t n = std::min(a->args.size(), b->args.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = compare(a->args[i], b->args[i]);
        if (c != 0) return c;
      }
      if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
      return 0;
    }
  }
}

SmoothExpr::SmoothExpr() : node_(zero_node()), arity_(0) {}

SmoothExpr SmoothExpr::constant(Number value, int arity) { return SmoothExpr(cnst(value), arity); }

SmoothExpr SmoothExpr::var(int index, int arity) {
  if (index < 1) throw ArityError("variable indices start at 1");
  return SmoothExpr(varn(index), std::max(arity, index));
}

SmoothExpr SmoothExpr::apply(Op op, const SmoothExpr& arg) {
  if (!is_unary_function(op)) throw Error(std::string("not a unary function: ") + op_name(op));
  return SmoothExpr(fn(op, arg.node_), arg.arity_);
}

SmoothExpr SmoothExpr::bump(const SmoothExpr& u, Number a, Number b) {
  if (!(a.value() < b.value())) throw Error("bump needs a < b");
  return SmoothExpr(mk(Op::Bump, Number(0), 0, {u.node_, cnst(a), cnst(b)}), u.arity_);
}

SmoothExpr SmoothExpr::pow(const SmoothExpr& base, int exponent) {
  return SmoothExpr(pown(base.node_, exponent), base.arity_);
}

SmoothExpr SmoothExpr::sum(const std::vector<SmoothExpr>& terms) {
  if (terms.empty()) return SmoothExpr();
  if (terms.size() == 1) return terms.front();
  std::vector<NodePtr> ch;
  int ar = 0;
  for (const auto& t : terms) {
    ch.push_back(t.node_);
    ar = std::max(ar, t.arity_);
  }
  return SmoothExpr(add(std::move(ch)), ar);
}

SmoothExpr SmoothExpr::product(const std::vector<SmoothExpr>& factors) {
  if (factors.empty()) return constant(Number(1));
  if (factors.size() == 1) return factors.front();
  std::vector<NodePtr> ch;
  int ar = 0;
  for (const auto& t : factors) {
    ch.push_back(t.node_);
    ar = std::max(ar, t.arity_);
  }
  return SmoothExpr(mul(std::move(ch)), ar);
}

SmoothExpr SmoothExpr::from_node(NodePtr node, int arity) {
  if (node->max_var > arity) throw ArityError("expression uses x" + std::to_string(node->max_var) + " with p = " + std::to_string(arity));
  return SmoothExpr(std::move(node), arity);
}

SmoothExpr SmoothExpr::with_arity(int p) const {
  if (max_var_of(node_) > p) {
    throw ArityError("expression uses x" + std::to_string(node_->max_var) + " but p = " + std::to_string(p));
  }
  return SmoothExpr(node_, p);
}

bool SmoothExpr::is_polynomial() const { return polynomial(node_); }

std::string SmoothExpr::to_string() const {
  std::string out;
  print(node_, Ctx::Top, out);
  return out;
}

SmoothExpr operator+(const SmoothExpr& a, const SmoothExpr& b) { return SmoothExpr::sum({a, b}); }
SmoothExpr operator-(const SmoothExpr& a, const SmoothExpr& b) { return SmoothExpr::sum({a, -b}); }
SmoothExpr operator*(const SmoothExpr& a, const SmoothExpr& b) { return SmoothExpr::product({a, b}); }
SmoothExpr operator/(const SmoothExpr& a, const SmoothExpr& b) {
  return SmoothExpr(divn(a.node_, b.node_), std::max(a.arity_, b.arity_));
}
SmoothExpr operator-(const SmoothExpr& a) {
  return SmoothExpr(mul({cnst(Number(-1)), a.node_}), a.arity_);
}

bool operator==(const SmoothExpr& a, const SmoothExpr& b) { return same_tree(a.node_, b.node_); }

SmoothExpr parse_expr(std::string_view text, int arity) {
  return SmoothExpr::from_node(from_syntax(syntax::parse(text), arity), arity);
}

double eval(const SmoothExpr& e, const Point& x) {
  EvalContext cx(x);
  Value v = ev(*e.node(), cx);
  if (!std::isfinite(v.v)) {
    std::string where = cx.offender ? SmoothExpr::from_node(
                                          // re-wrap the offending node for printing
                                          std::shared_ptr<const ExprNode>(e.node(), cx.offender), e.arity())
                                          .to_string()
                                    : e.to_string();
    throw DomainError(cx.offender ? cx.offender_reason : "non-finite value", where);
  }
  return v.v;
}

SmoothExpr partial(const SmoothExpr& e, int i) {
  if (i < 1 || i > std::max(e.arity(), e->max_var)) {
    throw ArityError("partial derivative index " + std::to_string(i) + " outside 1.." + std::to_string(e.arity()));
  }
  return SmoothExpr::from_node(simp(diff(simp(e.node()), i)), e.arity());
}

SmoothExpr simplify(const SmoothExpr& e) { return SmoothExpr::from_node(simp(e.node()), e.arity()); }

SmoothExpr substitute(const SmoothExpr& e, const std::vector<SmoothExpr>& args, int arity) {
  return SmoothExpr::from_node(subst(e.node(), args), arity);
}

ZeroVerdict is_zero(const SmoothExpr& e, const Box& box, int samples, std::uint64_t seed, const Tolerances& tol) {
  ZeroVerdict out;
  SmoothExpr s = simplify(e);
  if (s.is_zero_literal()) {
    out.kind = ZeroKind::Zero;
    out.provenance = Provenance::Exact;
    return out;
  }
  if (s.is_constant()) {
    out.kind = ZeroKind::NonZero;
    out.provenance = Provenance::Exact;
    out.witness = Point(static_cast<std::size_t>(box.dim()), 0.0);
    out.witness_value = s->value.value();
    return out;
  }
  std::mt19937_64 rng(seed);
  int valid = 0;
  for (int k = 0; k < samples; ++k) {
    Point x = box.sample(rng);
    double v;
    try {
      v = eval(s, x);
    } catch (const DomainError&) {
      continue;
    }
    ++valid;
    if (std::fabs(v) > tol.abs) {
      out.kind = ZeroKind::NonZero;
      out.provenance = Provenance::Sampled;
      out.witness = x;
      out.witness_value = v;
      return out;
    }
  }
  out.kind = valid > 0 ? ZeroKind::Zero : ZeroKind::Unknown;
  out.provenance = Provenance::Sampled;
  return out;
}

SmoothExpr random_expr(int arity, int depth, std::mt19937_64& rng) {
  return SmoothExpr::from_node(random_node(arity, depth, rng), arity);
}

SmoothExpr zero_surrogate(const SmoothExpr& e) {
  return SmoothExpr::from_node(simp(surrogate(simp(e.node()))), e.arity());
}

}  // namespace csr

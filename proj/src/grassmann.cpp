#include "csr/grassmann.hpp"

#include "csr/errors.hpp"

namespace csr {

std::vector<int> indices(MultiIndex I) {
  std::vector<int> out;
  for (int i = 1; I != 0; ++i, I >>= 1) {
    if (I & 1u) out.push_back(i);
  }
  return out;
}

MultiIndex from_indices(const std::vector<int>& idx) {
  MultiIndex I = 0;
  for (int i : idx) {
    if (i < 1 || i > kMaxOdd) throw ArityError("odd index out of range: " + std::to_string(i));
    I |= single(i);
  }
  return I;
}

std::string monomial_string(MultiIndex I) {
  std::string s;
  for (int i : indices(I)) s += "t" + std::to_string(i);
  return s;
}

bool MonomialLess::operator()(MultiIndex a, MultiIndex b) const {
  int da = degree(a), db = degree(b);
  if (da != db) return da < db;
  if (a == b) return false;
  MultiIndex d = a ^ b;
  MultiIndex lowest = d & (~d + 1);
  return (a & lowest) != 0;
}

int wedge_sign(MultiIndex I, MultiIndex J) {
  if (I & J) return 0;
  int inversions = 0;
  for (int j : indices(J)) {
    // elements of I strictly above j
    MultiIndex above = j >= kMaxOdd ? 0 : (~MultiIndex{0} << j);
    inversions += degree(I & above);
  }
  return inversions % 2 == 0 ? 1 : -1;
}

const char* to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "Even";
    case Parity::Odd: return "Odd";
    case Parity::Mixed: return "Mixed";
  }
  return "?";
}

SuperElement::SuperElement(int p, int q) : p_(p), q_(q) {
  if (p < 0 || q < 0 || q > kMaxOdd) throw ArityError("invalid dimensions (" + std::to_string(p) + "|" + std::to_string(q) + ")");
}

SuperElement SuperElement::scalar(const SmoothExpr& f, int p, int q) {
  SuperElement e(p, q);
  e.add_term(0, f);
  return e;
}

SuperElement SuperElement::constant(Number c, int p, int q) { return scalar(SmoothExpr::constant(c, p), p, q); }

SuperElement SuperElement::coordinate(int i, int p, int q) {
  if (i < 1 || i > p) throw ArityError("x" + std::to_string(i) + " outside 1.." + std::to_string(p));
  return scalar(SmoothExpr::var(i, p), p, q);
}

SuperElement SuperElement::theta(int i, int p, int q) {
  if (i < 1 || i > q) throw ArityError("t" + std::to_string(i) + " outside 1.." + std::to_string(q));
  return monomial(SmoothExpr::constant(Number(1), p), single(i), p, q);
}

SuperElement SuperElement::monomial(const SmoothExpr& c, MultiIndex I, int p, int q) {
  SuperElement e(p, q);
  e.add_term(I, c);
  return e;
}

void SuperElement::add_term(MultiIndex I, const SmoothExpr& c) {
  if (q_ < kMaxOdd && (I >> q_) != 0) throw ArityError("monomial " + monomial_string(I) + " exceeds q = " + std::to_string(q_));
  auto it = terms_.find(I);
  SmoothExpr sum = it == terms_.end() ? c.with_arity(p_) : it->second + c.with_arity(p_);
  SmoothExpr s = simplify(sum).with_arity(p_);
  if (s.is_zero_literal()) {
    if (it != terms_.end()) terms_.erase(it);
    return;
  }
  if (it == terms_.end()) {
    terms_.emplace(I, s);
  } else {
    it->second = s;
  }
}

SmoothExpr SuperElement::coeff(MultiIndex I) const {
  auto it = terms_.find(I);
  return it == terms_.end() ? SmoothExpr::constant(Number(0), p_) : it->second;
}

Parity SuperElement::parity() const {
  bool even = false, odd = false;
  for (const auto& [I, c] : terms_) (degree(I) % 2 == 0 ? even : odd) = true;
  if (even && odd) return Parity::Mixed;
  return odd ? Parity::Odd : Parity::Even;
}

int SuperElement::min_degree() const { return terms_.empty() ? -1 : degree(terms_.begin()->first); }
int SuperElement::max_degree() const { return terms_.empty() ? -1 : degree(terms_.rbegin()->first); }

SuperElement SuperElement::soul() const {
  SuperElement s = *this;
  s.terms_.erase(0);
  return s;
}

SuperElement SuperElement::even_part() const {
  SuperElement s(p_, q_);
  for (const auto& [I, c] : terms_) {
    if (degree(I) % 2 == 0) s.terms_.emplace(I, c);
  }
  return s;
}

SuperElement SuperElement::odd_part() const {
  SuperElement s(p_, q_);
  for (const auto& [I, c] : terms_) {
    if (degree(I) % 2 == 1) s.terms_.emplace(I, c);
  }
  return s;
}

SuperElement SuperElement::degree_part(int k) const {
  SuperElement s(p_, q_);
  for (const auto& [I, c] : terms_) {
    if (degree(I) == k) s.terms_.emplace(I, c);
  }
  return s;
}

SuperElement SuperElement::scaled(const SmoothExpr& f) const {
  SuperElement out(p_, q_);
  for (const auto& [I, c] : terms_) out.add_term(I, c * f);
  return out;
}

std::string SuperElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [I, c] : terms_) {
    std::string cs = c.to_string();
    bool negative = cs.size() > 1 && cs[0] == '-' && (c.op() == Op::Mul || c.op() == Op::Const);
    if (negative && !first) {
      out += " - ";
      cs = simplify(-c).to_string();
    } else if (!first) {
      out += " + ";
    }
    first = false;
    if (I == 0) {
      out += cs;
      continue;
    }
    if (cs == "1") {
      out += monomial_string(I);
    } else if (cs == "-1") {
      out += "-" + monomial_string(I);
    } else if (c.op() == Op::Add) {
      out += "(" + cs + ")*" + monomial_string(I);
    } else {
      out += cs + "*" + monomial_string(I);
    }
  }
  return out;
}

void check_same_arity(const SuperElement& a, const SuperElement& b) {
  if (a.p() != b.p() || a.q() != b.q()) {
    throw ArityError("arity mismatch: (" + std::to_string(a.p()) + "|" + std::to_string(a.q()) + ") vs (" +
                     std::to_string(b.p()) + "|" + std::to_string(b.q()) + ")");
  }
}

SuperElement& SuperElement::operator+=(const SuperElement& b) {
  check_same_arity(*this, b);
  for (const auto& [I, c] : b.terms_) add_term(I, c);
  return *this;
}

SuperElement operator-(const SuperElement& a) {
  SuperElement out(a.p_, a.q_);
  for (const auto& [I, c] : a.terms_) out.add_term(I, -c);
  return out;
}

SuperElement operator-(const SuperElement& a, const SuperElement& b) { return a + (-b); }

SuperElement mul(const SuperElement& a, const SuperElement& b) {
  check_same_arity(a, b);
  std::map<MultiIndex, std::vector<SmoothExpr>, MonomialLess> acc;
  for (const auto& [I, c] : a.terms()) {
    for (const auto& [J, d] : b.terms()) {
      int s = wedge_sign(I, J);
      if (s == 0) continue;
      SmoothExpr t = c * d;
      acc[I | J].push_back(s > 0 ? t : -t);
    }
  }
  SuperElement out(a.p(), a.q());
  for (const auto& [K, parts] : acc) out.add_term(K, SmoothExpr::sum(parts));
  return out;
}

SuperElement operator*(const SuperElement& a, const SuperElement& b) { return mul(a, b); }

bool operator==(const SuperElement& a, const SuperElement& b) {
  if (a.p_ != b.p_ || a.q_ != b.q_ || a.terms_.size() != b.terms_.size()) return false;
  auto it = b.terms_.begin();
  for (const auto& [I, c] : a.terms_) {
    if (I != it->first || !(c == it->second)) return false;
    ++it;
  }
  return true;
}

SuperElement power(const SuperElement& a, int k) {
  if (k < 0) throw Error("negative power of a super element");
  SuperElement out = SuperElement::constant(Number(1), a.p(), a.q());
  for (int i = 0; i < k; ++i) {
    out = mul(out, a);
    if (out.is_zero()) break;
  }
  return out;
}

std::pair<SmoothExpr, SuperElement> body_soul(const SuperElement& a) { return {a.body(), a.soul()}; }

SmoothExpr superreduce(const SuperElement& a) { return a.body(); }

}  // namespace csr

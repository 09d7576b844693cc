#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "csr/smooth_expr.hpp"

namespace csr {

/// A sorted set of odd-generator indices, stored as a bitmask: bit i-1 set
/// means theta_i is present. Supports q <= 32.
using MultiIndex = std::uint32_t;

constexpr int kMaxOdd = 32;

inline int degree(MultiIndex I) { return __builtin_popcount(I); }
inline MultiIndex single(int i) { return MultiIndex{1} << (i - 1); }
std::vector<int> indices(MultiIndex I);
MultiIndex from_indices(const std::vector<int>& idx);
/// "t1t3" style rendering; "" for the empty index.
std::string monomial_string(MultiIndex I);

/// Basis order: by length, then lexicographic on the sorted index lists.
struct MonomialLess {
  bool operator()(MultiIndex a, MultiIndex b) const;
};

/// (-1)^{#{(i, j) : i in I, j in J, i > j}}; 0 when I and J intersect.
int wedge_sign(MultiIndex I, MultiIndex J);

enum class Parity { Even, Odd, Mixed };
const char* to_string(Parity p);

/// An element of C^inf(R^{p|q}): a finitely supported map from theta
/// monomials to coefficient expressions. Coefficients are kept simplified
/// and zero coefficients are dropped.
class SuperElement {
 public:
  using Terms = std::map<MultiIndex, SmoothExpr, MonomialLess>;

  SuperElement() = default;
  SuperElement(int p, int q);

  static SuperElement scalar(const SmoothExpr& f, int p, int q);
  static SuperElement constant(Number c, int p, int q);
  static SuperElement coordinate(int i, int p, int q);  // x_i
  static SuperElement theta(int i, int p, int q);
  static SuperElement monomial(const SmoothExpr& c, MultiIndex I, int p, int q);

  int p() const { return p_; }
  int q() const { return q_; }
  const Terms& terms() const { return terms_; }
  SmoothExpr coeff(MultiIndex I) const;
  bool is_zero() const { return terms_.empty(); }

  Parity parity() const;
  bool is_even() const { return parity() == Parity::Even; }
  bool is_homogeneous() const { return parity() != Parity::Mixed; }
  /// Lowest Grassmann degree in the support, -1 for zero.
  int min_degree() const;
  int max_degree() const;

  SmoothExpr body() const { return coeff(0); }
  SuperElement soul() const;
  SuperElement even_part() const;
  SuperElement odd_part() const;
  SuperElement degree_part(int k) const;

  /// Multiplies every coefficient by f.
  SuperElement scaled(const SmoothExpr& f) const;
  /// Applies fn to each coefficient (result re-canonicalized).
  template <class Fn>
  SuperElement map_coefficients(Fn&& fn) const {
    SuperElement out(p_, q_);
    for (const auto& [I, c] : terms_) out.add_term(I, fn(c));
    return out;
  }

  std::string to_string() const;

  SuperElement& operator+=(const SuperElement& b);
  friend SuperElement operator+(SuperElement a, const SuperElement& b) { return a += b; }
  friend SuperElement operator-(const SuperElement& a, const SuperElement& b);
  friend SuperElement operator-(const SuperElement& a);
  friend SuperElement operator*(const SuperElement& a, const SuperElement& b);
  friend bool operator==(const SuperElement& a, const SuperElement& b);
  friend bool operator!=(const SuperElement& a, const SuperElement& b) { return !(a == b); }

  /// Adds c*theta^I; c need not be simplified.
  void add_term(MultiIndex I, const SmoothExpr& c);

 private:
  int p_ = 0;
  int q_ = 0;
  Terms terms_;
};

void check_same_arity(const SuperElement& a, const SuperElement& b);

SuperElement mul(const SuperElement& a, const SuperElement& b);
SuperElement power(const SuperElement& a, int k);
std::pair<SmoothExpr, SuperElement> body_soul(const SuperElement& a);
SmoothExpr superreduce(const SuperElement& a);

}  // namespace csr

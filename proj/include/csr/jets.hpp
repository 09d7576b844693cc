#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "csr/grassmann.hpp"

namespace csr {

/// Monomials of total degree <= order in p variables, with a product table.
class JetSpace {
 public:
  static std::shared_ptr<const JetSpace> get(int p, int order);

  int p() const { return p_; }
  int order() const { return order_; }
  std::size_t size() const { return monomials_.size(); }
  const std::vector<int>& monomial(std::size_t i) const { return monomials_[i]; }
  /// Index of the product monomial, or -1 when it exceeds the order.
  int product(std::size_t i, std::size_t j) const { return table_[i * size() + j]; }
  int index_of(const std::vector<int>& beta) const;
  int degree(std::size_t i) const { return degrees_[i]; }

 private:
  JetSpace(int p, int order);
  int p_;
  int order_;
  std::vector<std::vector<int>> monomials_;
  std::vector<int> degrees_;
  std::map<std::vector<int>, int> index_;
  std::vector<int> table_;
};

/// Truncated Taylor polynomial at a base point in the shifted variables
/// h_i = x_i - a_i.
class Jet {
 public:
  Jet() = default;
  explicit Jet(std::shared_ptr<const JetSpace> space);
  static Jet constant(std::shared_ptr<const JetSpace> space, double c);
  static Jet variable(std::shared_ptr<const JetSpace> space, int i, double base);

  const JetSpace& space() const { return *space_; }
  const std::shared_ptr<const JetSpace>& space_ptr() const { return space_; }
  const std::vector<double>& coefficients() const { return c_; }
  std::vector<double>& coefficients() { return c_; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }
  bool is_zero(double tol = 0.0) const;
  double max_abs() const;

  Jet& operator+=(const Jet& b);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  Jet scaled(double s) const;

  /// Composes a univariate function, given its derivatives d[n] at the
  /// base value, with this jet: sum_n d[n]/n! (u - u0)^n.
  Jet compose(const std::vector<double>& derivatives) const;

  /// Polynomial in h1..hp (or x_i - a_i notation when base is given).
  std::string to_string(const Point& base) const;

 private:
  std::shared_ptr<const JetSpace> space_;
  std::vector<double> c_;
};

struct JetResult {
  Jet jet;
  bool germ_zero = false;  // the germ itself is certified zero (bump outside its support, literal 0)
};

/// Order-k Taylor jet of e at the point a, computed by forward Taylor
/// arithmetic. Throws DomainError if the point is outside the domain.
JetResult jet_of(const SmoothExpr& e, const Point& a, int order);

/// An element of the local ring at a point: jets of every Grassmann
/// coefficient. `exact` is set when all coefficients are polynomials.
class LocalElement {
 public:
  LocalElement() = default;
  LocalElement(Point base, int order, int q);

  const Point& base() const { return base_; }
  int order() const { return order_; }
  int q() const { return q_; }
  bool exact() const { return exact_; }
  void set_exact(bool e) { exact_ = e; }
  /// Every coefficient germ is certified zero (not just its jet).
  bool germ_zero() const { return germ_zero_; }
  void set_germ_zero(bool z) { germ_zero_ = z; }
  const std::map<MultiIndex, Jet, MonomialLess>& terms() const { return terms_; }
  std::shared_ptr<const JetSpace> space() const { return space_; }

  void add(MultiIndex I, const Jet& j);
  bool is_zero(double tol) const;
  /// Largest coefficient difference.
  friend double distance(const LocalElement& a, const LocalElement& b);
  friend LocalElement operator*(const LocalElement& a, const LocalElement& b);
  friend LocalElement operator+(const LocalElement& a, const LocalElement& b);
  /// Flattened coefficient vector over (theta monomial, jet monomial).
  std::vector<double> to_vector() const;
  std::string to_string() const;

 private:
  Point base_;
  int order_ = 0;
  int q_ = 0;
  bool exact_ = true;
  bool germ_zero_ = true;
  std::shared_ptr<const JetSpace> space_;
  std::map<MultiIndex, Jet, MonomialLess> terms_;
};

/// L_x: the jet of every coefficient of r at x.
LocalElement localize(const SuperElement& r, const Point& x, int order);

}  // namespace csr

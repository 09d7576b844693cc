#pragma once

#include <cstdint>
#include <string>

namespace csr {

/// A real constant appearing in expression trees.
///
/// Constants are kept as exact rationals (64-bit numerator and denominator)
/// whenever possible so that Taylor factors such as 1/alpha! and integer
/// arithmetic on coefficients cancel exactly. Operations that overflow, or
/// that involve an inexact operand, fall back to IEEE doubles.
class Number {
 public:
  Number() = default;
  Number(long long value);  // NOLINT: integers convert implicitly

  static Number rational(long long num, long long den);
  /// Integral doubles (|v| < 2^53) are stored exactly.
  static Number real(double value);

  bool is_exact() const { return exact_; }
  double value() const;
  long long numerator() const { return num_; }
  long long denominator() const { return den_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_integer() const;
  bool is_negative() const { return value() < 0.0; }

  Number operator-() const;
  friend Number operator+(const Number& a, const Number& b);
  friend Number operator-(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  /// Throws DomainError on division by an exact zero.
  friend Number operator/(const Number& a, const Number& b);
  Number pow(int exponent) const;

  /// Structural equality: exact values compare as rationals, reals bitwise.
  friend bool operator==(const Number& a, const Number& b);
  friend bool operator!=(const Number& a, const Number& b) { return !(a == b); }
  /// Total order used for canonical sorting.
  static int compare(const Number& a, const Number& b);

  /// "3", "-1/6", "0.1", "1e-07". Reals always carry a '.' or an exponent so
  /// that they parse back as reals.
  std::string to_string() const;
  std::size_t hash() const;

 private:
  bool exact_ = true;
  long long num_ = 0;
  long long den_ = 1;
  double real_ = 0.0;
};

/// Factorial as an exact Number (falls back to a double past 20!).
Number factorial(int n);

}  // namespace csr

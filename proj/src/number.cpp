#include "csr/number.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <functional>
#include <numeric>

#include "csr/errors.hpp"

namespace csr {

namespace {

using i128 = __int128;

constexpr double kExactLimit = 9007199254740992.0;  // 2^53

bool fits(i128 v) {
  return v <= static_cast<i128>(INT64_MAX) && v >= -static_cast<i128>(INT64_MAX);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Reduces and range-checks; falls back to a double on overflow.
Number make(i128 num, i128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (fits(num) && fits(den)) return Number::rational(static_cast<long long>(num), static_cast<long long>(den));
  return Number::real(static_cast<double>(num) / static_cast<double>(den));
}

}  // namespace

Number::Number(long long value) : exact_(true), num_(value), den_(1) {}

Number Number::rational(long long num, long long den) {
  if (den == 0) throw DomainError("division by zero", std::to_string(num) + "/0");
  Number n;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  n.exact_ = true;
  n.num_ = num;
  n.den_ = den;
  return n;
}

Number Number::real(double value) {
  if (std::isfinite(value) && std::fabs(value) < kExactLimit && std::floor(value) == value) {
    return Number(static_cast<long long>(value));
  }
  Number n;
  n.exact_ = false;
  n.real_ = value;
  return n;
}

double Number::value() const {
  return exact_ ? static_cast<double>(num_) / static_cast<double>(den_) : real_;
}

bool Number::is_zero() const { return exact_ ? num_ == 0 : real_ == 0.0; }
bool Number::is_one() const { return exact_ && num_ == 1 && den_ == 1; }
bool Number::is_integer() const { return exact_ && den_ == 1; }

Number Number::operator-() const {
  if (exact_) return Number::rational(-num_, den_);
  return Number::real(-real_);
}

Number operator+(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) {
    return make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                static_cast<i128>(a.den_) * b.den_);
  }
  return Number::real(a.value() + b.value());
}

Number operator-(const Number& a, const Number& b) { return a + (-b); }

Number operator*(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) {
    return make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
  }
  return Number::real(a.value() * b.value());
}

Number operator/(const Number& a, const Number& b) {
  if (b.is_zero()) throw DomainError("division by zero", a.to_string() + "/" + b.to_string());
  if (a.exact_ && b.exact_) {
    return make(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
  }
  return Number::real(a.value() / b.value());
}

Number Number::pow(int exponent) const {
  if (exponent < 0) return Number(1) / pow(-exponent);
  Number result(1);
  Number base = *this;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    base = base * base;
    exponent >>= 1;
  }
  return result;
}

bool operator==(const Number& a, const Number& b) {
  if (a.exact_ != b.exact_) return false;
  if (a.exact_) return a.num_ == b.num_ && a.den_ == b.den_;
  return std::memcmp(&a.real_, &b.real_, sizeof(double)) == 0;
}

int Number::compare(const Number& a, const Number& b) {
  double va = a.value();
  double vb = b.value();
  if (va < vb) return -1;
  if (va > vb) return 1;
  if (a.exact_ != b.exact_) return a.exact_ ? -1 : 1;
  if (a.exact_) {
    i128 l = static_cast<i128>(a.num_) * b.den_;
    i128 r = static_cast<i128>(b.num_) * a.den_;
    return l < r ? -1 : (l > r ? 1 : 0);
  }
  return 0;
}

std::string Number::to_string() const {
  if (exact_) {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), real_);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::size_t Number::hash() const {
  if (exact_) return std::hash<long long>{}(num_) * 31u + std::hash<long long>{}(den_);
  return std::hash<double>{}(real_) ^ 0x9e3779b97f4a7c15ull;
}

Number factorial(int n) {
  Number result(1);
  for (int i = 2; i <= n; ++i) result = result * Number(i);
  return result;
}

}  // namespace csr

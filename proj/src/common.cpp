#include "csr/common.hpp"

#include <algorithm>
#include <cmath>

namespace csr {

Box Box::cube(int dim, double lo, double hi) {
  Box b;
  b.lo.assign(static_cast<std::size_t>(dim), lo);
  b.hi.assign(static_cast<std::size_t>(dim), hi);
  return b;
}

bool Box::contains(const Point& x, double slack) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
  }
  return true;
}

Point Box::sample(std::mt19937_64& rng) const {
  Point x(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    std::uniform_real_distribution<double> d(lo[i], hi[i]);
    x[i] = d(rng);
  }
  return x;
}

const char* to_string(Provenance p) { return p == Provenance::Exact ? "exact" : "sampled"; }

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

bool nearly_equal(double a, double b, double rel, double abs_floor) {
  double diff = std::fabs(a - b);
  return diff <= abs_floor || diff <= rel * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace csr

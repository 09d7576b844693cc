#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace csr {

/// A point of R^p.
using Point = std::vector<double>;

/// Axis-aligned sampling region.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box cube(int dim, double lo, double hi);
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Point& x, double slack = 0.0) const;
  Point sample(std::mt19937_64& rng) const;
};

struct Tolerances {
  double abs = 1e-12;  // "vanishes"
  double rel = 1e-9;   // equality of samples
};

/// Whether a verdict was established symbolically or by sampling.
enum class Provenance { Exact, Sampled };

const char* to_string(Provenance p);

/// Deterministic per-task seed derived from a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

/// Relative comparison with an absolute floor.
bool nearly_equal(double a, double b, double rel, double abs_floor);

}  // namespace csr

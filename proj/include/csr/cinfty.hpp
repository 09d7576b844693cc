#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "csr/grassmann.hpp"

namespace csr {

/// The ring C^inf(R^{p|q}).
struct SplitSuperRing {
  int p = 0;
  int q = 0;
};

enum class TaylorOrder {
  Full,        // all terms up to the nilpotency bound floor(q/2)
  FirstOrder,  // h(a) + sum_i d_i h(a) n_i only
};

/// Phi_h(a_1 + n_1, ..., a_k + n_k) = sum over |alpha| <= floor(q/2) of
/// (1/alpha!) (d^alpha h)(a) n^alpha. Throws ParityError on non-even
/// arguments and ArityError when h uses more variables than arguments given.
SuperElement apply_smooth(const SmoothExpr& h, const std::vector<SuperElement>& args,
                          TaylorOrder order = TaylorOrder::Full);

/// Symbolic equality after simplify, else numeric comparison of every
/// coefficient at `samples` points of [-1,1]^p (relative tolerance rel).
struct EqualityVerdict {
  bool equal = false;
  Provenance provenance = Provenance::Exact;
  std::optional<Point> witness;
  std::string detail;
};
EqualityVerdict super_equal(const SuperElement& a, const SuperElement& b, std::uint64_t seed, int samples = 20,
                            double rel = 1e-8);

struct AxiomFailure {
  int trial = 0;
  std::string description;
  std::string lhs;
  std::string rhs;
  std::optional<Point> witness;
};

struct AxiomReport {
  std::string axiom;
  int trials = 0;
  int passed = 0;
  int exact = 0;    // decided symbolically
  int sampled = 0;  // decided by numeric fallback
  std::vector<AxiomFailure> failures;
  bool ok() const { return failures.empty(); }
};

/// Random even element: coefficients are random trees of the given depth on
/// even monomials of C^inf(R^{p|q}).
SuperElement random_even_element(int p, int q, int depth, std::mt19937_64& rng);

/// Phi_{p_i}(a_1..a_k) = a_i on random arguments.
AxiomReport check_projection_axiom(const SplitSuperRing& ring, int trials, std::uint64_t seed,
                                   TaylorOrder order = TaylorOrder::Full);

/// Phi_{h(g_1..g_n)} = Phi_h(Phi_{g_1}, ..., Phi_{g_n}) on random h, g, and
/// the ring-operation instances Phi_{g_1 g_2} = Phi_{g_1} * Phi_{g_2},
/// Phi_{g_1 + g_2} = Phi_{g_1} + Phi_{g_2}. Trials run on worker threads
/// with per-trial seeds, so the report does not depend on scheduling.
AxiomReport check_composition_axiom(const SplitSuperRing& ring, int trials, std::uint64_t seed,
                                    TaylorOrder order = TaylorOrder::Full);

/// Parses an element of C^inf(R^{p|q}) in the expression grammar extended
/// by theta atoms t1..tq (consecutive atoms multiply: t1t2 = t1*t2).
/// Functions applied to arguments with a soul go through apply_smooth.
SuperElement parse_element(std::string_view text, int p, int q);

}  // namespace csr

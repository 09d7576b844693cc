#pragma once

#include <vector>

#include "csr/morphism.hpp"

namespace csr {

/// J = (theta_1, ..., theta_q): the ideal generated by the odd part.
SuperIdeal canonical_superideal(const QuotientRing& ring);
/// a lies in J + I, i.e. its body vanishes in the reduced quotient.
bool in_canonical_superideal(const SuperElement& a, const QuotientRing& ring);

/// Gr R = (+)_n J^n / J^{n+1} as a split presentation: every relation is
/// replaced by its lowest-degree component in the J-adic filtration.
QuotientRing associated_graded(const QuotientRing& ring);

/// The even part R_0 as a C^inf-ring presentation C^inf(R^p) / (...), for
/// free rings with q <= 1 and for a single relation x_i^k + c*t_a t_b with
/// q = 2, where t_a t_b = -x_i^k / c and (t_a t_b)^2 = 0 give (x_i^{2k}).
std::optional<QuotientRing> even_part_presentation(const QuotientRing& ring);

/// Real dimensions of the graded pieces J^n / J^{n+1}, n = 0..q, of the
/// local ring at x in the order-k jet model.
std::vector<int> graded_dimensions(const QuotientRing& ring, const Point& x, int order);

/// A Weil superalgebra R[theta_1..theta_q] / I with I inside the maximal
/// ideal: a finite-dimensional local algebra R + m, m nilpotent.
class WeilSuperAlgebra {
 public:
  /// Throws ParityError for inhomogeneous relations and ArityError when a
  /// relation has a nonzero constant term or a nonconstant coefficient.
  WeilSuperAlgebra(int q, std::vector<SuperElement> relations);

  int q() const { return q_; }
  const std::vector<SuperElement>& relations() const { return relations_; }
  /// Standard monomials: a basis of the quotient.
  const std::vector<MultiIndex>& basis() const { return basis_; }
  int dimension() const { return static_cast<int>(basis_.size()); }
  /// dim m, the span of the standard monomials of positive degree.
  int maximal_ideal_dimension() const;
  /// Smallest N with m^N = 0.
  int nilpotency_index() const;

  /// Canonical representative in the span of the standard monomials.
  SuperElement reduce(const SuperElement& a) const;
  SuperElement element(std::string_view text) const;
  std::string to_string() const;

 private:
  int q_;
  std::vector<SuperElement> relations_;
  std::vector<MultiIndex> pivots_;               // leading monomial per row
  std::vector<std::vector<Number>> rows_;        // reduced echelon form over 2^q monomials
  std::vector<MultiIndex> basis_;
};

/// Phi_h on a Weil superalgebra: the full Taylor sum, then reduction.
SuperElement weil_apply(const SmoothExpr& h, const std::vector<SuperElement>& args, const WeilSuperAlgebra& W);

}  // namespace csr

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csr/spectrum.hpp"

namespace csr {

/// A morphism of finitely presented C^inf-superrings, determined by the
/// images of the even and odd generators of the domain.
class Morphism {
 public:
  Morphism() = default;
  /// Validates arities, parities and that every domain generator maps to 0
  /// in the codomain; throws IllFormedMorphism otherwise.
  Morphism(QuotientRing domain, QuotientRing codomain, std::vector<SuperElement> even_images,
           std::vector<SuperElement> odd_images, std::uint64_t seed = 0);

  static Morphism identity(const QuotientRing& ring);

  const QuotientRing& domain() const { return domain_; }
  const QuotientRing& codomain() const { return codomain_; }
  const std::vector<SuperElement>& even_images() const { return even_; }
  const std::vector<SuperElement>& odd_images() const { return odd_; }
  /// How the generator check was settled.
  Provenance well_formedness() const { return provenance_; }

  /// Coefficients f become Phi_f(even images), theta^I the ordered product
  /// of odd images; the result is in codomain normal form.
  SuperElement apply(const SuperElement& r) const;
  /// The same substitution without the final normal form.
  SuperElement apply_unreduced(const SuperElement& r) const;

  std::string to_string() const;

 private:
  QuotientRing domain_;
  QuotientRing codomain_;
  std::vector<SuperElement> even_;
  std::vector<SuperElement> odd_;
  Provenance provenance_ = Provenance::Exact;
};

/// phi o psi (first psi, then phi).
Morphism compose(const Morphism& phi, const Morphism& psi);

/// Generator images agree in the codomain.
bool same_morphism(const Morphism& a, const Morphism& b, std::uint64_t seed = 0);

// ------------------------------------------------------------------ functors

/// F(R) = R / J_R = C^inf(R^p) / (reduced ideal).
QuotientRing superreduction(const QuotientRing& ring);
/// F(phi): x_i -> body of phi(x_i).
Morphism superreduction_functor(const Morphism& phi);
/// G: a C^inf-ring morphism (q = 0 on both sides) seen as a superring morphism.
Morphism trivial_extension(const Morphism& psi);
/// mu: Hom(R, G(c)) -> Hom(F(R), c).
Morphism adjunction_mu(const Morphism& phi);
/// mu^{-1}: Hom(F(R), c) -> Hom(R, G(c)), composing with R -> F(R).
Morphism adjunction_mu_inverse(const Morphism& psi, const QuotientRing& R);

// ------------------------------------------------------------------ coproduct

struct Coproduct {
  QuotientRing ring;
  Morphism alpha;  // R -> T
  Morphism beta;   // S -> T
};

/// Coproduct of split presentations: T = C^inf(R^{a+b|q+n}) / (I u shifted H).
/// Throws IllFormedMorphism when a generator has a nonzero soul.
Coproduct coproduct(const QuotientRing& R, const QuotientRing& S);

struct UniversalPropertyReport {
  bool exists = false;
  bool commutes_alpha = false;
  bool commutes_beta = false;
  bool unique = false;  // among generator-determined morphisms
  std::optional<Morphism> u;
  std::string detail;
  bool ok() const { return exists && commutes_alpha && commutes_beta && unique; }
};

UniversalPropertyReport universal_property_check(const Coproduct& c, const Morphism& phi, const Morphism& psi);

// ------------------------------------------------------------------ spectrum functor

/// f_phi(x) = x o phi: codomain R-point to domain R-point.
Point point_map(const Morphism& phi, const Point& x);
std::vector<Point> spec_functor(const Morphism& phi, const std::vector<Point>& codomain_points);

/// The jet-level map L_y(domain) -> L_x(codomain) with y = f_phi(x). Domain
/// jets carry order k + floor(q/2) so that the square closes at order k.
class JetMorphism {
 public:
  JetMorphism(const Morphism& phi, Point x, int order);
  const Point& x() const { return x_; }
  const Point& y() const { return y_; }
  int order() const { return order_; }
  int source_order() const { return source_order_; }
  LocalElement operator()(const LocalElement& ly) const;
  /// Largest deviation of L_x(phi(r)) from the image of L_y(r) over the probes.
  double square_defect(const std::vector<SuperElement>& probes) const;

 private:
  Morphism phi_;
  Point x_;
  Point y_;
  int order_;
  int source_order_;
  std::vector<LocalElement> shifted_even_;  // L_x(phi(x_i)) - y_i
  std::vector<LocalElement> odd_;           // L_x(phi(theta_j))
};

JetMorphism localize_morphism(const Morphism& phi, const Point& x, int order = kDefaultJetOrder);

struct AdjunctionReport {
  std::size_t points = 0;
  std::size_t probes = 0;
  bool sheaf_square = false;         // R(L(phi)) and phi give the same sections
  bool point_map = false;            // L(R(f, f#)) recovers f
  bool elements_recovered = false;   // sections determine the images (codomain fair on them)
  std::vector<SuperElement> lost;    // probe images killed by fairfication
  std::string detail;
  bool ok() const { return sheaf_square && point_map && elements_recovered; }
};

/// Round trip through the adjunction between superrings and locally
/// superringed spaces, checked on the sampled R-points of the codomain.
AdjunctionReport adjunction_roundtrip(const Morphism& phi, const std::vector<SuperElement>& probes,
                                      const SamplerConfig& cfg, int order = kDefaultJetOrder);

}  // namespace csr

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csr/grassmann.hpp"

namespace csr {

/// A superideal of C^inf(R^{p|q}) given by homogeneous generators.
class SuperIdeal {
 public:
  SuperIdeal() = default;
  SuperIdeal(int p, int q) : p_(p), q_(q) {}
  /// Throws ParityError for a mixed generator, ArityError on a size mismatch.
  SuperIdeal(int p, int q, std::vector<SuperElement> generators);

  int p() const { return p_; }
  int q() const { return q_; }
  const std::vector<SuperElement>& generators() const { return generators_; }
  bool empty() const { return generators_.empty(); }

  /// Bodies of the even generators that are not literally zero: generators
  /// of the reduced ideal in C^inf(R^p).
  std::vector<SmoothExpr> reduced_generators() const;

  std::string to_string() const;

 private:
  int p_ = 0;
  int q_ = 0;
  std::vector<SuperElement> generators_;
};

/// Ideal generated by all pairwise products.
SuperIdeal ideal_product(const SuperIdeal& a, const SuperIdeal& b);
/// Ideal generated by the union of both generator lists.
SuperIdeal ideal_sum(const SuperIdeal& a, const SuperIdeal& b);

/// One oriented rule x^exponents * (factors) * theta^theta -> rhs. The
/// transcendental factors occur only for single-term generators (rhs = 0).
struct RewriteRule {
  std::size_t generator = 0;
  MultiIndex theta = 0;
  std::vector<int> exponents;
  std::vector<std::pair<SmoothExpr, int>> factors;
  SuperElement rhs;
  std::string lhs_string() const;
  std::string to_string() const;
};

struct RewriteSystem {
  int p = 0;
  int q = 0;
  std::vector<RewriteRule> rules;
};

/// Picks each generator's leading term (lowest Grassmann degree first, then
/// canonical theta order, then degrevlex on x) and orients it to minus the
/// rest. The leading term must carry a pure numeric coefficient unless the
/// generator is a single term, which rewrites to 0; otherwise
/// UnorientableGenerator lists the offending generator indices.
RewriteSystem orient(const SuperIdeal& ideal);

/// C^inf(R^{p|q}) / I with a rewrite-based normal form.
class QuotientRing {
 public:
  QuotientRing() = default;
  QuotientRing(int p, int q);
  explicit QuotientRing(SuperIdeal ideal);

  int p() const { return ideal_.p(); }
  int q() const { return ideal_.q(); }
  const SuperIdeal& ideal() const { return ideal_; }
  const RewriteSystem& rules() const { return rules_; }
  bool is_free() const { return ideal_.empty(); }

  /// Exhaustive rewriting to a fixpoint; idempotent.
  SuperElement normal_form(const SuperElement& a) const;
  bool reduces_to_zero(const SuperElement& a) const { return normal_form(a).is_zero(); }

  SuperElement element(std::string_view text) const;
  std::string to_string() const;

 private:
  SuperIdeal ideal_;
  RewriteSystem rules_;
};

// ------------------------------------------------------------------ zero sets

struct SamplerConfig {
  Box box;               // defaults to [-2, 2]^p when empty
  int grid = 9;          // grid points per axis for Newton starts
  std::uint64_t seed = 0;
  int max_iterations = 60;
  double residual = 1e-9;  // |g(x)| accepted as a zero
  double dedup = 1e-6;
  double vanish = 1e-8;    // |f(z)| treated as f vanishing at a sampled zero
};

Box effective_box(const SamplerConfig& cfg, int p);

struct ZeroSet {
  std::vector<Point> points;  // lexicographically sorted, deduplicated
  bool whole_space = false;   // no nonzero generators: Z = R^p (points are samples)
  bool empty_exact = false;   // a generator is a nonzero constant
};

/// Samples Z(f_1, ..., f_m) inside the box: grid starts refined by
/// Gauss-Newton on the zero surrogates, accepted when every original f_j
/// is below the residual threshold.
ZeroSet find_zeros(const std::vector<SmoothExpr>& fs, int p, const SamplerConfig& cfg);

/// Sampled evidence that f is not in the ideal generated by gens: the ratio
/// |f| / sqrt(sum g_j^2) grows without bound when approaching a zero.
bool diverges_near(const SmoothExpr& f, const std::vector<SmoothExpr>& gens, const std::vector<Point>& zeros,
                   std::uint64_t seed, Point* where = nullptr);

enum class Membership { In, Out, Unknown };
const char* to_string(Membership m);

struct RadicalVerdict {
  Membership kind = Membership::Unknown;
  Provenance provenance = Provenance::Sampled;
  std::optional<Point> witness;
  std::string reason;
};

/// Membership in the C^inf-radical: odd and nilpotent elements are always
/// in; otherwise the body must vanish on the sampled zero set of the
/// reduced ideal.
RadicalVerdict radical_membership(const SuperElement& a, const QuotientRing& ring, const SamplerConfig& cfg);
/// The same test for a function of C^inf(R^p) against an ideal given by generators.
RadicalVerdict radical_membership(const SmoothExpr& f, const std::vector<SmoothExpr>& gens, int p,
                                  const SamplerConfig& cfg);

enum class Decision { Yes, No, Unknown };
const char* to_string(Decision d);

struct SuperreducedVerdict {
  Decision kind = Decision::Unknown;
  Provenance provenance = Provenance::Sampled;
  std::optional<SuperElement> witness;  // C^inf-nilpotent element outside J
  std::optional<Point> point;
  std::string reason;
};

SuperreducedVerdict is_cinfty_superreduced(const QuotientRing& ring, const SamplerConfig& cfg);

enum class Splitness { Split, NotSplit, Unknown };
const char* to_string(Splitness s);

struct SplitVerdict {
  Splitness kind = Splitness::Unknown;
  Provenance provenance = Provenance::Exact;
  std::string section;                      // for Split
  std::optional<std::pair<int, int>> obstruction;  // nilpotency order in the reduced ring vs the even part
  std::string reason;
};

SplitVerdict is_split(const QuotientRing& ring);

/// Smallest n <= limit with nf(f^n) = 0, or nullopt.
std::optional<int> nilpotency_order(const SuperElement& f, const QuotientRing& ring, int limit);

}  // namespace csr

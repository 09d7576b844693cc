#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "csr/common.hpp"
#include "csr/number.hpp"

namespace csr {

/// Node kinds of the smooth expression language.
///
/// Flat(u) denotes exp(-1/u^2) extended by 0 at u = 0. Bump(u, a, b) denotes
/// exp(-1/((u-a)(b-u))) on a < u < b and 0 elsewhere; a and b are constants.
enum class Op : std::uint8_t { Const, Var, Add, Mul, Div, Pow, Exp, Log, Sin, Cos, Tan, Sqrt, Flat, Bump };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  Op op = Op::Const;
  Number value;               // Const
  int index = 0;              // Var: 1-based index; Pow: integer exponent
  std::vector<NodePtr> args;  // Add/Mul: n-ary; Div: 2; Pow and functions: 1; Bump: 3
  std::size_t hash = 0;
  int max_var = 0;  // largest variable index occurring below this node
};

/// An element of C^inf(R^p) written in closed form.
///
/// Values are immutable and cheap to copy. The arity p is carried with the
/// value; every variable index lies in 1..p. Binary operators build raw
/// trees (arity = max of the operands); call simplify() for canonical form.
class SmoothExpr {
 public:
  SmoothExpr();  // the constant 0

  static SmoothExpr constant(Number value, int arity = 0);
  static SmoothExpr var(int index, int arity = 0);
  static SmoothExpr apply(Op fn, const SmoothExpr& arg);
  static SmoothExpr bump(const SmoothExpr& u, Number a, Number b);
  static SmoothExpr pow(const SmoothExpr& base, int exponent);
  static SmoothExpr sum(const std::vector<SmoothExpr>& terms);
  static SmoothExpr product(const std::vector<SmoothExpr>& factors);
  static SmoothExpr from_node(NodePtr node, int arity);

  const NodePtr& node() const { return node_; }
  const ExprNode& operator*() const { return *node_; }
  const ExprNode* operator->() const { return node_.get(); }
  Op op() const { return node_->op; }

  int arity() const { return arity_; }
  /// Re-declares the ambient dimension; throws ArityError if a variable
  /// index exceeds p.
  SmoothExpr with_arity(int p) const;

  bool is_constant() const { return node_->op == Op::Const; }
  bool is_zero_literal() const { return is_constant() && node_->value.is_zero(); }
  bool is_one_literal() const { return is_constant() && node_->value.is_one(); }
  /// True when built only from constants, variables, +, * and non-negative powers.
  bool is_polynomial() const;

  std::string to_string() const;

  friend SmoothExpr operator+(const SmoothExpr& a, const SmoothExpr& b);
  friend SmoothExpr operator-(const SmoothExpr& a, const SmoothExpr& b);
  friend SmoothExpr operator*(const SmoothExpr& a, const SmoothExpr& b);
  friend SmoothExpr operator/(const SmoothExpr& a, const SmoothExpr& b);
  friend SmoothExpr operator-(const SmoothExpr& a);

  /// Structural equality of trees (arity is not compared).
  friend bool operator==(const SmoothExpr& a, const SmoothExpr& b);
  friend bool operator!=(const SmoothExpr& a, const SmoothExpr& b) { return !(a == b); }

 private:
  SmoothExpr(NodePtr node, int arity) : node_(std::move(node)), arity_(arity) {}
  NodePtr node_;
  int arity_ = 0;
};

/// Total order on trees used for canonical sorting.
int compare(const NodePtr& a, const NodePtr& b);
bool same_tree(const NodePtr& a, const NodePtr& b);
struct ExprLess {
  bool operator()(const SmoothExpr& a, const SmoothExpr& b) const { return compare(a.node(), b.node()) < 0; }
};

const char* op_name(Op op);

/// Parses the expression grammar; throws ParseError on syntax errors,
/// unknown identifiers, theta atoms and variable indices above p.
SmoothExpr parse_expr(std::string_view text, int arity);

/// IEEE evaluation. flat(0) and bump outside its interval are exact zeros
/// that absorb poles in products (so (2/u^3)*flat(u) evaluates to 0 at
/// u = 0). Throws DomainError naming the offending subexpression.
double eval(const SmoothExpr& e, const Point& x);

/// Symbolic partial derivative with respect to x_i (1-based), simplified.
SmoothExpr partial(const SmoothExpr& e, int i);

/// Semantics-preserving canonical form: flattens sums and products, folds
/// constants, collects like terms and equal bases, expands products of sums
/// below a size cap. Never rewrites across domain restrictions (x/x stays).
SmoothExpr simplify(const SmoothExpr& e);

/// Replaces x_i by args[i-1]; the result has the given arity.
SmoothExpr substitute(const SmoothExpr& e, const std::vector<SmoothExpr>& args, int arity);

enum class ZeroKind { Zero, NonZero, Unknown };

struct ZeroVerdict {
  ZeroKind kind = ZeroKind::Unknown;
  Provenance provenance = Provenance::Sampled;
  std::optional<Point> witness;
  double witness_value = 0.0;
};

const char* to_string(ZeroKind k);

/// Three-valued zero test: exact when simplify yields literal 0, otherwise
/// by sampling `samples` seeded points of the box.
ZeroVerdict is_zero(const SmoothExpr& e, const Box& box, int samples, std::uint64_t seed,
                    const Tolerances& tol = {});

/// Random tree over {+, *, sin, exp}, variables x1..x_arity and small integers.
SmoothExpr random_expr(int arity, int depth, std::mt19937_64& rng);

/// An expression with the same real zero set, better conditioned for Newton
/// refinement: powers drop to their base, flat(u) becomes u, exp and nonzero
/// constant factors disappear from products.
SmoothExpr zero_surrogate(const SmoothExpr& e);

}  // namespace csr

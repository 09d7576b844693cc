#include "csr/structure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "csr/cinfty.hpp"
#include "csr/errors.hpp"

namespace csr {

SuperIdeal canonical_superideal(const QuotientRing& ring) {
  std::vector<SuperElement> gens;
  for (int j = 1; j <= ring.q(); ++j) gens.push_back(SuperElement::theta(j, ring.p(), ring.q()));
  return SuperIdeal(ring.p(), ring.q(), gens);
}

bool in_canonical_superideal(const SuperElement& a, const QuotientRing& ring) {
  SmoothExpr body = ring.normal_form(a).body();
  return superreduction(ring).reduces_to_zero(SuperElement::scalar(body, ring.p(), 0));
}

QuotientRing associated_graded(const QuotientRing& ring) {
  std::vector<SuperElement> initial;
  for (const auto& g : ring.ideal().generators()) initial.push_back(g.degree_part(g.min_degree()));
  return QuotientRing(SuperIdeal(ring.p(), ring.q(), initial));
}

std::optional<QuotientRing> even_part_presentation(const QuotientRing& ring) {
  const int p = ring.p();
  if (ring.is_free() && ring.q() <= 1) return QuotientRing(p, 0);
  if (ring.q() != 2 || ring.ideal().generators().size() != 1) return std::nullopt;
  const SuperElement& g = ring.ideal().generators().front();
  SuperElement soul = g.soul();
  if (soul.terms().size() != 1 || soul.terms().begin()->first != (single(1) | single(2)) ||
      !simplify(soul.terms().begin()->second).is_constant()) {
    return std::nullopt;
  }
  SmoothExpr body = simplify(g.body());
  for (int i = 1; i <= p; ++i) {
    for (int k = 1; k <= 16; ++k) {
      if (body != simplify(SmoothExpr::pow(SmoothExpr::var(i, p), k))) continue;
      SuperElement rel = SuperElement::scalar(SmoothExpr::pow(SmoothExpr::var(i, p), 2 * k), p, 0);
      return QuotientRing(SuperIdeal(p, 0, {rel}));
    }
  }
  return std::nullopt;
}

namespace {

int rank_of(const std::vector<std::vector<double>>& cols, std::size_t dim) {
  if (cols.empty()) return 0;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < dim; ++i) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

}  // namespace

std::vector<int> graded_dimensions(const QuotientRing& ring, const Point& x, int order) {
  auto space = JetSpace::get(ring.p(), order);
  const std::size_t nj = space->size();
  const std::size_t n_theta = std::size_t{1} << ring.q();
  const std::size_t dim = nj * n_theta;
  std::vector<std::vector<double>> ideal = local_ideal_span(ring, x, order);
  // V_n = I + J^n; dim J^n / J^{n+1} = rank V_n - rank V_{n+1}
  std::vector<int> ranks;
  for (int n = 0; n <= ring.q() + 1; ++n) {
    std::vector<std::vector<double>> cols = ideal;
    for (MultiIndex J = 0; J < n_theta; ++J) {
      if (degree(J) < n) continue;
      for (std::size_t b = 0; b < nj; ++b) {
        std::vector<double> e(dim, 0.0);
        e[J * nj + b] = 1.0;
        cols.push_back(std::move(e));
      }
    }
    ranks.push_back(rank_of(cols, dim));
  }
  std::vector<int> dims;
  for (int n = 0; n <= ring.q(); ++n) {
    dims.push_back(ranks[static_cast<std::size_t>(n)] - ranks[static_cast<std::size_t>(n + 1)]);
  }
  return dims;
}

// ---------------------------------------------------------------- Weil superalgebras

namespace {

using Vec = std::vector<Number>;

bool negligible(const Number& v) { return v.is_zero() || (!v.is_exact() && std::fabs(v.value()) <= 1e-12); }

Vec to_vec(const SuperElement& a, int q) {
  Vec v(std::size_t{1} << q, Number(0));
  for (const auto& [I, c] : a.terms()) {
    SmoothExpr s = simplify(c);
    if (!s.is_constant()) {
      throw ArityError("Weil superalgebra elements have constant coefficients; got " + s.to_string());
    }
    v[I] = s->value;
  }
  return v;
}

SuperElement from_vec(const Vec& v, int q) {
  SuperElement out(0, q);
  for (MultiIndex I = 0; I < v.size(); ++I) {
    if (!negligible(v[I])) out.add_term(I, SmoothExpr::constant(v[I]));
  }
  return out;
}

// Reduced echelon form with the largest monomial of each row as pivot.
struct Echelon {
  std::vector<MultiIndex> pivots;
  std::vector<Vec> rows;

  void reduce(Vec& v) const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Number f = v[pivots[r]];
      if (negligible(f)) continue;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!rows[r][i].is_zero()) v[i] = v[i] - f * rows[r][i];
      }
      v[pivots[r]] = Number(0);
    }
    for (auto& c : v) {
      if (negligible(c)) c = Number(0);
    }
  }

  bool insert(Vec v) {
    reduce(v);
    std::optional<MultiIndex> pivot;
    for (MultiIndex I = 0; I < v.size(); ++I) {
      if (!v[I].is_zero() && (!pivot || MonomialLess{}(*pivot, I))) pivot = I;
    }
    if (!pivot) return false;
    const Number inv = Number(1) / v[*pivot];
    for (auto& c : v) c = c * inv;
    v[*pivot] = Number(1);
    for (auto& row : rows) {
      const Number f = row[*pivot];
      if (f.is_zero()) continue;
      for (std::size_t i = 0; i < row.size(); ++i) row[i] = row[i] - f * v[i];
      row[*pivot] = Number(0);
    }
    pivots.push_back(*pivot);
    rows.push_back(std::move(v));
    return true;
  }
};

}  // namespace

WeilSuperAlgebra::WeilSuperAlgebra(int q, std::vector<SuperElement> relations) : q_(q) {
  SuperIdeal ideal(0, q, relations);  // validates arity and homogeneity
  relations_ = ideal.generators();
  Echelon ech;
  for (const auto& g : relations_) {
    if (!simplify(g.body()).is_zero_literal()) {
      throw ArityError("a Weil superalgebra needs relations inside the maximal ideal; " + g.to_string() +
                       " has a nonzero constant term");
    }
    for (MultiIndex J = 0; J < (MultiIndex{1} << q); ++J) {
      ech.insert(to_vec(mul(SuperElement::monomial(SmoothExpr::constant(Number(1)), J, 0, q), g), q));
    }
  }
  pivots_ = ech.pivots;
  rows_ = ech.rows;
  for (MultiIndex I = 0; I < (MultiIndex{1} << q); ++I) {
    if (std::find(pivots_.begin(), pivots_.end(), I) == pivots_.end()) basis_.push_back(I);
  }
  std::sort(basis_.begin(), basis_.end(), MonomialLess{});
}

int WeilSuperAlgebra::maximal_ideal_dimension() const {
  return static_cast<int>(std::count_if(basis_.begin(), basis_.end(), [](MultiIndex I) { return I != 0; }));
}

SuperElement WeilSuperAlgebra::reduce(const SuperElement& a) const {
  if (a.p() != 0 || a.q() != q_) throw ArityError("element does not belong to this Weil superalgebra");
  Vec v = to_vec(a, q_);
  Echelon ech{pivots_, rows_};
  ech.reduce(v);
  return from_vec(v, q_);
}

int WeilSuperAlgebra::nilpotency_index() const {
  std::vector<SuperElement> m;
  for (MultiIndex I : basis_) {
    if (I != 0) m.push_back(SuperElement::monomial(SmoothExpr::constant(Number(1)), I, 0, q_));
  }
  std::vector<SuperElement> power = m;
  for (int n = 1;; ++n) {
    if (power.empty()) return n;
    Echelon next;
    for (const auto& a : power) {
      for (const auto& b : m) {
        SuperElement r = reduce(mul(a, b));
        if (!r.is_zero()) next.insert(to_vec(r, q_));
      }
    }
    power.clear();
    for (const auto& row : next.rows) power.push_back(from_vec(row, q_));
  }
}

SuperElement WeilSuperAlgebra::element(std::string_view text) const { return reduce(parse_element(text, 0, q_)); }

std::string WeilSuperAlgebra::to_string() const {
  std::string s = "R[";
  for (int j = 1; j <= q_; ++j) s += (j > 1 ? ", t" : "t") + std::to_string(j);
  s += "]";
  if (relations_.empty()) return s;
  s += " / (";
  for (std::size_t i = 0; i < relations_.size(); ++i) s += (i ? ", " : "") + relations_[i].to_string();
  return s + ")";
}

SuperElement weil_apply(const SmoothExpr& h, const std::vector<SuperElement>& args, const WeilSuperAlgebra& W) {
  std::vector<SuperElement> reduced;
  for (const auto& a : args) reduced.push_back(W.reduce(a));
  return W.reduce(apply_smooth(h, reduced));
}

}  // namespace csr

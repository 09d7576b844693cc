#include "csr/spectrum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "csr/errors.hpp"

namespace csr {

ZeroSet find_rpoints(const QuotientRing& Q, const SamplerConfig& cfg) {
  return find_zeros(Q.ideal().reduced_generators(), Q.p(), cfg);
}

std::vector<std::vector<double>> local_ideal_span(const QuotientRing& Q, const Point& x, int order) {
  auto space = JetSpace::get(Q.p(), order);
  std::size_t n_theta = std::size_t{1} << Q.q();
  std::vector<std::vector<double>> cols;
  for (const auto& g : Q.ideal().generators()) {
    LocalElement lg = localize(g, x, order);
    if (lg.is_zero(0.0)) continue;
    for (std::size_t b = 0; b < space->size(); ++b) {
      for (MultiIndex J = 0; J < n_theta; ++J) {
        LocalElement m(x, order, Q.q());
        Jet mono(space);
        mono.coefficients()[b] = 1.0;
        m.add(J, mono);
        LocalElement c = m * lg;
        if (c.is_zero(0.0)) continue;
        cols.push_back(c.to_vector());
      }
    }
  }
  return cols;
}

bool locally_zero(const SuperElement& r, const QuotientRing& Q, const Point& x, int order) {
  LocalElement v = localize(r, x, order);
  if (v.germ_zero()) return true;
  std::vector<double> target = v.to_vector();
  double scale = 1.0;
  for (double t : target) scale = std::max(scale, std::fabs(t));
  if (std::all_of(target.begin(), target.end(), [&](double t) { return std::fabs(t) <= 1e-14 * scale; })) {
    return true;
  }
  std::vector<std::vector<double>> cols = local_ideal_span(Q, x, order);
  if (cols.empty()) return false;
  const auto rows = static_cast<Eigen::Index>(target.size());
  Eigen::MatrixXd A(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      A(i, static_cast<Eigen::Index>(j)) = cols[j][static_cast<std::size_t>(i)];
      scale = std::max(scale, std::fabs(cols[j][static_cast<std::size_t>(i)]));
    }
  }
  Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(target.data(), rows);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  cod.setThreshold(1e-11);
  Eigen::VectorXd c = cod.solve(t);
  double residual = (A * c - t).lpNorm<Eigen::Infinity>();
  return residual <= 1e-8 * scale;
}

PsiVerdict psi_kernel_test(const SuperElement& r, const QuotientRing& Q, const SamplerConfig& cfg, int order) {
  PsiVerdict out;
  SuperElement n = Q.normal_form(r);
  if (n.is_zero()) {
    out.kind = ZeroKind::Zero;
    out.provenance = Provenance::Exact;
    out.reason = "normal form is 0";
    return out;
  }
  if (Q.is_free()) {
    // a germ vanishing at every point is the zero function
    Box box = effective_box(cfg, Q.p());
    for (const auto& [I, c] : n.terms()) {
      ZeroVerdict z = is_zero(c, box, 20, cfg.seed);
      if (z.kind == ZeroKind::NonZero && z.witness) {
        out.kind = ZeroKind::NonZero;
        out.witness = z.witness;
        out.local = localize(n, *z.witness, order);
        out.points_checked = 1;
        out.reason = "coefficient of " + monomial_string(I) + " is nonzero at the witness";
        return out;
      }
      if (z.kind == ZeroKind::Unknown) {
        out.reason = "could not evaluate the coefficient of " + monomial_string(I);
        return out;
      }
    }
    out.kind = ZeroKind::Zero;
    out.reason = "every coefficient vanishes on the samples";
    return out;
  }
  ZeroSet zs = find_rpoints(Q, cfg);
  if (zs.empty_exact) {
    out.kind = ZeroKind::Zero;
    out.provenance = Provenance::Exact;
    out.reason = "the ideal is the unit ideal";
    return out;
  }
  if (zs.points.empty()) {
    out.reason = "no R-points found in the box";
    return out;
  }
  std::size_t skipped = 0;
  for (const auto& x : zs.points) {
    bool zero = false;
    try {
      zero = locally_zero(n, Q, x, order);
    } catch (const DomainError&) {
      ++skipped;
      continue;
    }
    ++out.points_checked;
    if (!zero) {
      out.kind = ZeroKind::NonZero;
      out.witness = x;
      out.local = localize(n, x, order);
      out.reason = "the jet is outside the local ideal";
      return out;
    }
  }
  if (out.points_checked == 0) {
    out.reason = "every R-point lies outside the domain of the jets";
    return out;
  }
  out.kind = ZeroKind::Zero;
  out.reason = "locally zero at " + std::to_string(out.points_checked) + " sampled R-points";
  if (skipped > 0) out.reason += " (" + std::to_string(skipped) + " skipped)";
  return out;
}

GlobalSection global_section(const SuperElement& r, const QuotientRing& Q, const std::vector<Point>& points,
                             int order) {
  GlobalSection s{Q.normal_form(r), {}};
  for (const auto& x : points) s.stalks.emplace_back(x, localize(s.representative, x, order));
  return s;
}

bool FairficationReport::fair() const {
  return std::none_of(entries.begin(), entries.end(), [](const FairficationEntry& e) { return e.killed; });
}

std::vector<SuperElement> FairficationReport::killed() const {
  std::vector<SuperElement> out;
  for (const auto& e : entries) {
    if (e.killed) out.push_back(e.probe);
  }
  return out;
}

FairficationReport fairfication(const QuotientRing& Q, const std::vector<SuperElement>& probes,
                                const SamplerConfig& cfg, int order) {
  FairficationReport rep;
  for (const auto& probe : probes) {
    FairficationEntry e{probe, psi_kernel_test(probe, Q, cfg, order)};
    e.already_zero = e.verdict.kind == ZeroKind::Zero && e.verdict.provenance == Provenance::Exact;
    e.killed = e.verdict.kind == ZeroKind::Zero && !e.already_zero;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

bool in_D(const SuperElement& a, const Point& x, double tol) {
  try {
    return std::fabs(eval(a.body(), x)) > tol;
  } catch (const Error&) {
    return false;
  }
}

std::vector<Point> Z_of(const std::vector<SuperElement>& gens, const std::vector<Point>& points, double tol) {
  std::vector<Point> out;
  for (const auto& x : points) {
    bool all = std::all_of(gens.begin(), gens.end(), [&](const SuperElement& g) {
      try {
        return std::fabs(eval(g.body(), x)) <= tol;
      } catch (const Error&) {
        return false;
      }
    });
    if (all) out.push_back(x);
  }
  return out;
}

}  // namespace csr

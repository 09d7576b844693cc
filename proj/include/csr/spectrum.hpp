#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csr/ideals.hpp"
#include "csr/jets.hpp"

namespace csr {

inline constexpr int kDefaultJetOrder = 6;

/// Sampled R-points of Q: the zero set of the reduced ideal in the box.
/// A free ring yields grid points, a unit ideal yields none.
ZeroSet find_rpoints(const QuotientRing& Q, const SamplerConfig& cfg);

/// Flattened jets of x^beta * theta^J * g over all generators g: a spanning
/// set of the ideal in the order-k local model at x.
std::vector<std::vector<double>> local_ideal_span(const QuotientRing& Q, const Point& x, int order);

/// Whether L_x(r) = 0 in the order-k jet model of the local ring at x: the
/// jet of r lies in the span of x^beta * theta^J * jet(g) over generators g.
bool locally_zero(const SuperElement& r, const QuotientRing& Q, const Point& x, int order);

struct PsiVerdict {
  ZeroKind kind = ZeroKind::Unknown;
  Provenance provenance = Provenance::Sampled;
  std::optional<Point> witness;       // a point with L_x(r) != 0
  std::optional<LocalElement> local;  // L_x(r) at the witness
  std::size_t points_checked = 0;
  std::string reason;
};

/// Decides whether r lies in I_R = {r | L_x(r) = 0 for all x} on the
/// sampled R-points, normal-forming through the quotient first.
PsiVerdict psi_kernel_test(const SuperElement& r, const QuotientRing& Q, const SamplerConfig& cfg,
                           int order = kDefaultJetOrder);

/// The section x -> L_x(r) on a point set.
struct GlobalSection {
  SuperElement representative;
  std::vector<std::pair<Point, LocalElement>> stalks;
};

GlobalSection global_section(const SuperElement& r, const QuotientRing& Q, const std::vector<Point>& points,
                             int order = kDefaultJetOrder);

struct FairficationEntry {
  SuperElement probe;
  PsiVerdict verdict;
  bool already_zero = false;  // nf(probe) = 0
  bool killed = false;        // in I_R but not shown to be in I
};

struct FairficationReport {
  std::vector<FairficationEntry> entries;
  /// No probe has to be killed.
  bool fair() const;
  std::vector<SuperElement> killed() const;
};

FairficationReport fairfication(const QuotientRing& Q, const std::vector<SuperElement>& probes,
                                const SamplerConfig& cfg, int order = kDefaultJetOrder);

/// x in D(a): the residue of the body of a at x is nonzero.
bool in_D(const SuperElement& a, const Point& x, double tol = 1e-12);
/// Points of the sample where every body vanishes.
std::vector<Point> Z_of(const std::vector<SuperElement>& gens, const std::vector<Point>& points,
                        double tol = 1e-9);

}  // namespace csr

#pragma once

#include <optional>
#include <vector>

#include "qdyn/lattice.hpp"
#include "qdyn/partition.hpp"

namespace qdyn {

/// The box |s|, |u| < h with h = sqrt(eps * (M1_bound + 1)). h is irrational
/// in general: it is carried as its exact square plus a rational h_outer >= h,
/// and `rect` is the rational outer enclosure [-h_outer, h_outer]^2.
struct BigRect {
  QElem half_width_squared;
  Rational half_width_outer;
  Rect rect;

  /// |x| < h, decided exactly.
  bool inside_open(const QElem& x) const;
};

BigRect big_rectangle(const FieldContext& ctx);

/// Lattice points q with R - q meeting the (open) big rectangle for some
/// R in p0, in ascending (m, n) order. Each extra unit of `extra_margin` widens
/// the big rectangle by 1 on both axes before the search.
std::vector<LatticePoint> i_k_set(const Partition& p0, long extra_margin = 0);

/// closure(A) inside {P : N(P - q) < t}: the largest corner product is < t.
bool rect_trapped_single(const Rect& a, const LatticePoint& q, const Rational& t);

/// min over q in I of the largest corner product of A against q: A is trapped
/// at t exactly when this is < t. Empty when I is empty.
std::optional<QElem> trap_level(const Rect& a, const std::vector<LatticePoint>& lattice_set);

struct TrapConfig {
  Rational t;
  std::vector<LatticePoint> lattice_set;
  int level = 0;
};

/// Indices of members of p trapped at cfg.t by a single point of cfg.lattice_set.
std::vector<int> trapped_set(const Partition& p, const TrapConfig& cfg);

/// trap_level for every member, computed once so a t-sweep is a comparison.
struct TrapProfile {
  std::vector<std::optional<QElem>> levels;

  std::vector<int> trapped_at(const Rational& t) const;
};

TrapProfile trap_profile(const Partition& p, const std::vector<LatticePoint>& lattice_set);

/// Members that no single q traps although each of their four corners lies in
/// some q's neighborhood: candidates for union-only containment. Diagnostic.
std::vector<int> straddling_candidates(const Partition& p, const TrapConfig& cfg);

}  // namespace qdyn

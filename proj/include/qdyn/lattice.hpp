#pragma once

#include <vector>

#include "qdyn/qfield.hpp"

namespace qdyn {

/// A point q = m + n*alpha of O_K together with its plane image (conj q, q).
struct LatticePoint {
  Integer m;
  Integer n;
  QElem s;
  QElem u;

  friend bool operator==(const LatticePoint& a, const LatticePoint& b) { return a.m == b.m && a.n == b.n; }
};

LatticePoint lattice_point(const FieldContext& ctx, const Integer& m, const Integer& n);

/// All lattice points whose (s,u) image lies in the closed box s_range x u_range.
/// Candidates are generated in floating point with a safety margin and then
/// filtered exactly, so the result is exact.
std::vector<LatticePoint> lattice_points_in_box(const FieldContext& ctx, const Interval& s_range,
                                                const Interval& u_range);

/// Integer pairs (m, n) that may have (s,u) image in the given box; the box
/// is widened by a relative safety margin, so exact filtering must follow.
std::vector<std::pair<long, long>> lattice_candidates(const FieldContext& ctx, double s_lo, double s_hi, double u_lo,
                                                      double u_hi);

/// Lattice points in the open box (lo, hi) x (lo, hi).
std::vector<LatticePoint> lattice_points_in_open_box(const FieldContext& ctx, const Interval& s_range,
                                                     const Interval& u_range);

}  // namespace qdyn

#pragma once

#include <optional>
#include <vector>

#include "qdyn/lattice.hpp"
#include "qdyn/qfield.hpp"

namespace qdyn {

/// Coordinates with respect to the basis {1, alpha}. On the torus these are
/// taken mod Z^2; the canonical representative has 0 <= x, y < 1.
template <class T>
struct BasicPointXY {
  T x;
  T y;
  friend bool operator==(const BasicPointXY&, const BasicPointXY&) = default;
};

using PointXY = BasicPointXY<Rational>;  ///< Q-point
using KPointXY = BasicPointXY<QElem>;    ///< K-point (or Q-point with QElem storage)

/// Stable / unstable coordinates: x + y*alpha maps to (s, u) = (x + y conj(alpha), x + y alpha).
struct PointSU {
  QElem s;
  QElem u;
  friend bool operator==(const PointSU&, const PointSU&) = default;
};

PointSU xy_to_su(const FieldContext& ctx, const PointXY& p);
PointSU xy_to_su(const FieldContext& ctx, const KPointXY& p);
KPointXY su_to_xy(const FieldContext& ctx, const PointSU& q);
std::optional<PointXY> as_rational(const KPointXY& p);
KPointXY to_kpoint(const PointXY& p);

PointXY reduce_mod1(const PointXY& p);
KPointXY reduce_mod1(const KPointXY& p);

/// eps^k * P reduced mod Z^2.
PointXY phi_apply(const FieldContext& ctx, const PointXY& p, long k);
KPointXY phi_apply(const FieldContext& ctx, const KPointXY& p, long k);
/// Plane action (s, u) -> (conj(eps)^k s, eps^k u), no reduction.
PointSU phi_plane(const FieldContext& ctx, const PointSU& p, long k);

/// Full periodic orbit of a Q-point, starting at its canonical representative.
std::vector<PointXY> orbit(const FieldContext& ctx, const PointXY& p);
/// Rejects points whose coordinates are not rational.
std::vector<PointXY> orbit(const FieldContext& ctx, const KPointXY& p);

/// Every point (a/N, b/N) of the torus with 1 <= N <= cap, each listed once.
std::vector<PointXY> qpoints_up_to(long cap);
/// One point per phi-orbit among qpoints_up_to(cap).
std::vector<PointXY> orbit_representatives(const FieldContext& ctx, long cap);

/// The element x + y*alpha of K.
QElem as_field_element(const FieldContext& ctx, const PointXY& p);

/// Half-width sqrt(eps*(M1_bound + 1)) of the search box, as its exact square
/// plus a rational upper bound.
struct SearchRadius {
  QElem squared;
  Rational outer;
};
SearchRadius search_radius(const FieldContext& ctx);

/// Exact M(P) for a Q-point by the finite orbit / box / lattice search.
/// Throws InvariantError if the configured M1 bound is contradicted.
Rational euclidean_min_qpoint(const FieldContext& ctx, const PointXY& p);
Rational euclidean_min_qpoint(const FieldContext& ctx, const KPointXY& p);

struct CollapseWitness {
  Integer order;          ///< least N >= 1 with N*P in O_K x O_K
  PointSU zero_stable;    ///< representative of N*P with s == 0
  PointSU zero_unstable;  ///< representative of N*P with u == 0
};
CollapseWitness kpoint_collapse_order(const FieldContext& ctx, const PointSU& p);

/// Exact M(P) for a K-point via the orbit plus its two limiting torsion orbits.
QElem euclidean_min_kpoint(const FieldContext& ctx, const KPointXY& p);

}  // namespace qdyn

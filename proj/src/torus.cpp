#include "qdyn/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "qdyn/errors.hpp"

namespace qdyn {

PointSU xy_to_su(const FieldContext& ctx, const PointXY& p) {
  QElem x{p.x}, y{p.y};
  return {x + y * ctx.alpha_conj, x + y * ctx.alpha};
}

PointSU xy_to_su(const FieldContext& ctx, const KPointXY& p) {
  return {p.x + p.y * ctx.alpha_conj, p.x + p.y * ctx.alpha};
}

KPointXY su_to_xy(const FieldContext& ctx, const PointSU& q) {
  QElem y = (q.u - q.s) / ctx.covolume();
  QElem x = q.u - y * ctx.alpha;
  return {std::move(x), std::move(y)};
}

std::optional<PointXY> as_rational(const KPointXY& p) {
  if (!p.x.is_rational() || !p.y.is_rational()) return std::nullopt;
  return PointXY{p.x.a(), p.y.a()};
}

KPointXY to_kpoint(const PointXY& p) { return {QElem(p.x), QElem(p.y)}; }

QElem as_field_element(const FieldContext& ctx, const PointXY& p) { return QElem(p.x) + QElem(p.y) * ctx.alpha; }

PointXY reduce_mod1(const PointXY& p) {
  PointXY r{p.x, p.y};
  r.x.canonicalize();
  r.y.canonicalize();
  return {r.x - Rational(floor_div(r.x)), r.y - Rational(floor_div(r.y))};
}

KPointXY reduce_mod1(const KPointXY& p) {
  return {p.x - QElem(Rational(p.x.floor())), p.y - QElem(Rational(p.y.floor()))};
}

namespace {

template <class T>
BasicPointXY<T> apply_matrix(const std::array<Integer, 4>& m, const BasicPointXY<T>& p) {
  const T m0{Rational(m[0])}, m1{Rational(m[1])}, m2{Rational(m[2])}, m3{Rational(m[3])};
  return {m0 * p.x + m1 * p.y, m2 * p.x + m3 * p.y};
}

template <class T>
BasicPointXY<T> phi_apply_impl(const FieldContext& ctx, BasicPointXY<T> p, long k) {
  const auto& m = k >= 0 ? ctx.phi : ctx.phi_inv;
  p = reduce_mod1(p);
  for (long i = 0; i < (k >= 0 ? k : -k); ++i) p = reduce_mod1(apply_matrix(m, p));
  return p;
}

}  // namespace

PointXY phi_apply(const FieldContext& ctx, const PointXY& p, long k) { return phi_apply_impl(ctx, p, k); }
KPointXY phi_apply(const FieldContext& ctx, const KPointXY& p, long k) { return phi_apply_impl(ctx, p, k); }

PointSU phi_plane(const FieldContext& ctx, const PointSU& p, long k) {
  return {p.s * ctx.eps_conj_pow(k), p.u * ctx.eps_pow(k)};
}

std::vector<PointXY> orbit(const FieldContext& ctx, const PointXY& p) {
  const PointXY start = reduce_mod1(p);
  std::vector<PointXY> out{start};
  PointXY cur = start;
  for (;;) {
    cur = reduce_mod1(apply_matrix(ctx.phi, cur));
    if (cur == start) break;
    out.push_back(cur);
  }
  return out;
}

std::vector<PointXY> orbit(const FieldContext& ctx, const KPointXY& p) {
  auto r = as_rational(p);
  if (!r) throw ConfigError("orbit: point has irrational coordinates; only Q-points are periodic");
  return orbit(ctx, *r);
}

std::vector<PointXY> qpoints_up_to(long cap) {
  std::set<std::pair<Rational, Rational>> seen;
  std::vector<PointXY> out;
  for (long den = 1; den <= cap; ++den) {
    for (long a = 0; a < den; ++a) {
      for (long b = 0; b < den; ++b) {
        Rational x(a, den), y(b, den);
        x.canonicalize();
        y.canonicalize();
        if (seen.emplace(x, y).second) out.push_back({x, y});
      }
    }
  }
  return out;
}

std::vector<PointXY> orbit_representatives(const FieldContext& ctx, long cap) {
  std::set<std::pair<Rational, Rational>> seen;
  std::vector<PointXY> out;
  for (const PointXY& p : qpoints_up_to(cap)) {
    if (seen.count({p.x, p.y})) continue;
    for (const PointXY& q : orbit(ctx, p)) seen.emplace(q.x, q.y);
    out.push_back(p);
  }
  return out;
}

namespace {

// A rational r >= |x|, close to it.
Rational rational_upper_bound(const QElem& x) {
  const QElem ax = x.abs();
  double approx = ax.to_double();
  Rational r(approx * (1 + 1e-12) + 1e-12);
  while (QElem(r) < ax) r = r * 2 + 1;
  return r;
}

// Rational r >= sqrt(sq) for sq >= 0.
Rational sqrt_upper_bound(const QElem& sq) {
  double approx = std::sqrt(std::max(0.0, sq.to_double()));
  Rational r(approx * (1 + 1e-12) + 1e-12);
  while (QElem(r * r) < sq) r = r * 2 + 1;
  return r;
}

Interval around(const QElem& c, const Rational& r) { return {c - QElem(r), c + QElem(r)}; }

// Floating prefilter: only candidates that might beat `best` are checked exactly.
bool near_or_below(double approx, double best) { return approx <= best * (1 + 1e-9) + 1e-12; }

}  // namespace

SearchRadius search_radius(const FieldContext& ctx) {
  QElem sq = ctx.eps * QElem(ctx.m1_bound + 1);
  return {sq, sqrt_upper_bound(sq)};
}

Rational euclidean_min_qpoint(const FieldContext& ctx, const PointXY& p) {
  const double r = search_radius(ctx).outer.get_d();
  std::optional<Rational> best;
  double best_d = 0.0;
  for (const PointXY& q : orbit(ctx, p)) {
    const QElem f = as_field_element(ctx, q);
    const double fu = f.to_double();
    const double fs = f.conj().to_double();
    // Every candidate is a genuine value |N(P - q)|; the candidate set covers
    // the search box, so its minimum is the box minimum.
    for (auto [m, n] : lattice_candidates(ctx, fs - r, fs + r, fu - r, fu + r)) {
      const double approx = std::abs((fs - static_cast<double>(m) - static_cast<double>(n) * ctx.alpha_conj_d) *
                                     (fu - static_cast<double>(m) - static_cast<double>(n) * ctx.alpha_d));
      if (best && !near_or_below(approx, best_d)) continue;
      Rational v = abs_norm(f - ctx.from_basis(m, n));
      if (!best || v < *best) {
        best = std::move(v);
        best_d = best->get_d();
      }
    }
    if (best && sgn(*best) == 0) break;
  }
  if (!best) throw InvariantError("euclidean_min_qpoint: empty search box");
  if (*best > ctx.m1_bound) {
    throw InvariantError("euclidean_min_qpoint: found M(P) = " + best->get_str() + " above the configured M1 bound " +
                         ctx.m1_bound.get_str() + "; the search box would be incomplete");
  }
  return *best;
}

Rational euclidean_min_qpoint(const FieldContext& ctx, const KPointXY& p) {
  auto r = as_rational(p);
  if (!r) throw ConfigError("euclidean_min_qpoint: point is not a Q-point");
  return euclidean_min_qpoint(ctx, *r);
}

CollapseWitness kpoint_collapse_order(const FieldContext& ctx, const PointSU& p) {
  Integer order = 1;
  for (const QElem* c : {&p.s, &p.u}) {
    auto [m, n] = ctx.basis_coords(*c);
    mpz_lcm(order.get_mpz_t(), order.get_mpz_t(), m.get_den_mpz_t());
    mpz_lcm(order.get_mpz_t(), order.get_mpz_t(), n.get_den_mpz_t());
  }
  const QElem big_n{Rational(order)};
  const QElem sigma = p.s * big_n;
  const QElem upsilon = p.u * big_n;
  // The lattice is {(conj a, a)}: subtracting (sigma, conj sigma) kills s,
  // subtracting (conj upsilon, upsilon) kills u.
  return {order, {QElem(0), upsilon - sigma.conj()}, {sigma - upsilon.conj(), QElem(0)}};
}

namespace {

// Smallest |coordinate| != 0 (s if use_s, else u) over a = T - q with T in
// the orbit and a inside the box |a_s| < rs, |a_u| < ru.
std::optional<QElem> min_nonzero_offset(const FieldContext& ctx, const std::vector<PointXY>& orb,
                                        const Rational& rs, const Rational& ru, bool use_s) {
  std::optional<QElem> best;
  for (const PointXY& t : orb) {
    const QElem f = as_field_element(ctx, t);
    const QElem fc = f.conj();
    for (const LatticePoint& q : lattice_points_in_box(ctx, around(fc, rs), around(f, ru))) {
      QElem off = use_s ? QElem(fc - q.s).abs() : QElem(f - q.u).abs();
      if (off.is_zero()) continue;
      if (!best || off < *best) best = std::move(off);
    }
  }
  return best;
}

}  // namespace

QElem euclidean_min_kpoint(const FieldContext& ctx, const KPointXY& p_in) {
  const KPointXY p = reduce_mod1(p_in);
  if (auto r = as_rational(p)) return QElem(euclidean_min_qpoint(ctx, *r));

  const PointSU su = xy_to_su(ctx, p);
  // P = L+ + (c+, 0) with L+ the Q-point of the field element u; forward
  // iterates collapse onto the orbit of L+. Symmetrically for L- = conj(s).
  const QElem c_plus = su.s - su.u.conj();
  const QElem c_minus = su.u - su.s.conj();
  auto to_point = [&](const QElem& e) {
    auto [m, n] = ctx.basis_coords(e);
    return reduce_mod1(PointXY{m, n});
  };
  const PointXY l_plus = to_point(su.u);
  const PointXY l_minus = to_point(su.s.conj());

  QElem best{min(euclidean_min_qpoint(ctx, l_plus), euclidean_min_qpoint(ctx, l_minus))};
  if (best.is_zero()) return best;

  const Rational radius = search_radius(ctx).outer;
  const Rational c_plus_bound = rational_upper_bound(c_plus);
  const Rational c_minus_bound = rational_upper_bound(c_minus);
  const Rational wide = radius + 2 * std::max(c_plus_bound, c_minus_bound);

  const double wide_d = wide.get_d();
  double best_d = best.to_double();
  auto scan = [&](const KPointXY& q) {
    const PointSU qs = xy_to_su(ctx, q);
    const double su = qs.u.to_double();
    const double ss = qs.s.to_double();
    for (auto [m, n] : lattice_candidates(ctx, ss - wide_d, ss + wide_d, su - wide_d, su + wide_d)) {
      const double approx = std::abs((ss - static_cast<double>(m) - static_cast<double>(n) * ctx.alpha_conj_d) *
                                     (su - static_cast<double>(m) - static_cast<double>(n) * ctx.alpha_d));
      if (!near_or_below(approx, best_d)) continue;
      const LatticePoint l = lattice_point(ctx, m, n);
      QElem v = QElem(qs.s - l.s).abs() * QElem(qs.u - l.u).abs();
      if (v < best) {
        best = std::move(v);
        best_d = best.to_double();
      }
    }
  };

  // Beyond the scanned window every candidate either sits above the torsion
  // limit value or increases monotonically along k mod 2p, so the window
  // minimum is global.
  const std::vector<PointXY> orb_plus = orbit(ctx, l_plus);
  const std::vector<PointXY> orb_minus = orbit(ctx, l_minus);
  auto window_end = [&](const QElem& c, const std::optional<QElem>& floor_offset, std::size_t period) -> long {
    long k = 0;
    if (floor_offset) {
      QElem mag = c.abs();
      while (mag > *floor_offset) {
        mag *= ctx.eps_inv;
        ++k;
      }
    }
    return k + 2 * static_cast<long>(period);
  };
  const long forward = window_end(c_plus, min_nonzero_offset(ctx, orb_plus, radius + c_plus_bound, radius, true),
                                  orb_plus.size());
  const long backward = window_end(
      c_minus, min_nonzero_offset(ctx, orb_minus, radius, radius + c_minus_bound, false), orb_minus.size());
  KPointXY q = p;
  for (long k = 0; k <= forward; ++k, q = phi_apply(ctx, q, 1)) scan(q);
  q = phi_apply(ctx, p, -1);
  for (long k = 1; k <= backward; ++k, q = phi_apply(ctx, q, -1)) scan(q);
  return best;
}

}  // namespace qdyn

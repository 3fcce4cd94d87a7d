#include "qdyn/trapping.hpp"

#include <algorithm>

namespace qdyn {

namespace {

// Largest |x - c| over x in the closed interval: attained at an endpoint.
QElem farthest(const Interval& iv, const QElem& c) { return max(QElem(iv.lo - c).abs(), QElem(iv.hi - c).abs()); }

QElem corner_max(const Rect& a, const LatticePoint& q) { return farthest(a.s, q.s) * farthest(a.u, q.u); }

}  // namespace

bool BigRect::inside_open(const QElem& x) const {
  const QElem ax = x.abs();
  return ax * ax < half_width_squared;
}

BigRect big_rectangle(const FieldContext& ctx) {
  const SearchRadius r = search_radius(ctx);
  const QElem h{r.outer};
  return {r.squared, r.outer, Rect({-h, h}, {-h, h}, {})};
}

std::vector<LatticePoint> i_k_set(const Partition& p0, long extra_margin) {
  const FieldContext& ctx = p0.ctx;
  const BigRect big = big_rectangle(ctx);
  const QElem extra(extra_margin);
  // X < h + extra, with h known only through h^2.
  auto below = [&](const QElem& x) {
    const QElem y = x - extra;
    return y.sign() < 0 || y * y < big.half_width_squared;
  };
  const double reach = big.half_width_outer.get_d() + static_cast<double>(extra_margin);
  std::vector<LatticePoint> out;
  for (const Rect& r : p0.rects) {
    for (auto [m, n] :
         lattice_candidates(ctx, r.approx[0] - reach, r.approx[1] + reach, r.approx[2] - reach, r.approx[3] + reach)) {
      LatticePoint q = lattice_point(ctx, Integer(m), Integer(n));
      if (below(r.s.lo - q.s) && below(q.s - r.s.hi) && below(r.u.lo - q.u) && below(q.u - r.u.hi))
        out.push_back(std::move(q));
    }
  }
  std::sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
    return a.m != b.m ? a.m < b.m : a.n < b.n;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool rect_trapped_single(const Rect& a, const LatticePoint& q, const Rational& t) {
  return corner_max(a, q) < QElem(t);
}

std::optional<QElem> trap_level(const Rect& a, const std::vector<LatticePoint>& lattice_set) {
  std::optional<QElem> best;
  for (const LatticePoint& q : lattice_set) {
    QElem v = corner_max(a, q);
    if (!best || v < *best) best = std::move(v);
  }
  return best;
}

std::vector<int> trapped_set(const Partition& p, const TrapConfig& cfg) {
  std::vector<int> out;
  for (std::size_t i = 0; i < p.rects.size(); ++i) {
    for (const LatticePoint& q : cfg.lattice_set) {
      if (rect_trapped_single(p.rects[i], q, cfg.t)) {
        out.push_back(static_cast<int>(i));
        break;
      }
    }
  }
  return out;
}

std::vector<int> TrapProfile::trapped_at(const Rational& t) const {
  const QElem tq(t);
  std::vector<int> out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] && *levels[i] < tq) out.push_back(static_cast<int>(i));
  }
  return out;
}

TrapProfile trap_profile(const Partition& p, const std::vector<LatticePoint>& lattice_set) {
  TrapProfile out;
  out.levels.reserve(p.rects.size());
  for (const Rect& r : p.rects) out.levels.push_back(trap_level(r, lattice_set));
  return out;
}

std::vector<int> straddling_candidates(const Partition& p, const TrapConfig& cfg) {
  const QElem t(cfg.t);
  std::vector<int> out;
  for (std::size_t i = 0; i < p.rects.size(); ++i) {
    const Rect& a = p.rects[i];
    if (std::any_of(cfg.lattice_set.begin(), cfg.lattice_set.end(),
                    [&](const LatticePoint& q) { return rect_trapped_single(a, q, cfg.t); }))
      continue;
    bool covered = true;
    for (const QElem* cs : {&a.s.lo, &a.s.hi}) {
      for (const QElem* cu : {&a.u.lo, &a.u.hi}) {
        covered = covered && std::any_of(cfg.lattice_set.begin(), cfg.lattice_set.end(), [&](const LatticePoint& q) {
                    return QElem(*cs - q.s).abs() * QElem(*cu - q.u).abs() < t;
                  });
      }
    }
    if (covered) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace qdyn

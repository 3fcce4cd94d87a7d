#include "qdyn/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace qdyn {

LatticePoint lattice_point(const FieldContext& ctx, const Integer& m, const Integer& n) {
  QElem mm{Rational(m)};
  QElem nn{Rational(n)};
  return {m, n, mm + nn * ctx.alpha_conj, mm + nn * ctx.alpha};
}

std::vector<std::pair<long, long>> lattice_candidates(const FieldContext& ctx, double s_lo, double s_hi, double u_lo,
                                                      double u_hi) {
  std::vector<std::pair<long, long>> out;
  const double scale = 1.0 + std::max({std::abs(s_lo), std::abs(s_hi), std::abs(u_lo), std::abs(u_hi)});
  const double margin = 1e-9 * scale;
  s_lo -= margin;
  u_lo -= margin;
  s_hi += margin;
  u_hi += margin;
  if (s_hi < s_lo || u_hi < u_lo) return out;
  const double a = ctx.alpha_d;
  const double ac = ctx.alpha_conj_d;
  const double w = a - ac;
  const long n_lo = static_cast<long>(std::floor((u_lo - s_hi) / w - margin));
  const long n_hi = static_cast<long>(std::ceil((u_hi - s_lo) / w + margin));
  for (long n = n_lo; n <= n_hi; ++n) {
    const double nd = static_cast<double>(n);
    const long m_lo = static_cast<long>(std::floor(std::max(u_lo - nd * a, s_lo - nd * ac) - margin));
    const long m_hi = static_cast<long>(std::ceil(std::min(u_hi - nd * a, s_hi - nd * ac) + margin));
    for (long m = m_lo; m <= m_hi; ++m) out.emplace_back(m, n);
  }
  return out;
}

namespace {

template <class Accept>
std::vector<LatticePoint> enumerate(const FieldContext& ctx, const Interval& s_range, const Interval& u_range,
                                    Accept accept) {
  std::vector<LatticePoint> out;
  if (s_range.hi < s_range.lo || u_range.hi < u_range.lo) return out;
  for (auto [m, n] : lattice_candidates(ctx, s_range.lo.to_double(), s_range.hi.to_double(), u_range.lo.to_double(),
                                        u_range.hi.to_double())) {
    LatticePoint q = lattice_point(ctx, Integer(m), Integer(n));
    if (accept(q)) out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

std::vector<LatticePoint> lattice_points_in_box(const FieldContext& ctx, const Interval& s_range,
                                                const Interval& u_range) {
  return enumerate(ctx, s_range, u_range,
                   [&](const LatticePoint& q) { return s_range.contains(q.s) && u_range.contains(q.u); });
}

std::vector<LatticePoint> lattice_points_in_open_box(const FieldContext& ctx, const Interval& s_range,
                                                     const Interval& u_range) {
  return enumerate(ctx, s_range, u_range, [&](const LatticePoint& q) {
    return s_range.lo < q.s && q.s < s_range.hi && u_range.lo < q.u && q.u < u_range.hi;
  });
}

}  // namespace qdyn

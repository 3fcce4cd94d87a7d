#pragma once

// Independent reference computations shared by the unit tests. Nothing here
// calls the library routine it is meant to check.

#include <cmath>
#include <utility>

#include "qdyn/lattice.hpp"
#include "qdyn/torus.hpp"

inline qdyn::Rational frac(long p, long q) {
  qdyn::Rational r(p, q);
  r.canonicalize();
  return r;
}

namespace oracle {

// Smallest unit > 1 of O_K by brute force over x^2 - D y^2 = +-1 (or +-4 with
// halves when D = 1 mod 4). Returns (a, b) with eps = a + b sqrt D.
inline std::pair<qdyn::Rational, qdyn::Rational> pell_unit(long D) {
  const long k = D % 4 == 1 ? 4 : 1;
  for (long y = 1; y < 1000000; ++y) {
    for (long sign : {-1L, 1L}) {
      const long x2 = D * y * y + sign * k;
      if (x2 <= 0) continue;
      const long x = std::lround(std::sqrt(static_cast<double>(x2)));
      for (long c : {x - 1, x, x + 1}) {
        if (c > 0 && c * c == x2) {
          return k == 4 ? std::pair{qdyn::Rational(c, 2), qdyn::Rational(y, 2)}
                        : std::pair{qdyn::Rational(c), qdyn::Rational(y)};
        }
      }
    }
  }
  return {};
}

// min |N(x - q)| over q in a generous box, in double. No search-box theory.
inline double min_norm_near(const qdyn::FieldContext& ctx, double s, double u, double radius) {
  double best = 1e300;
  for (auto [m, n] : qdyn::lattice_candidates(ctx, s - radius, s + radius, u - radius, u + radius)) {
    const double ls = static_cast<double>(m) + static_cast<double>(n) * ctx.alpha_conj_d;
    const double lu = static_cast<double>(m) + static_cast<double>(n) * ctx.alpha_d;
    best = std::min(best, std::abs((s - ls) * (u - lu)));
  }
  return best;
}

// M(P) by scanning phi^k P for |k| <= span against a wide lattice box. The
// span must cover the period of the limiting torsion orbits.
inline double scan_minimum(const qdyn::FieldContext& ctx, const qdyn::KPointXY& p, int span, double radius) {
  double best = 1e300;
  for (long dir : {1L, -1L}) {
    qdyn::KPointXY q = qdyn::reduce_mod1(p);
    for (int k = 0; k <= span; ++k) {
      const auto su = qdyn::xy_to_su(ctx, q);
      best = std::min(best, min_norm_near(ctx, su.s.to_double(), su.u.to_double(), radius));
      q = qdyn::phi_apply(ctx, q, dir);
    }
  }
  return best;
}

}  // namespace oracle

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "qdyn/errors.hpp"
#include "qdyn/torus.hpp"

using namespace qdyn;

namespace {

// Order of the phi matrix modulo N, by repeated multiplication.
long matrix_order_mod(const FieldContext& ctx, long N) {
  auto mod = [N](const Integer& v) {
    Integer r = v % N;
    if (r < 0) r += N;
    return r;
  };
  std::array<Integer, 4> m{1, 0, 0, 1};
  for (long k = 1; k < 100000; ++k) {
    m = {mod(m[0] * ctx.phi[0] + m[1] * ctx.phi[2]), mod(m[0] * ctx.phi[1] + m[1] * ctx.phi[3]),
         mod(m[2] * ctx.phi[0] + m[3] * ctx.phi[2]), mod(m[2] * ctx.phi[1] + m[3] * ctx.phi[3])};
    if (m[0] == mod(1) && m[1] == 0 && m[2] == 0 && m[3] == mod(1)) return k;
  }
  return -1;
}

}  // namespace

TEST_SUITE("torus") {
  TEST_CASE("coordinate changes are inverse to each other") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> num(-40, 40), den(1, 17);
    for (long D : {2L, 3L, 5L, 13L}) {
      const FieldContext ctx = make_context(D);
      for (int k = 0; k < 100; ++k) {
        const PointXY p{frac(num(rng), den(rng)), frac(num(rng), den(rng))};
        const PointSU su = xy_to_su(ctx, p);
        CHECK(su_to_xy(ctx, su) == to_kpoint(p));
        CHECK(su.u == as_field_element(ctx, p));
        CHECK(su.s == as_field_element(ctx, p).conj());
      }
    }
  }

  TEST_CASE("phi examples") {
    const FieldContext ctx = make_context(5);
    const PointXY half{Rational(1, 2), Rational(1, 2)};
    CHECK(phi_apply(ctx, half, 1) == PointXY{Rational(1, 2), Rational(0)});
    CHECK(phi_apply(ctx, half, 3) == half);
    CHECK(phi_apply(ctx, half, -1) == PointXY{Rational(0), Rational(1, 2)});
    CHECK(orbit(ctx, half).size() == 3);
    CHECK(orbit(ctx, PointXY{Rational(0), Rational(0)}).size() == 1);
  }

  TEST_CASE("phi acts on the plane by the unit and its conjugate") {
    const FieldContext ctx = make_context(13);
    const PointXY p{Rational(2, 7), Rational(3, 5)};
    const PointSU a = phi_plane(ctx, xy_to_su(ctx, p), 2);
    CHECK(a.u == ctx.eps_pow(2) * as_field_element(ctx, p));
    CHECK(a.s == ctx.eps_conj_pow(2) * as_field_element(ctx, p).conj());
    const KPointXY back = reduce_mod1(su_to_xy(ctx, a));
    CHECK(back == to_kpoint(phi_apply(ctx, p, 2)));
  }

  TEST_CASE("orbit length divides the matrix order mod N") {
    for (long D : {2L, 5L, 7L}) {
      const FieldContext ctx = make_context(D);
      for (long N = 2; N <= 9; ++N) {
        const long order = matrix_order_mod(ctx, N);
        for (long a = 0; a < N; ++a) {
          const auto orb = orbit(ctx, PointXY{frac(a, N), frac(1, N)});
          CHECK(order % static_cast<long>(orb.size()) == 0);
          std::set<std::pair<std::string, std::string>> distinct;
          for (const auto& q : orb) distinct.insert({q.x.get_str(), q.y.get_str()});
          CHECK(distinct.size() == orb.size());
        }
      }
    }
  }

  TEST_CASE("Q-point enumeration") {
    const auto pts = qpoints_up_to(4);
    // Points with exact denominator dividing some N <= 4: the 4x4 grid plus thirds.
    std::set<std::pair<std::string, std::string>> distinct;
    for (const auto& p : pts) distinct.insert({p.x.get_str(), p.y.get_str()});
    CHECK(distinct.size() == pts.size());
    CHECK(pts.size() == 16 + 8);
    const FieldContext ctx = make_context(5);
    const auto reps = orbit_representatives(ctx, 4);
    std::size_t covered = 0;
    for (const auto& r : reps) covered += orbit(ctx, r).size();
    CHECK(covered == pts.size());
  }

  TEST_CASE("Euclidean minimum of Q-points") {
    const FieldContext ctx = make_context(5);
    CHECK(euclidean_min_qpoint(ctx, PointXY{Rational(1, 2), Rational(1, 2)}) == Rational(1, 4));
    CHECK(euclidean_min_qpoint(ctx, PointXY{Rational(0), Rational(0)}) == 0);
    // sqrt(5)/5 = 4/5 + 2/5 alpha.
    CHECK(euclidean_min_qpoint(ctx, PointXY{Rational(4, 5), Rational(2, 5)}) == Rational(1, 5));
  }

  TEST_CASE("Euclidean minimum is invariant along the orbit") {
    for (long D : {2L, 3L, 5L, 13L}) {
      const FieldContext ctx = make_context(D);
      for (const auto& p : {PointXY{Rational(1, 3), Rational(2, 7)}, PointXY{Rational(3, 4), Rational(1, 6)}}) {
        const Rational m = euclidean_min_qpoint(ctx, p);
        for (const auto& q : orbit(ctx, p)) CHECK(euclidean_min_qpoint(ctx, q) == m);
      }
    }
  }

  TEST_CASE("Euclidean minimum agrees with a wide floating scan") {
    for (long D : {2L, 5L, 13L}) {
      const FieldContext ctx = make_context(D);
      for (const auto& p : orbit_representatives(ctx, 6)) {
        const double exact = euclidean_min_qpoint(ctx, p).get_d();
        double scanned = 1e300;
        for (const auto& q : orbit(ctx, p)) {
          const auto su = xy_to_su(ctx, q);
          scanned = std::min(scanned, oracle::min_norm_near(ctx, su.s.to_double(), su.u.to_double(), 8.0));
        }
        CHECK(exact == doctest::Approx(scanned).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("too small an M1 bound is caught") {
    const FieldContext ctx = make_context(5, Rational(1, 10));
    CHECK_THROWS_AS(euclidean_min_qpoint(ctx, PointXY{Rational(1, 2), Rational(1, 2)}), InvariantError);
  }

  TEST_CASE("collapse order of K-points") {
    const FieldContext ctx = make_context(5);
    const PointSU zero{QElem(0), QElem(0)};
    CHECK(kpoint_collapse_order(ctx, zero).order == 1);
    // 1/3 + sqrt(5)/7 = 4/21 + 2/7 alpha.
    const QElem x(Rational(1, 3), Rational(1, 7), 5);
    const auto w = kpoint_collapse_order(ctx, PointSU{x.conj(), x});
    CHECK(w.order == 21);
    CHECK(w.zero_stable.s == QElem(0));
    CHECK(w.zero_unstable.u == QElem(0));
    const QElem h(Rational(1, 3), Rational(0), 5);
    CHECK(kpoint_collapse_order(ctx, PointSU{h, h}).order == 3);
  }

  TEST_CASE("Euclidean minimum of K-points agrees with a floating scan") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> num(0, 12), den(1, 9);
    for (long D : {2L, 5L, 13L}) {
      const FieldContext ctx = make_context(D);
      for (int k = 0; k < 6; ++k) {
        const QElem x(frac(num(rng), den(rng)), frac(num(rng), den(rng)), D);
        const QElem y(frac(num(rng), den(rng)), frac(num(rng), den(rng)), D);
        const KPointXY p = reduce_mod1(KPointXY{x, y});
        const double exact = euclidean_min_kpoint(ctx, p).to_double();
        CHECK(exact == doctest::Approx(oracle::scan_minimum(ctx, p, 400, 6.0)).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("rational K-points reduce to the Q-point minimum") {
    const FieldContext ctx = make_context(5);
    const PointXY p{Rational(1, 2), Rational(1, 2)};
    CHECK(euclidean_min_kpoint(ctx, to_kpoint(p)) == QElem(Rational(1, 4)));
    CHECK(euclidean_min_qpoint(ctx, to_kpoint(p)) == Rational(1, 4));
    CHECK_THROWS(orbit(ctx, KPointXY{QElem::sqrt_d(5), QElem(0)}));
  }
}

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qdyn/errors.hpp"
#include "qdyn/partition.hpp"

using namespace qdyn;

namespace {

QElem total_area(const Partition& p) {
  QElem a(0);
  for (const Rect& r : p.rects) a += r.area();
  return a;
}

}  // namespace

TEST_SUITE("partition") {
  TEST_CASE("base rectangles for the golden field") {
    const FieldContext ctx = make_context(5);
    const auto base = base_rectangles(ctx);
    CHECK(base[0].s.lo == QElem(0));
    CHECK(base[0].s.hi == -ctx.alpha_conj);
    CHECK(base[0].u.lo == QElem(0));
    CHECK(base[0].u.hi == QElem(1));
    CHECK(base[1].s.lo == QElem(-1));
    CHECK(base[1].s.hi == QElem(0));
    CHECK(base[1].u.hi == ctx.alpha);
    CHECK(base[0].area() + base[1].area() == QElem::sqrt_d(5));
  }

  TEST_CASE("golden field generator is the two-rectangle Markov partition") {
    const Partition p = generator(make_context(5));
    CHECK(p.size() == 2);
    CHECK(p.transitions() == std::vector<std::pair<int, int>>{{0, 1}, {1, 0}, {1, 1}});
    CHECK(verify_markov(p));
    CHECK(verify_tiling(p));
  }

  TEST_CASE("refinement sizes") {
    const FieldContext ctx = make_context(5);
    Partition p = generator(ctx);
    const std::vector<std::size_t> fib{2, 5, 13, 34};
    for (int n = 0; n < 4; ++n) {
      CHECK(p.level == n);
      CHECK(p.size() == fib[n]);
      if (n < 3) p = refine(p);
    }
    CHECK(partition_at_level(make_context(2), 1).size() == 29);
    CHECK(partition_at_level(make_context(3), 1).size() == 112);
  }

  TEST_CASE("Markov, tiling and nesting through level 2") {
    for (long D : {2L, 3L, 5L, 13L}) {
      CAPTURE(D);
      Partition p = generator(make_context(D));
      for (int n = 0; n <= 2; ++n) {
        CHECK(verify_markov(p));
        CHECK(verify_tiling(p));
        CHECK(total_area(p) == p.ctx.covolume());
        if (n < 2) {
          Partition next = refine(p);
          CHECK(verify_nesting(next, p));
          p = std::move(next);
        }
      }
    }
  }

  TEST_CASE("every symbol has a successor and a predecessor") {
    const Partition p = partition_at_level(make_context(13), 1);
    std::vector<int> in(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(!p.successors[i].empty());
      for (int j : p.successors[i]) ++in[j];
    }
    for (int c : in) CHECK(c > 0);
  }

  TEST_CASE("coordinate words name members") {
    const Partition p = partition_at_level(make_context(5), 2);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(p.rects[i].word.size() == 5);
      CHECK(p.find(p.rects[i].word) == static_cast<int>(i));
    }
    CHECK(p.find(Word{0, 0, 0, 0, 0}) == -1);
  }

  TEST_CASE("unstable sides shrink like eps^-n, stable sides like |conj eps|^n") {
    const FieldContext ctx = make_context(2);
    const Partition p0 = generator(ctx);
    double max_u0 = 0, max_s0 = 0;
    for (const Rect& r : p0.rects) {
      max_u0 = std::max(max_u0, r.u.length().to_double());
      max_s0 = std::max(max_s0, r.s.length().to_double());
    }
    Partition p = p0;
    for (int n = 1; n <= 3; ++n) {
      p = refine(p);
      for (const Rect& r : p.rects) {
        CHECK(r.u.length().to_double() <= max_u0 / std::pow(ctx.eps_d, n) * (1 + 1e-12));
        CHECK(r.s.length().to_double() <= max_s0 * std::pow(std::abs(ctx.eps_conj_d), n) * (1 + 1e-12));
      }
    }
  }

  TEST_CASE("disconnected intersections fall back to strips") {
    const Partition p = generator(make_context(6));
    CHECK(p.size() > 2);
    CHECK(verify_markov(p));
    CHECK(verify_tiling(p));
  }

  TEST_CASE("a perturbed rectangle fails the checks") {
    Partition p = generator(make_context(5));
    p.rects[0].u.hi = p.rects[0].u.hi + QElem(frac(1, 100));
    p.rects[0].refresh_approx();
    p.rebuild_index();
    const MarkovReport m = verify_markov(p);
    CHECK_FALSE(m.ok);
    CHECK(m.first >= 0);
    CHECK_FALSE(m.message.empty());
    CHECK_FALSE(verify_tiling(p).ok);
  }

  TEST_CASE("closed membership at boundaries") {
    const FieldContext ctx = make_context(5);
    const Partition p = generator(ctx);
    // The origin is a corner of both base rectangles.
    const auto hits = locate_closed(p, PointSU{QElem(0), QElem(0)});
    CHECK(hits.size() >= 2);
    // An interior point of R_0 lies in exactly one member.
    const auto inner = locate_closed(p, PointSU{QElem(frac(1, 5)), QElem(frac(1, 2))});
    REQUIRE(inner.size() == 1);
    CHECK(inner[0].first == 0);
  }

  TEST_CASE("image pieces of the generator") {
    const FieldContext ctx = make_context(5);
    const Partition p = generator(ctx);
    for (int a = 0; a < 2; ++a) {
      QElem covered(0);
      for (int b = 0; b < 2; ++b) {
        for (const Piece& pc : image_pieces(ctx, p.rects[a], p.rects[b], -1)) {
          CHECK(pc.s == p.rects[a].s);
          covered += pc.u.length();
        }
      }
      CHECK(covered == p.rects[a].u.length());
    }
  }

  TEST_CASE("JSON export keeps exact endpoints") {
    const Partition p = partition_at_level(make_context(13), 1);
    const auto j = partition_to_json(p);
    CHECK(j["D"] == 13);
    CHECK(j["level"] == 1);
    REQUIRE(j["rectangles"].size() == p.size());
    for (std::size_t i = 0; i < p.size(); i += 7) {
      CHECK(qelem_from_json(j["rectangles"][i]["s"][0], 13) == p.rects[i].s.lo);
      CHECK(qelem_from_json(j["rectangles"][i]["u"][1], 13) == p.rects[i].u.hi);
    }
    const QElem x(frac(-3, 7), frac(5, 2), 13);
    CHECK(qelem_from_json(qelem_to_json(x), 13) == x);
  }
}

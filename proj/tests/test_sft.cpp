#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "qdyn/errors.hpp"
#include "qdyn/sft.hpp"

using namespace qdyn;

namespace {

// log spectral radius from ||A^(2^j)||^(1/2^j), by repeated squaring in long
// double with rescaling. Returns -inf for nilpotent matrices.
double gelfand_log_radius(const std::vector<std::vector<int>>& a) {
  const std::size_t k = a.size();
  std::vector<std::vector<long double>> m(k, std::vector<long double>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m[i][j] = a[i][j];
  long double scale = 0;
  const int rounds = 48;
  for (int r = 0; r < rounds; ++r) {
    std::vector<std::vector<long double>> sq(k, std::vector<long double>(k, 0));
    long double mx = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t l = 0; l < k; ++l)
        if (m[i][l] != 0)
          for (std::size_t j = 0; j < k; ++j) sq[i][j] += m[i][l] * m[l][j];
    for (auto& row : sq)
      for (auto v : row) mx = std::max(mx, v);
    if (mx == 0) return -std::numeric_limits<double>::infinity();
    for (auto& row : sq)
      for (auto& v : row) v /= mx;
    scale = 2 * scale + std::log(mx);
    m = std::move(sq);
  }
  return static_cast<double>(scale / std::ldexp(1.0L, rounds));
}

// Every consecutive pair of the window is a transition of s.
bool walk_ok(const Subshift& s, const SymbolicPoint& sp, long reach) {
  const auto w = sp.window(-reach, reach);
  return s.admissible(w);
}

}  // namespace

TEST_SUITE("sft") {
  TEST_CASE("golden mean entropy") {
    const Subshift s = from_matrix({{0, 1}, {1, 1}});
    const EntropyResult e = entropy(s);
    const double golden = std::log((1 + std::sqrt(5.0)) / 2);
    CHECK(e.value == doctest::Approx(golden).epsilon(1e-12));
    CHECK(e.lower <= e.value);
    CHECK(e.value <= e.upper);
    CHECK(e.upper - e.lower < 1e-10);
    CHECK_FALSE(e.empty);
    CHECK(dimension(e.value, make_context(5)) == doctest::Approx(2.0).epsilon(1e-9));
  }

  TEST_CASE("simple spectra") {
    CHECK(entropy(from_matrix({{1, 1}, {1, 1}})).value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(entropy(from_matrix({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}})).value == doctest::Approx(0.0));
    CHECK(entropy(from_matrix({{1}})).value == doctest::Approx(0.0));
    // Reducible: golden block feeding into a full 2-shift block.
    const auto e = entropy(from_matrix({{0, 1, 1, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 1}}));
    CHECK(e.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }

  TEST_CASE("empty shifts") {
    const auto e = entropy(from_matrix({{0, 1}, {0, 0}}));
    CHECK(e.empty);
    CHECK(essential_part(from_matrix({{0, 1}, {0, 0}})).empty());
    const Partition p0 = generator(make_context(5));
    CHECK(avoid(p0, {1}).empty());
    CHECK(avoid(p0, {}).size() == 2);
    CHECK(entropy(avoid(p0, {1})).empty);
  }

  TEST_CASE("entropy agrees with the Gelfand formula on random matrices") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t k = 2 + trial % 9;
      std::bernoulli_distribution bit(trial % 3 == 0 ? 0.2 : 0.45);
      std::vector<std::vector<int>> a(k, std::vector<int>(k));
      for (auto& row : a)
        for (auto& v : row) v = bit(rng);
      const EntropyResult e = entropy(from_matrix(a));
      const double ref = gelfand_log_radius(a);
      CAPTURE(trial);
      if (std::isinf(ref)) {
        CHECK(e.empty);
      } else {
        CHECK_FALSE(e.empty);
        CHECK(e.value == doctest::Approx(ref).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("removing symbols never raises entropy") {
    const Partition p = partition_at_level(make_context(5), 2);
    std::vector<int> forbidden;
    double prev = entropy(full_shift(p)).value;
    for (int id : {3, 7, 0, 11}) {
      forbidden.push_back(id);
      const auto e = entropy(avoid(p, forbidden));
      const double v = e.empty ? 0.0 : e.value;
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }

  TEST_CASE("dimension conversion") {
    const FieldContext ctx = make_context(2);
    CHECK(dimension(0.0, ctx) == 0.0);
    CHECK(dimension(ctx.log_eps / 2, ctx) == doctest::Approx(1.0));
    CHECK(dimension(ctx.log_eps * (1 + 1e-11), ctx) == 2.0);
    CHECK_THROWS_AS(dimension(-0.1, ctx), ConfigError);
    CHECK_THROWS_AS(dimension(ctx.log_eps * 1.1, ctx), InvariantError);
  }

  TEST_CASE("full shift in block form") {
    const FieldContext ctx = make_context(5);
    const Partition p0 = generator(ctx);
    const Partition p1 = refine(p0);
    const Subshift s0 = full_shift(p0);
    const Subshift up = block_recode(s0, 1, &p1);
    CHECK(up.size() == 5);
    CHECK(up.level == 1);
    CHECK(entropy(up).value == doctest::Approx(entropy(s0).value).epsilon(1e-12));
    // The level-1 block shift has exactly the transitions of P_1.
    const Subshift s1 = full_shift(p1);
    CHECK(up.ids == s1.ids);
    CHECK(up.succ == s1.succ);
    const Subshift down = block_recode(s1, 0, &p0);
    CHECK(down.ids == s0.ids);
    CHECK(down.succ == s0.succ);
    CHECK_THROWS_AS(block_recode(full_shift(refine(p1)), 0), ConfigError);
  }

  TEST_CASE("conjugate presentations share entropy") {
    const FieldContext ctx = make_context(13);
    const Partition p1 = partition_at_level(ctx, 1);
    const Partition p2 = refine(p1);
    const Subshift s = avoid(p1, {0, 5, 9});
    const Subshift up = block_recode(s, 2, &p2);
    CHECK(entropy(up).value == doctest::Approx(entropy(s).value).epsilon(1e-10));
    const Subshift up2 = block_recode(s, 3);
    CHECK(entropy(up2).value == doctest::Approx(entropy(s).value).epsilon(1e-10));
  }

  TEST_CASE("a projection that does not lift back is rejected") {
    // Level-1 shift forbidding the word-pair that the level-0 graph would allow.
    const Partition p1 = partition_at_level(make_context(5), 1);
    Subshift s = full_shift(p1);
    bool removed = false;
    for (std::size_t i = 0; i < s.size() && !removed; ++i) {
      if (s.succ[i].size() > 1) {
        s.succ[i].erase(s.succ[i].begin());
        removed = true;
      }
    }
    REQUIRE(removed);
    CHECK_THROWS_AS(block_recode(s, 0), InvariantError);
  }

  TEST_CASE("periodize keeps the word and closes both flanks") {
    const Subshift s = from_matrix({{0, 1}, {1, 1}});
    const SymbolicPoint a = periodize(s, {1, 0, 1}, {}, {}, 1);
    CHECK(a.at(0) == 0);
    CHECK(a.window(-1, 1) == std::vector<int>{1, 0, 1});
    CHECK(walk_ok(s, a, 20));

    // A periodic right flank is kept whole, with its minimal period.
    const SymbolicPoint b = periodize(s, {0}, {1, 1, 1}, {1, 0, 1, 0, 1, 0});
    CHECK(b.window(1, 6) == std::vector<int>{1, 0, 1, 0, 1, 0});
    CHECK(b.right_loop.size() == 2);
    CHECK(b.window(-3, -1) == std::vector<int>{1, 1, 1});
    CHECK(b.left_loop == std::vector<int>{1});
    CHECK(walk_ok(s, b, 30));

    CHECK_THROWS_AS(periodize(s, {0, 0}, {}, {}), ConfigError);
    CHECK_THROWS_AS(periodize(s, {}, {}, {}), ConfigError);
    CHECK_THROWS_AS(periodize(from_matrix({{0, 1}, {0, 0}}), {0}, {}, {}), ConfigError);
  }

  TEST_CASE("random points are admissible with short periods") {
    const Partition p = partition_at_level(make_context(2), 1);
    const Subshift s = avoid(p, {1, 4, 8});
    std::mt19937_64 rng(99);
    for (int k = 0; k < 50; ++k) {
      const SymbolicPoint sp = random_point(s, rng, 12);
      CHECK_NOTHROW(sp.validate());
      CHECK(walk_ok(s, sp, 60));
      CHECK(sp.left_loop.size() <= s.size() + 1);
      CHECK(sp.right_loop.size() <= s.size() + 1);
    }
  }

  TEST_CASE("transition export") {
    std::ostringstream out;
    write_transitions(out, from_matrix({{0, 1}, {1, 1}}));
    CHECK(out.str() == "# level 0\n# symbols 2\n# nonzeros 3\n# symbol ids: 0 1\n0 1 1\n1 0 1\n1 1 1\n");
  }
}

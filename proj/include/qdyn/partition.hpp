#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdyn/lattice.hpp"
#include "qdyn/qfield.hpp"
#include "qdyn/torus.hpp"

namespace qdyn {

/// Coordinate word A_{-n} ... A_0 ... A_n over the level-0 alphabet.
using Word = std::vector<int>;

/// Open rectangle in the (s,u) plane, sides parallel to the axes, exact
/// endpoints. The plane representative always lies in the base footprint.
struct Rect {
  Interval s;
  Interval u;
  Word word;
  /// s.lo, s.hi, u.lo, u.hi in double, for prefiltering only.
  std::array<double, 4> approx{};

  Rect() = default;
  Rect(Interval s_, Interval u_, Word w);
  QElem area() const { return s.length() * u.length(); }
  void refresh_approx();
};

/// One connected piece A ∩ phi^k(B + shift) of a torus intersection, as seen
/// inside the plane representative of A.
struct Piece {
  int target = -1;
  LatticePoint shift;
  Interval s;        ///< clipped to A
  Interval u;        ///< clipped to A
  Interval image_s;  ///< phi^k(B + shift), unclipped
  Interval image_u;
};

/// All pieces A ∩ phi^k(B + lambda) with nonempty interior.
std::vector<Piece> image_pieces(const FieldContext& ctx, const Rect& a, const Rect& b, long k);

struct Partition {
  FieldContext ctx;
  int level = 0;
  /// Level-0 alphabet: the symbols coordinate words are spelled in.
  std::vector<Rect> generator;
  /// For each generator symbol, the base rectangle (0 or 1) it sits in.
  std::vector<int> base_parent;
  std::vector<Rect> rects;
  std::vector<std::vector<int>> successors;

  std::size_t size() const { return rects.size(); }
  /// Index of the member with this coordinate word, or -1.
  int find(const Word& w) const;
  std::vector<std::pair<int, int>> transitions() const;
  /// Rebuilds the word lookup and the spatial grid; call after editing rects.
  void rebuild_index();

  /// A member together with a lattice translate.
  struct Hit {
    int index;
    long m;
    long n;
  };
  /// Every (member, translate) whose closed box might meet the given closed
  /// box. Floating-point prefilter with a safety margin: callers decide exactly.
  std::vector<Hit> overlapping(double s_lo, double s_hi, double u_lo, double u_hi) const;

 private:
  std::map<Word, int> index_;
  std::array<double, 4> bbox_{};
  int grid_s_ = 0;
  int grid_u_ = 0;
  std::vector<std::vector<int>> cells_;
  void cell_range(double lo, double hi, bool s_axis, int& first, int& last) const;
};

/// The two-rectangle Adler partition {R_0, R_1}:
/// R_0 = [0, -conj(alpha)] x [0, 1] and R_1 = [-1, 0] x [0, alpha].
std::array<Rect, 2> base_rectangles(const FieldContext& ctx);

/// Level-0 Markov generator: the base pair itself when every A ∩ phi^{-1}(B)
/// is connected, otherwise the connected components of those intersections.
/// Throws InvariantError if the result fails verify_markov.
Partition generator(const FieldContext& ctx, const std::array<Rect, 2>& base);
Partition generator(const FieldContext& ctx);

/// P_{n+1} from P_n, computed geometrically from the generator.
Partition refine(const Partition& p);
/// P_level for a context, refining from the generator.
Partition partition_at_level(const FieldContext& ctx, int level);

struct MarkovReport {
  bool ok = true;
  std::string message;
  int first = -1;   ///< offending pair, -1 when ok
  int second = -1;
  explicit operator bool() const { return ok; }
};

/// Exact Markov check: for every geometrically admissible (A, B) there is a
/// single piece A ∩ phi^{-1}(B + lambda); it spans A's whole stable interval
/// and stays inside A's unstable interval; the pieces tile A's unstable
/// interval; and the admissible pairs equal p.successors.
MarkovReport verify_markov(const Partition& p);

/// Members' O_K-translates have pairwise disjoint interiors and the total
/// area equals the covolume.
MarkovReport verify_tiling(const Partition& p);

/// Word nesting: every member of P_n lies inside the member of P_{n-1}
/// named by its truncated word.
MarkovReport verify_nesting(const Partition& finer, const Partition& coarser);

/// Torus point membership in closed members: (index, representative in the closure).
std::vector<std::pair<int, PointSU>> locate_closed(const Partition& p, const PointSU& point);

nlohmann::json qelem_to_json(const QElem& x);
QElem qelem_from_json(const nlohmann::json& j, long d);
nlohmann::json partition_to_json(const Partition& p);

}  // namespace qdyn

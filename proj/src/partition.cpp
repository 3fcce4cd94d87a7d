#include "qdyn/partition.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "qdyn/errors.hpp"

namespace qdyn {

Rect::Rect(Interval s_, Interval u_, Word w) : s(std::move(s_)), u(std::move(u_)), word(std::move(w)) {
  refresh_approx();
}

void Rect::refresh_approx() { approx = {s.lo.to_double(), s.hi.to_double(), u.lo.to_double(), u.hi.to_double()}; }

int Partition::find(const Word& w) const {
  auto it = index_.find(w);
  return it == index_.end() ? -1 : it->second;
}

void Partition::rebuild_index() {
  index_.clear();
  for (std::size_t i = 0; i < rects.size(); ++i) index_.emplace(rects[i].word, static_cast<int>(i));
  cells_.clear();
  if (rects.empty()) return;
  bbox_ = rects.front().approx;
  for (const Rect& r : rects) {
    bbox_[0] = std::min(bbox_[0], r.approx[0]);
    bbox_[1] = std::max(bbox_[1], r.approx[1]);
    bbox_[2] = std::min(bbox_[2], r.approx[2]);
    bbox_[3] = std::max(bbox_[3], r.approx[3]);
  }
  grid_s_ = grid_u_ = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(rects.size())))) + 1;
  cells_.assign(static_cast<std::size_t>(grid_s_) * grid_u_, {});
  for (std::size_t i = 0; i < rects.size(); ++i) {
    int s0, s1, u0, u1;
    cell_range(rects[i].approx[0], rects[i].approx[1], true, s0, s1);
    cell_range(rects[i].approx[2], rects[i].approx[3], false, u0, u1);
    for (int a = s0; a <= s1; ++a)
      for (int b = u0; b <= u1; ++b) cells_[static_cast<std::size_t>(a) * grid_u_ + b].push_back(static_cast<int>(i));
  }
}

void Partition::cell_range(double lo, double hi, bool s_axis, int& first, int& last) const {
  const double b_lo = s_axis ? bbox_[0] : bbox_[2];
  const double b_hi = s_axis ? bbox_[1] : bbox_[3];
  const int cells = s_axis ? grid_s_ : grid_u_;
  const double width = (b_hi - b_lo) / cells;
  first = std::clamp(static_cast<int>(std::floor((lo - b_lo) / width)) - 1, 0, cells - 1);
  last = std::clamp(static_cast<int>(std::floor((hi - b_lo) / width)) + 1, 0, cells - 1);
}

std::vector<Partition::Hit> Partition::overlapping(double s_lo, double s_hi, double u_lo, double u_hi) const {
  std::vector<Hit> out;
  if (cells_.empty()) return out;
  const double margin = 1e-9 * (1.0 + std::max({std::abs(s_lo), std::abs(s_hi), std::abs(u_lo), std::abs(u_hi)}));
  std::vector<char> seen(rects.size(), 0);
  std::vector<int> touched;
  for (auto [m, n] : lattice_candidates(ctx, s_lo - bbox_[1], s_hi - bbox_[0], u_lo - bbox_[3], u_hi - bbox_[2])) {
    const double ls = static_cast<double>(m) + static_cast<double>(n) * ctx.alpha_conj_d;
    const double lu = static_cast<double>(m) + static_cast<double>(n) * ctx.alpha_d;
    const double qs_lo = s_lo - ls, qs_hi = s_hi - ls, qu_lo = u_lo - lu, qu_hi = u_hi - lu;
    if (qs_hi < bbox_[0] - margin || qs_lo > bbox_[1] + margin || qu_hi < bbox_[2] - margin ||
        qu_lo > bbox_[3] + margin)
      continue;
    int s0, s1, u0, u1;
    cell_range(qs_lo, qs_hi, true, s0, s1);
    cell_range(qu_lo, qu_hi, false, u0, u1);
    for (int a = s0; a <= s1; ++a) {
      for (int b = u0; b <= u1; ++b) {
        for (int i : cells_[static_cast<std::size_t>(a) * grid_u_ + b]) {
          if (seen[i]) continue;
          seen[i] = 1;
          touched.push_back(i);
          const auto& r = rects[i].approx;
          if (r[0] <= qs_hi + margin && qs_lo <= r[1] + margin && r[2] <= qu_hi + margin && qu_lo <= r[3] + margin)
            out.push_back({i, m, n});
        }
      }
    }
    for (int i : touched) seen[i] = 0;
    touched.clear();
  }
  return out;
}

std::vector<std::pair<int, int>> Partition::transitions() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < successors.size(); ++i) {
    for (int j : successors[i]) out.emplace_back(static_cast<int>(i), j);
  }
  return out;
}

namespace {

// Scale factors of phi^k on the stable and unstable axes.
struct PhiPower {
  long k = 0;
  QElem s_factor;
  QElem u_factor;
  double s_d = 1.0;
  double u_d = 1.0;
};

PhiPower phi_power(const FieldContext& ctx, long k) {
  PhiPower p;
  p.k = k;
  p.s_factor = ctx.eps_conj_pow(k);
  p.u_factor = ctx.eps_pow(k);
  p.s_d = p.s_factor.to_double();
  p.u_d = p.u_factor.to_double();
  return p;
}

std::pair<double, double> ordered(double a, double b) { return a <= b ? std::pair{a, b} : std::pair{b, a}; }

Interval intersect(const Interval& a, const Interval& b) { return {max(a.lo, b.lo), min(a.hi, b.hi)}; }

// A ∩ phi^k(B + lambda) when it has interior.
std::optional<Piece> piece_for(const PhiPower& pw, const Rect& a, const Rect& b, LatticePoint lambda, int target) {
  Interval img_s = b.s.shifted(lambda.s).scaled(pw.s_factor);
  if (!a.s.overlaps_open(img_s)) return std::nullopt;
  Interval img_u = b.u.shifted(lambda.u).scaled(pw.u_factor);
  if (!a.u.overlaps_open(img_u)) return std::nullopt;
  Piece piece;
  piece.target = target;
  piece.s = intersect(a.s, img_s);
  piece.u = intersect(a.u, img_u);
  piece.image_s = std::move(img_s);
  piece.image_u = std::move(img_u);
  piece.shift = std::move(lambda);
  return piece;
}

std::vector<Piece> pieces_with(const FieldContext& ctx, const PhiPower& pw, const Rect& a, const Rect& b,
                               int target) {
  // phi^k(B + lambda) meets A  <=>  lambda lies in phi^{-k}(A) - B (open Minkowski box).
  auto [as_lo, as_hi] = ordered(a.approx[0] / pw.s_d, a.approx[1] / pw.s_d);
  auto [au_lo, au_hi] = ordered(a.approx[2] / pw.u_d, a.approx[3] / pw.u_d);
  std::vector<Piece> out;
  for (auto [m, n] : lattice_candidates(ctx, as_lo - b.approx[1], as_hi - b.approx[0], au_lo - b.approx[3],
                                        au_hi - b.approx[2])) {
    if (auto piece = piece_for(pw, a, b, lattice_point(ctx, Integer(m), Integer(n)), target))
      out.push_back(std::move(*piece));
  }
  std::sort(out.begin(), out.end(), [](const Piece& x, const Piece& y) {
    if (x.u.lo != y.u.lo) return x.u.lo < y.u.lo;
    return x.s.lo < y.s.lo;
  });
  return out;
}

std::string word_str(const Word& w) {
  std::ostringstream out;
  for (std::size_t i = 0; i < w.size(); ++i) out << (i ? "," : "") << w[i];
  return out.str();
}

std::string pair_str(const Partition& p, int i, int j) {
  return "(" + word_str(p.rects[i].word) + ") -> (" + word_str(p.rects[j].word) + ")";
}

}  // namespace

std::vector<Piece> image_pieces(const FieldContext& ctx, const Rect& a, const Rect& b, long k) {
  return pieces_with(ctx, phi_power(ctx, k), a, b, -1);
}

std::array<Rect, 2> base_rectangles(const FieldContext& ctx) {
  return {Rect({QElem(0), -ctx.alpha_conj}, {QElem(0), QElem(1)}, {0}),
          Rect({QElem(-1), QElem(0)}, {QElem(0), ctx.alpha}, {1})};
}

Partition generator(const FieldContext& ctx, const std::array<Rect, 2>& base) {
  const PhiPower inv = phi_power(ctx, -1);
  std::array<std::array<std::vector<Piece>, 2>, 2> pieces;
  bool connected = true;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      pieces[a][b] = pieces_with(ctx, inv, base[a], base[b], b);
      connected = connected && pieces[a][b].size() <= 1;
    }
  }

  Partition p;
  p.ctx = ctx;
  p.level = 0;
  if (connected) {
    for (int a = 0; a < 2; ++a) {
      p.generator.push_back(Rect(base[a].s, base[a].u, {a}));
      p.base_parent.push_back(a);
    }
  } else {
    for (int a = 0; a < 2; ++a) {
      std::vector<Piece> strips;
      for (int b = 0; b < 2; ++b) strips.insert(strips.end(), pieces[a][b].begin(), pieces[a][b].end());
      std::sort(strips.begin(), strips.end(), [](const Piece& x, const Piece& y) { return x.u.lo < y.u.lo; });
      for (const Piece& piece : strips) {
        const int g = static_cast<int>(p.generator.size());
        p.generator.push_back(Rect(piece.s, piece.u, {g}));
        p.base_parent.push_back(a);
      }
    }
  }
  p.rects = p.generator;
  p.successors.assign(p.rects.size(), {});
  for (std::size_t i = 0; i < p.rects.size(); ++i) {
    for (std::size_t j = 0; j < p.rects.size(); ++j) {
      if (!pieces_with(ctx, inv, p.rects[i], p.rects[j], static_cast<int>(j)).empty())
        p.successors[i].push_back(static_cast<int>(j));
    }
  }
  p.rebuild_index();
  if (MarkovReport report = verify_markov(p); !report) {
    throw InvariantError("generator for D = " + std::to_string(ctx.D) + " fails the Markov check: " + report.message);
  }
  return p;
}

Partition generator(const FieldContext& ctx) { return generator(ctx, base_rectangles(ctx)); }

Partition refine(const Partition& p) {
  const FieldContext& ctx = p.ctx;
  const long k = p.level + 1;
  const PhiPower forward = phi_power(ctx, -k);
  const PhiPower backward = phi_power(ctx, k);
  const std::size_t g_count = p.generator.size();
  // Admissibility among generator symbols.
  std::vector<std::vector<int>> gen_succ(g_count);
  std::vector<std::vector<int>> gen_pred(g_count);
  {
    const PhiPower inv = phi_power(ctx, -1);
    for (std::size_t i = 0; i < g_count; ++i) {
      for (std::size_t j = 0; j < g_count; ++j) {
        if (!pieces_with(ctx, inv, p.generator[i], p.generator[j], static_cast<int>(j)).empty()) {
          gen_succ[i].push_back(static_cast<int>(j));
          gen_pred[j].push_back(static_cast<int>(i));
        }
      }
    }
  }

  Partition out;
  out.ctx = ctx;
  out.level = p.level + 1;
  out.generator = p.generator;
  out.base_parent = p.base_parent;
  for (const Rect& x : p.rects) {
    // u-interval fixed by the new right symbol, s-interval by the new left one.
    std::vector<std::pair<int, Interval>> right;
    for (int g : gen_succ[x.word.back()]) {
      auto ps = pieces_with(ctx, forward, x, p.generator[g], g);
      if (ps.size() > 1)
        throw InvariantError("refine: " + word_str(x.word) + " meets phi^-" + std::to_string(k) + "(" +
                             std::to_string(g) + ") in " + std::to_string(ps.size()) + " pieces");
      if (!ps.empty()) right.emplace_back(g, ps.front().u);
    }
    std::vector<std::pair<int, Interval>> left;
    for (int c : gen_pred[x.word.front()]) {
      auto ps = pieces_with(ctx, backward, x, p.generator[c], c);
      if (ps.size() > 1)
        throw InvariantError("refine: " + word_str(x.word) + " meets phi^" + std::to_string(k) + "(" +
                             std::to_string(c) + ") in " + std::to_string(ps.size()) + " pieces");
      if (!ps.empty()) left.emplace_back(c, ps.front().s);
    }
    for (const auto& [c, s_int] : left) {
      for (const auto& [g, u_int] : right) {
        Word w;
        w.reserve(x.word.size() + 2);
        w.push_back(c);
        w.insert(w.end(), x.word.begin(), x.word.end());
        w.push_back(g);
        out.rects.emplace_back(s_int, u_int, std::move(w));
      }
    }
  }
  std::sort(out.rects.begin(), out.rects.end(), [](const Rect& a, const Rect& b) { return a.word < b.word; });
  out.rebuild_index();
  out.successors.assign(out.rects.size(), {});
  for (std::size_t i = 0; i < out.rects.size(); ++i) {
    const Word& w = out.rects[i].word;
    Word next(w.begin() + 1, w.end());
    next.push_back(0);
    for (std::size_t g = 0; g < g_count; ++g) {
      next.back() = static_cast<int>(g);
      if (int j = out.find(next); j >= 0) out.successors[i].push_back(j);
    }
  }
  return out;
}

Partition partition_at_level(const FieldContext& ctx, int level) {
  if (level < 0) throw ConfigError("refinement level must be >= 0");
  Partition p = generator(ctx);
  for (int i = 0; i < level; ++i) p = refine(p);
  return p;
}

MarkovReport verify_markov(const Partition& p) {
  const FieldContext& ctx = p.ctx;
  const PhiPower inv = phi_power(ctx, -1);
  auto fail = [&](int i, int j, std::string msg) {
    MarkovReport r;
    r.ok = false;
    r.first = i;
    r.second = j;
    r.message = (j >= 0 ? pair_str(p, i, j) + ": " : "(" + word_str(p.rects[i].word) + "): ") + msg;
    return r;
  };
  for (std::size_t i = 0; i < p.rects.size(); ++i) {
    const Rect& a = p.rects[i];
    const int ii = static_cast<int>(i);
    // Candidates B + lambda meeting phi(A).
    auto [fs_lo, fs_hi] = ordered(a.approx[0] * ctx.eps_conj_d, a.approx[1] * ctx.eps_conj_d);
    std::map<int, std::vector<Piece>> by_target;
    for (const auto& hit : p.overlapping(fs_lo, fs_hi, a.approx[2] * ctx.eps_d, a.approx[3] * ctx.eps_d)) {
      if (auto piece = piece_for(inv, a, p.rects[hit.index], lattice_point(ctx, Integer(hit.m), Integer(hit.n)),
                                 hit.index))
        by_target[hit.index].push_back(std::move(*piece));
    }
    std::vector<Piece> all;
    std::vector<int> geometric;
    for (auto& [jj, ps] : by_target) {
      if (ps.size() > 1) return fail(ii, jj, "intersection has " + std::to_string(ps.size()) + " components");
      const Piece& piece = ps.front();
      if (!piece.image_s.contains(a.s)) return fail(ii, jj, "preimage does not span the stable side");
      if (!a.u.contains(piece.image_u)) return fail(ii, jj, "preimage sticks out of the unstable side");
      geometric.push_back(jj);
      all.push_back(piece);
    }
    std::sort(all.begin(), all.end(), [](const Piece& x, const Piece& y) { return x.u.lo < y.u.lo; });
    if (all.empty()) return fail(ii, -1, "no admissible successor");
    if (all.front().u.lo != a.u.lo || all.back().u.hi != a.u.hi)
      return fail(ii, all.front().target, "strips do not reach the unstable ends");
    for (std::size_t k = 1; k < all.size(); ++k) {
      if (all[k - 1].u.hi != all[k].u.lo) return fail(ii, all[k].target, "strips leave a gap or overlap");
    }
    std::vector<int> declared = i < p.successors.size() ? p.successors[i] : std::vector<int>{};
    std::sort(declared.begin(), declared.end());
    if (declared != geometric) {
      int witness = -1;
      std::vector<int> diff;
      std::set_symmetric_difference(declared.begin(), declared.end(), geometric.begin(), geometric.end(),
                                    std::back_inserter(diff));
      if (!diff.empty()) witness = diff.front();
      return fail(ii, witness, "declared transitions differ from the geometry");
    }
  }
  return {};
}

MarkovReport verify_tiling(const Partition& p) {
  const FieldContext& ctx = p.ctx;
  QElem total(0);
  for (const Rect& r : p.rects) total += r.area();
  if (total != ctx.covolume()) {
    MarkovReport r;
    r.ok = false;
    r.message = "total area " + total.str() + " differs from covolume " + ctx.covolume().str();
    return r;
  }
  for (std::size_t i = 0; i < p.rects.size(); ++i) {
    const Rect& a = p.rects[i];
    for (const auto& hit : p.overlapping(a.approx[0], a.approx[1], a.approx[2], a.approx[3])) {
      if (hit.index == static_cast<int>(i) && hit.m == 0 && hit.n == 0) continue;
      const Rect& b = p.rects[hit.index];
      LatticePoint lambda = lattice_point(ctx, Integer(hit.m), Integer(hit.n));
      if (a.s.overlaps_open(b.s.shifted(lambda.s)) && a.u.overlaps_open(b.u.shifted(lambda.u))) {
        MarkovReport r;
        r.ok = false;
        r.first = static_cast<int>(i);
        r.second = hit.index;
        r.message = "translate by (" + std::to_string(hit.m) + "," + std::to_string(hit.n) + ") of (" +
                    word_str(b.word) + ") overlaps (" + word_str(a.word) + ")";
        return r;
      }
    }
  }
  return {};
}

MarkovReport verify_nesting(const Partition& finer, const Partition& coarser) {
  for (std::size_t i = 0; i < finer.rects.size(); ++i) {
    const Rect& r = finer.rects[i];
    MarkovReport rep;
    rep.first = static_cast<int>(i);
    if (r.word.size() < 3) {
      rep.ok = false;
      rep.message = "word too short to truncate";
      return rep;
    }
    const Word truncated(r.word.begin() + 1, r.word.end() - 1);
    const int j = coarser.find(truncated);
    if (j < 0) {
      rep.ok = false;
      rep.message = "truncated word (" + word_str(truncated) + ") missing at the coarser level";
      return rep;
    }
    const Rect& parent = coarser.rects[j];
    if (!parent.s.contains(r.s) || !parent.u.contains(r.u)) {
      rep.ok = false;
      rep.second = j;
      rep.message = "(" + word_str(r.word) + ") not inside its parent";
      return rep;
    }
  }
  return {};
}

std::vector<std::pair<int, PointSU>> locate_closed(const Partition& p, const PointSU& point) {
  std::vector<std::pair<int, PointSU>> out;
  const double ps = point.s.to_double(), pu = point.u.to_double();
  for (const auto& hit : p.overlapping(ps, ps, pu, pu)) {
    const Rect& a = p.rects[hit.index];
    // B + lambda contains the point  <=>  point - lambda lies in B.
    LatticePoint lambda = lattice_point(p.ctx, Integer(hit.m), Integer(hit.n));
    PointSU rep{point.s - lambda.s, point.u - lambda.u};
    if (a.s.contains(rep.s) && a.u.contains(rep.u)) out.emplace_back(hit.index, std::move(rep));
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

nlohmann::json qelem_to_json(const QElem& x) {
  return {{"a", {x.a().get_num().get_str(), x.a().get_den().get_str()}},
          {"b", {x.b().get_num().get_str(), x.b().get_den().get_str()}}};
}

QElem qelem_from_json(const nlohmann::json& j, long d) {
  auto part = [&](const char* key) {
    const auto& pair = j.at(key);
    Rational r(Integer(pair.at(0).get<std::string>()), Integer(pair.at(1).get<std::string>()));
    r.canonicalize();
    return r;
  };
  Rational a = part("a");
  Rational b = part("b");
  if (sgn(b) == 0) return QElem(a);
  return QElem(a, b, d);
}

nlohmann::json partition_to_json(const Partition& p) {
  auto rect_json = [](const Rect& r) {
    return nlohmann::json{{"word", r.word},
                          {"s", {qelem_to_json(r.s.lo), qelem_to_json(r.s.hi)}},
                          {"u", {qelem_to_json(r.u.lo), qelem_to_json(r.u.hi)}}};
  };
  nlohmann::json j;
  j["D"] = p.ctx.D;
  j["level"] = p.level;
  j["eps"] = qelem_to_json(p.ctx.eps);
  j["generator"] = nlohmann::json::array();
  for (std::size_t g = 0; g < p.generator.size(); ++g) {
    auto r = rect_json(p.generator[g]);
    r["base"] = p.base_parent[g];
    j["generator"].push_back(std::move(r));
  }
  j["rectangles"] = nlohmann::json::array();
  for (const Rect& r : p.rects) j["rectangles"].push_back(rect_json(r));
  j["transitions"] = nlohmann::json::array();
  for (auto [a, b] : p.transitions()) j["transitions"].push_back({a, b});
  return j;
}

}  // namespace qdyn

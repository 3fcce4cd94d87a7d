#include "qdyn/coding.hpp"

#include <algorithm>
#include <map>

#include "qdyn/errors.hpp"

namespace qdyn {

namespace {

const Piece& single_piece(const std::vector<Piece>& ps, const char* what) {
  if (ps.empty()) throw ConfigError(std::string(what) + ": pair is not admissible");
  if (ps.size() > 1) throw InvariantError(std::string(what) + ": intersection is not connected");
  return ps.front();
}

}  // namespace

QElem rho_u(const Partition& p, int a, int b) {
  const Rect& A = p.rects.at(a);
  const auto ps = image_pieces(p.ctx, A, p.rects.at(b), -1);
  return (single_piece(ps, "rho_u").u.lo - A.u.lo) / A.u.length();
}

QElem rho_s(const Partition& p, int a, int b, bool plus) {
  const Rect& A = p.rects.at(a);
  const auto ps = image_pieces(p.ctx, A, p.rects.at(b), 1);
  const Piece& piece = single_piece(ps, "rho_s");
  return (plus ? piece.s.lo - A.s.lo : A.s.hi - piece.s.hi) / A.s.length();
}

Coder::Coder(const Partition& p) : p_(p) {
  p0_.ctx = p.ctx;
  p0_.level = 0;
  p0_.generator = p.generator;
  p0_.base_parent = p.base_parent;
  p0_.rects = p.generator;
  const std::size_t g = p.generator.size();
  p0_.successors.assign(g, {});
  steps_.assign(g, std::vector<Step>(g));
  for (std::size_t a = 0; a < g; ++a) {
    const Rect& A = p0_.rects[a];
    for (std::size_t b = 0; b < g; ++b) {
      const auto forward = image_pieces(p.ctx, A, p0_.rects[b], -1);
      if (forward.empty()) continue;
      const Piece& fp = single_piece(forward, "coder");
      Step& st = steps_[a][b];
      st.ok = true;
      st.rho_u = (fp.u.lo - A.u.lo) / A.u.length();
      st.shift = fp.shift;
      st.s = fp.s;
      st.u = fp.u;
      p0_.successors[a].push_back(static_cast<int>(b));
    }
  }
  // Stable offsets: step (a, b) stores rho_s(a, b) for b -> a.
  for (std::size_t a = 0; a < g; ++a) {
    const Rect& A = p0_.rects[a];
    for (std::size_t b = 0; b < g; ++b) {
      if (!steps_[b][a].ok) continue;
      const auto backward = image_pieces(p.ctx, A, p0_.rects[b], 1);
      const Piece& bp = single_piece(backward, "coder");
      steps_[a][b].rho_s_plus = (bp.s.lo - A.s.lo) / A.s.length();
      steps_[a][b].rho_s_minus = (A.s.hi - bp.s.hi) / A.s.length();
    }
  }
  p0_.rebuild_index();
}

SymbolicPoint Coder::project(const SymbolicPoint& sp) const {
  SymbolicPoint out = sp;
  out.level = 0;
  auto centre = [&](std::vector<int>& v) {
    for (int& x : v) {
      if (x < 0 || static_cast<std::size_t>(x) >= p_.size()) throw ConfigError("symbol outside the alphabet");
      x = p_.rects[x].word[p_.level];
    }
  };
  centre(out.left_loop);
  centre(out.middle);
  centre(out.right_loop);
  return out;
}

bool Coder::admissible(const SymbolicPoint& sp) const {
  sp.validate();
  const long lo = -static_cast<long>(sp.origin + sp.left_loop.size()) - 1;
  const long hi = static_cast<long>(sp.middle.size() + sp.right_loop.size()) + 1;
  for (long i = lo; i < hi; ++i) {
    const int a = sp.at(i), b = sp.at(i + 1);
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= p_.size() || static_cast<std::size_t>(b) >= p_.size())
      return false;
    const auto& row = p_.successors[a];
    if (std::find(row.begin(), row.end(), b) == row.end()) return false;
  }
  return true;
}

namespace {

// sum_{i >= 0} term(i) r^i where term is periodic with period q from index h on.
template <class Term>
QElem eventually_geometric(const FieldContext& ctx, Term term, long h, long q) {
  QElem head(0);
  QElem rp(1);
  const QElem r = ctx.eps_inv;
  for (long i = 0; i < h; ++i) {
    head += term(i) * rp;
    rp *= r;
  }
  QElem block(0);
  QElem rj(1);
  for (long j = 0; j < q; ++j) {
    block += term(h + j) * rj;
    rj *= r;
  }
  // rj == r^q now.
  return head + rp * block / (QElem(1) - rj);
}

}  // namespace

PointSU Coder::eval(const SymbolicPoint& sp) const {
  if (sp.level != p_.level) throw ConfigError("symbolic point level does not match the partition");
  if (!admissible(sp)) throw ConfigError("symbolic point is not admissible");
  const SymbolicPoint c = project(sp);
  const FieldContext& ctx = p_.ctx;
  const int c0 = c.at(0);
  const Rect& r0 = p0_.rects[c0];

  const long h_u = static_cast<long>(c.middle.size() - c.origin);
  const long q_u = static_cast<long>(c.right_loop.size());
  const QElem u = r0.u.lo + eventually_geometric(
                                ctx,
                                [&](long i) {
                                  const int a = c.at(i), b = c.at(i + 1);
                                  return steps_[a][b].rho_u * p0_.rects[a].u.length();
                                },
                                h_u, q_u);

  const bool alternate = ctx.eps_conj_sign < 0;
  const long h_s = static_cast<long>(c.origin) + 1;
  long q_s = static_cast<long>(c.left_loop.size());
  if (alternate && q_s % 2 == 1) q_s *= 2;
  const QElem s = r0.s.lo + eventually_geometric(
                                ctx,
                                [&](long i) {
                                  const int a = c.at(-i), b = c.at(-i - 1);
                                  const Step& st = steps_[a][b];
                                  const QElem& rho = alternate && i % 2 == 1 ? st.rho_s_minus : st.rho_s_plus;
                                  return rho * p0_.rects[a].s.length();
                                },
                                h_s, q_s);
  return {s, u};
}

KPointXY Coder::eval_xy(const SymbolicPoint& sp) const { return reduce_mod1(su_to_xy(p_.ctx, eval(sp))); }

QCoding code_qpoint(const Coder& coder, const PointXY& point) {
  const Partition& p0 = coder.generator_partition();
  const Partition& p = coder.partition();
  const FieldContext& ctx = p.ctx;
  const std::vector<PointXY> orb = orbit(ctx, point);
  const std::size_t period = orb.size();

  // Nodes (layer k, generator symbol, plane representative).
  struct Node {
    std::size_t layer;
    int symbol;
    PointSU rep;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<int>> by_layer(period);
  for (std::size_t k = 0; k < period; ++k) {
    for (auto& [sym, rep] : locate_closed(p0, xy_to_su(ctx, orb[k]))) {
      by_layer[k].push_back(static_cast<int>(nodes.size()));
      nodes.push_back({k, sym, std::move(rep)});
    }
    if (by_layer[k].empty()) throw InvariantError("code_qpoint: orbit point outside every member");
  }
  std::vector<std::vector<int>> succ(nodes.size());
  std::vector<int> in_deg(nodes.size(), 0);
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    const Node& from = nodes[v];
    const PointSU image = phi_plane(ctx, from.rep, 1);
    for (int w : by_layer[(from.layer + 1) % period]) {
      const Node& to = nodes[w];
      const Coder::Step& st = coder.step(from.symbol, to.symbol);
      if (!st.ok || !st.s.contains(from.rep.s) || !st.u.contains(from.rep.u)) continue;
      if (image.s - st.shift.s == to.rep.s && image.u - st.shift.u == to.rep.u) {
        succ[v].push_back(w);
        ++in_deg[w];
      }
    }
  }
  // Prune to nodes on bi-infinite paths.
  std::vector<char> alive(nodes.size(), 1);
  std::vector<int> out_deg(nodes.size());
  std::vector<std::vector<int>> pred(nodes.size());
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    out_deg[v] = static_cast<int>(succ[v].size());
    for (int w : succ[v]) pred[w].push_back(static_cast<int>(v));
  }
  std::vector<int> queue;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (out_deg[v] == 0 || in_deg[v] == 0) {
      alive[v] = 0;
      queue.push_back(static_cast<int>(v));
    }
  }
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    for (int w : succ[v]) {
      if (alive[w] && --in_deg[w] == 0) {
        alive[w] = 0;
        queue.push_back(w);
      }
    }
    for (int w : pred[v]) {
      if (alive[w] && --out_deg[w] == 0) {
        alive[w] = 0;
        queue.push_back(w);
      }
    }
  }

  QCoding out;
  const long n = p.level;
  for (int start : by_layer[0]) {
    if (!alive[start]) continue;
    std::vector<int> loop;
    int v = start;
    do {
      int next = -1;
      for (int w : succ[v]) {
        if (!alive[w]) continue;
        if (next >= 0) throw InvariantError("code_qpoint: itineraries branch; the coding is not finite-to-one");
        next = w;
      }
      loop.push_back(nodes[v].symbol);
      v = next;
    } while (v != start && loop.size() <= nodes.size());
    if (v != start) throw InvariantError("code_qpoint: itinerary does not close up");
    // Lift to level n through coordinate words.
    const long len = static_cast<long>(loop.size());
    std::vector<int> ids;
    for (long i = 0; i < len; ++i) {
      Word w;
      for (long j = i - n; j <= i + n; ++j) w.push_back(loop[((j % len) + len) % len]);
      const int id = p.find(w);
      if (id < 0) throw InvariantError("code_qpoint: itinerary word missing from the partition");
      ids.push_back(id);
    }
    out.codings.push_back(periodic_point(std::move(ids), p.level));
  }
  if (out.codings.empty()) throw InvariantError("code_qpoint: no itinerary found");
  out.ambiguous = out.codings.size() > 1;
  return out;
}

PointSU pi_eval(const Partition& p, const SymbolicPoint& sp) { return Coder(p).eval(sp); }

QCoding code_qpoint(const Partition& p, const PointXY& point) { return code_qpoint(Coder(p), point); }

}  // namespace qdyn

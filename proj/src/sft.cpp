#include "qdyn/sft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "qdyn/errors.hpp"

namespace qdyn {

int Subshift::local(int id) const {
  auto it = std::find(ids.begin(), ids.end(), id);
  return it == ids.end() ? -1 : static_cast<int>(it - ids.begin());
}

std::vector<std::vector<int>> Subshift::predecessors() const {
  std::vector<std::vector<int>> pred(size());
  for (std::size_t i = 0; i < size(); ++i) {
    for (int j : succ[i]) pred[j].push_back(static_cast<int>(i));
  }
  return pred;
}

std::vector<std::vector<int>> Subshift::matrix() const {
  std::vector<std::vector<int>> m(size(), std::vector<int>(size(), 0));
  for (std::size_t i = 0; i < size(); ++i) {
    for (int j : succ[i]) m[i][j] = 1;
  }
  return m;
}

bool Subshift::admissible(const std::vector<int>& id_word) const {
  std::map<int, int> loc;
  for (std::size_t i = 0; i < ids.size(); ++i) loc.emplace(ids[i], static_cast<int>(i));
  int prev = -1;
  for (int id : id_word) {
    auto it = loc.find(id);
    if (it == loc.end()) return false;
    if (prev >= 0 && !std::binary_search(succ[prev].begin(), succ[prev].end(), it->second)) return false;
    prev = it->second;
  }
  return true;
}

namespace {

Subshift restrict_to(const Subshift& s, const std::vector<char>& keep) {
  Subshift out;
  out.level = s.level;
  out.forbidden = s.forbidden;
  std::vector<int> remap(s.size(), -1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!keep[i]) continue;
    remap[i] = static_cast<int>(out.ids.size());
    out.ids.push_back(s.ids[i]);
    if (!s.words.empty()) out.words.push_back(s.words[i]);
  }
  out.succ.resize(out.ids.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (remap[i] < 0) continue;
    for (int j : s.succ[i]) {
      if (remap[j] >= 0) out.succ[remap[i]].push_back(remap[j]);
    }
    std::sort(out.succ[remap[i]].begin(), out.succ[remap[i]].end());
  }
  return out;
}

// Strongly connected components (Kosaraju, iterative).
std::vector<std::vector<int>> components(const std::vector<std::vector<int>>& succ) {
  const std::size_t n = succ.size();
  std::vector<std::vector<int>> pred(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j : succ[i]) pred[j].push_back(static_cast<int>(i));
  }
  std::vector<char> seen(n, 0);
  std::vector<int> order;
  order.reserve(n);
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(root), 0}};
    seen[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < succ[v].size()) {
        const int w = succ[v][next++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] >= 0) continue;
    const int c = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack{*it};
    comp[*it] = c;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      out[c].push_back(v);
      for (int w : pred[v]) {
        if (comp[w] < 0) {
          comp[w] = c;
          stack.push_back(w);
        }
      }
    }
  }
  return out;
}

}  // namespace

Subshift essential_part(const Subshift& s) {
  const std::size_t n = s.size();
  std::vector<int> out_deg(n, 0), in_deg(n, 0);
  const auto pred = s.predecessors();
  for (std::size_t i = 0; i < n; ++i) {
    out_deg[i] = static_cast<int>(s.succ[i].size());
    in_deg[i] = static_cast<int>(pred[i].size());
  }
  std::vector<char> keep(n, 1);
  std::vector<int> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (out_deg[i] == 0 || in_deg[i] == 0) {
      keep[i] = 0;
      queue.push_back(static_cast<int>(i));
    }
  }
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    for (int w : s.succ[v]) {
      if (keep[w] && --in_deg[w] == 0) {
        keep[w] = 0;
        queue.push_back(w);
      }
    }
    for (int w : pred[v]) {
      if (keep[w] && --out_deg[w] == 0) {
        keep[w] = 0;
        queue.push_back(w);
      }
    }
  }
  return restrict_to(s, keep);
}

Subshift full_shift(const Partition& p) {
  Subshift s;
  s.level = p.level;
  for (std::size_t i = 0; i < p.size(); ++i) {
    s.ids.push_back(static_cast<int>(i));
    s.words.push_back(p.rects[i].word);
  }
  s.succ = p.successors;
  for (auto& row : s.succ) std::sort(row.begin(), row.end());
  return s;
}

Subshift avoid(const Partition& p, const std::vector<int>& forbidden) {
  Subshift s = full_shift(p);
  std::vector<char> keep(s.size(), 1);
  for (int id : forbidden) {
    if (id < 0 || static_cast<std::size_t>(id) >= s.size()) throw ConfigError("avoid: symbol outside the alphabet");
    keep[id] = 0;
  }
  s.forbidden = forbidden;
  std::sort(s.forbidden.begin(), s.forbidden.end());
  s.forbidden.erase(std::unique(s.forbidden.begin(), s.forbidden.end()), s.forbidden.end());
  return essential_part(restrict_to(s, keep));
}

Subshift from_matrix(const std::vector<std::vector<int>>& a) {
  Subshift s;
  s.succ.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != a.size()) throw ConfigError("transition matrix must be square");
    s.ids.push_back(static_cast<int>(i));
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[i][j] != 0 && a[i][j] != 1) throw ConfigError("transition matrix must be 0-1");
      if (a[i][j]) s.succ[i].push_back(static_cast<int>(j));
    }
  }
  return s;
}

EntropyResult entropy(const Subshift& s_in, double rel_tol) {
  const Subshift s = essential_part(s_in);
  EntropyResult result;
  if (s.empty()) {
    result.empty = true;
    return result;
  }
  double best_lo = 0.0, best_hi = 0.0;
  bool any = false;
  for (const auto& comp : components(s.succ)) {
    std::vector<int> pos(s.size(), -1);
    for (std::size_t k = 0; k < comp.size(); ++k) pos[comp[k]] = static_cast<int>(k);
    std::vector<std::vector<int>> local(comp.size());
    std::size_t edges = 0;
    for (std::size_t k = 0; k < comp.size(); ++k) {
      for (int w : s.succ[comp[k]]) {
        if (pos[w] >= 0) {
          local[k].push_back(pos[w]);
          ++edges;
        }
      }
    }
    if (edges == 0) continue;  // single vertex without a loop
    // Power iteration on B = I + A (primitive on an irreducible block).
    std::vector<double> x(comp.size(), 1.0), y(comp.size());
    double lo = 0.0, hi = 0.0;
    const long cap = std::max<long>(2000, static_cast<long>(4e8 / static_cast<double>(comp.size() + edges)));
    for (long it = 1; it <= cap; ++it) {
      for (std::size_t k = 0; k < comp.size(); ++k) {
        double acc = x[k];
        for (int w : local[k]) acc += x[w];
        y[k] = acc;
      }
      lo = HUGE_VAL;
      hi = 0.0;
      double top = 0.0;
      for (std::size_t k = 0; k < comp.size(); ++k) {
        const double r = y[k] / x[k];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        top = std::max(top, y[k]);
      }
      for (std::size_t k = 0; k < comp.size(); ++k) x[k] = y[k] / top;
      result.iterations += 1;
      if (hi - lo <= rel_tol * hi) break;
    }
    // Radius of A is radius of B minus 1; an irreducible block with an edge has radius >= 1.
    lo = std::max(lo - 1.0, 1.0);
    hi = std::max(hi - 1.0, 1.0);
    if (!any || hi > best_hi) best_hi = hi;
    if (!any || lo > best_lo) best_lo = lo;
    any = true;
  }
  if (!any) {
    result.empty = true;
    return result;
  }
  result.lower = std::log(best_lo);
  result.upper = std::log(best_hi);
  result.value = std::log(0.5 * (best_lo + best_hi));
  return result;
}

double dimension(double h, const FieldContext& ctx) {
  if (!(h >= 0.0)) throw ConfigError("dimension: entropy must be >= 0");
  const double d = 2.0 * h / ctx.log_eps;
  if (d > 2.0 && d < 2.0 + 1e-9) return 2.0;
  if (d > 2.0) throw InvariantError("dimension: 2h/log(eps) = " + std::to_string(d) + " exceeds 2");
  return d;
}

namespace {

Word merge_path(const Subshift& s, const std::vector<int>& path) {
  Word w = s.words[path.front()];
  for (std::size_t k = 1; k < path.size(); ++k) w.push_back(s.words[path[k]].back());
  return w;
}

int lookup(const Partition* pm, const Word& w, int fallback) {
  if (!pm) return fallback;
  const int id = pm->find(w);
  if (id < 0) throw InvariantError("block_recode: recoded word missing from the target partition");
  return id;
}

Subshift lift(const Subshift& s, int m, const Partition* pm) {
  const std::size_t len = static_cast<std::size_t>(2 * (m - s.level) + 1);
  Subshift out;
  out.level = m;
  out.forbidden = pm ? std::vector<int>{} : s.forbidden;
  std::vector<std::vector<int>> paths;
  std::vector<int> path;
  // Depth-first enumeration of all paths with len symbols.
  auto extend = [&](auto&& self) -> void {
    if (path.size() == len) {
      paths.push_back(path);
      return;
    }
    for (int w : s.succ[path.back()]) {
      path.push_back(w);
      self(self);
      path.pop_back();
    }
  };
  for (std::size_t v = 0; v < s.size(); ++v) {
    path = {static_cast<int>(v)};
    extend(extend);
  }
  std::map<std::vector<int>, int> index;
  for (std::size_t k = 0; k < paths.size(); ++k) index.emplace(paths[k], static_cast<int>(k));
  for (std::size_t k = 0; k < paths.size(); ++k) {
    Word w = s.words.empty() ? Word{} : merge_path(s, paths[k]);
    out.ids.push_back(s.words.empty() ? static_cast<int>(k) : lookup(pm, w, static_cast<int>(k)));
    if (!s.words.empty()) out.words.push_back(std::move(w));
  }
  out.succ.resize(paths.size());
  for (std::size_t k = 0; k < paths.size(); ++k) {
    std::vector<int> next(paths[k].begin() + 1, paths[k].end());
    next.push_back(0);
    for (int w : s.succ[paths[k].back()]) {
      next.back() = w;
      out.succ[k].push_back(index.at(next));
    }
    std::sort(out.succ[k].begin(), out.succ[k].end());
  }
  return out;
}

}  // namespace

Subshift block_recode(const Subshift& s_in, int m, const Partition* pm) {
  if (m < s_in.level - 1) throw ConfigError("block_recode: target level must be >= n - 1");
  if (pm && pm->level != m) throw ConfigError("block_recode: target partition has the wrong level");
  const Subshift s = essential_part(s_in);
  if (m >= s.level) return essential_part(lift(s, m, pm));

  if (s.level < 1 || s.words.empty()) throw ConfigError("block_recode: nothing to project below level 0");
  // Project every word to its truncation and check the lift returns s.
  // Truncated words in sorted order, as in the partition at level m.
  std::map<Word, int> index;
  for (const Word& w : s.words) index.emplace(Word(w.begin() + 1, w.end() - 1), 0);
  Subshift proj;
  proj.level = m;
  for (auto& [w, rank] : index) {
    rank = static_cast<int>(proj.ids.size());
    proj.ids.push_back(lookup(pm, w, rank));
    proj.words.push_back(w);
  }
  std::vector<int> image(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) image[i] = index.at(Word(s.words[i].begin() + 1, s.words[i].end() - 1));
  proj.succ.resize(proj.ids.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int j : s.succ[i]) proj.succ[image[i]].push_back(image[j]);
  }
  for (auto& row : proj.succ) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  const Subshift back = essential_part(lift(proj, s.level, nullptr));
  std::set<std::pair<Word, Word>> a, b;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (int j : s.succ[i]) a.emplace(s.words[i], s.words[j]);
  for (std::size_t i = 0; i < back.size(); ++i)
    for (int j : back.succ[i]) b.emplace(back.words[i], back.words[j]);
  if (a != b) throw InvariantError("block_recode: subshift is not a one-step shift at level " + std::to_string(m));
  return essential_part(proj);
}

namespace {

// Splits a flank (read outward from w) into pre-period and loop.
std::pair<std::vector<int>, std::vector<int>> close_flank(std::vector<int> r, int anchor,
                                                          const std::vector<std::vector<int>>& next,
                                                          const std::vector<char>& alive, std::size_t alphabet) {
  // A periodic tail of minimal period, repeated at least twice.
  for (std::size_t q = 1; q <= alphabet && 2 * q <= r.size(); ++q) {
    std::size_t len = q;
    while (len < r.size() && r[r.size() - 1 - len] == r[r.size() - 1 - len + q]) ++len;
    if (len >= 2 * q) {
      const std::size_t start = r.size() - len;
      return {std::vector<int>(r.begin(), r.begin() + static_cast<long>(start)),
              std::vector<int>(r.begin() + static_cast<long>(start), r.begin() + static_cast<long>(start + q))};
    }
  }
  // First repeated symbol, extending along the graph when needed.
  std::map<int, std::size_t> first_seen;
  for (std::size_t j = 0;; ++j) {
    if (j == r.size()) {
      const int from = r.empty() ? anchor : r.back();
      auto it = std::find_if(next[from].begin(), next[from].end(), [&](int w) { return alive[w]; });
      if (!alive[from] || it == next[from].end())
        throw ConfigError("periodize: word does not extend to a bi-infinite point");
      r.push_back(*it);
    }
    auto [pos, inserted] = first_seen.emplace(r[j], j);
    if (!inserted) {
      return {std::vector<int>(r.begin(), r.begin() + static_cast<long>(pos->second)),
              std::vector<int>(r.begin() + static_cast<long>(pos->second), r.begin() + static_cast<long>(j))};
    }
  }
}

}  // namespace

SymbolicPoint periodize(const Subshift& s, const std::vector<int>& w, const std::vector<int>& u,
                        const std::vector<int>& v, std::size_t center) {
  if (w.empty() || center >= w.size()) throw ConfigError("periodize: empty word or center outside it");
  std::vector<int> whole(u);
  whole.insert(whole.end(), w.begin(), w.end());
  whole.insert(whole.end(), v.begin(), v.end());
  if (!s.admissible(whole)) throw ConfigError("periodize: u w v is not admissible");

  std::map<int, int> loc;
  for (std::size_t i = 0; i < s.size(); ++i) loc.emplace(s.ids[i], static_cast<int>(i));
  auto to_local = [&](const std::vector<int>& ids) {
    std::vector<int> out;
    for (int id : ids) out.push_back(loc.at(id));
    return out;
  };
  const Subshift ess = essential_part(s);
  std::vector<char> alive(s.size(), 0);
  for (int id : ess.ids) alive[loc.at(id)] = 1;
  const auto pred = s.predecessors();

  auto [pre_r, loop_r] = close_flank(to_local(v), loc.at(w.back()), s.succ, alive, s.size());
  std::vector<int> u_rev = to_local(u);
  std::reverse(u_rev.begin(), u_rev.end());
  auto [pre_l, loop_l] = close_flank(u_rev, loc.at(w.front()), pred, alive, s.size());
  std::reverse(pre_l.begin(), pre_l.end());
  std::reverse(loop_l.begin(), loop_l.end());

  auto to_ids = [&](const std::vector<int>& l) {
    std::vector<int> out;
    for (int k : l) out.push_back(s.ids[k]);
    return out;
  };
  SymbolicPoint sp;
  sp.level = s.level;
  sp.left_loop = to_ids(loop_l);
  sp.right_loop = to_ids(loop_r);
  sp.middle = to_ids(pre_l);
  sp.origin = sp.middle.size() + center;
  sp.middle.insert(sp.middle.end(), w.begin(), w.end());
  const auto tail = to_ids(pre_r);
  sp.middle.insert(sp.middle.end(), tail.begin(), tail.end());
  return sp;
}

SymbolicPoint random_point(const Subshift& s_in, std::mt19937_64& rng, int half_length) {
  const Subshift s = essential_part(s_in);
  if (s.empty()) throw ConfigError("random_point: empty subshift");
  const auto pred = s.predecessors();
  auto pick = [&](const std::vector<int>& options) {
    std::uniform_int_distribution<std::size_t> d(0, options.size() - 1);
    return options[d(rng)];
  };
  std::uniform_int_distribution<std::size_t> start(0, s.size() - 1);
  const int c = static_cast<int>(start(rng));
  std::vector<int> fwd, back;
  for (int k = 0, cur = c; k < half_length; ++k) fwd.push_back(cur = pick(s.succ[cur]));
  for (int k = 0, cur = c; k < half_length; ++k) back.push_back(cur = pick(pred[cur]));
  std::reverse(back.begin(), back.end());
  auto to_ids = [&](const std::vector<int>& l) {
    std::vector<int> out;
    for (int k : l) out.push_back(s.ids[k]);
    return out;
  };
  return periodize(s, {s.ids[c]}, to_ids(back), to_ids(fwd));
}

void write_transitions(std::ostream& out, const Subshift& s) {
  std::size_t nnz = 0;
  for (const auto& row : s.succ) nnz += row.size();
  out << "# level " << s.level << "\n# symbols " << s.size() << "\n# nonzeros " << nnz << "\n";
  out << "# symbol ids:";
  for (int id : s.ids) out << ' ' << id;
  out << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int j : s.succ[i]) out << i << ' ' << j << " 1\n";
  }
}

}  // namespace qdyn

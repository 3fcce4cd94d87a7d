#pragma once

#include <iosfwd>
#include <random>
#include <vector>

#include "qdyn/partition.hpp"
#include "qdyn/symbolic.hpp"

namespace qdyn {

/// A vertex shift: symbols with 0-1 transitions. Symbols remember the
/// partition member they stand for (`ids`) and its coordinate word.
struct Subshift {
  int level = 0;
  std::vector<int> ids;
  std::vector<Word> words;  ///< empty when built from a bare matrix
  std::vector<std::vector<int>> succ;
  /// Partition members removed by avoid (before pruning).
  std::vector<int> forbidden;

  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
  /// Local symbol of a partition member, or -1.
  int local(int id) const;
  std::vector<std::vector<int>> predecessors() const;
  /// Dense 0-1 matrix, rows = from.
  std::vector<std::vector<int>> matrix() const;
  /// Every consecutive pair of the (partition-id) word is a transition.
  bool admissible(const std::vector<int>& id_word) const;
};

/// Restriction to symbols lying on bi-infinite paths, order preserved.
Subshift essential_part(const Subshift& s);

/// Sigma_n over all members of p.
Subshift full_shift(const Partition& p);
/// Sigma_n with the given members removed, pruned to its essential part.
Subshift avoid(const Partition& p, const std::vector<int>& forbidden);
/// Subshift with symbols 0..k-1 and the given 0-1 matrix, not pruned.
Subshift from_matrix(const std::vector<std::vector<int>>& a);

struct EntropyResult {
  double value = 0.0;
  /// Collatz-Wielandt bracket of value.
  double lower = 0.0;
  double upper = 0.0;
  bool empty = false;
  long iterations = 0;
};

/// log of the spectral radius, max over strongly connected components. Each
/// component's radius is found by power iteration on I + A from the all-ones
/// vector, stopped when the Collatz-Wielandt bounds agree to `rel_tol`.
EntropyResult entropy(const Subshift& s, double rel_tol = 1e-13);

/// 2h / log(eps). Values above 2 by less than 1e-9 are reported as 2.
double dimension(double h, const FieldContext& ctx);

/// The same subshift in block form at level m >= n - 1. For m >= n symbols
/// become paths of 2(m-n)+1 symbols. For m = n - 1 symbols are truncated
/// words and the result is checked to lift back to s; throws InvariantError
/// if it does not. When pm is given, ids refer to its members.
Subshift block_recode(const Subshift& s, int m, const Partition* pm = nullptr);

/// An eventually periodic element of s containing u w v's middle w, built by
/// looping a repeated block of each flank (extending along s if a flank has no
/// repeat). Symbols are partition ids; s_0 is w[center].
SymbolicPoint periodize(const Subshift& s, const std::vector<int>& w, const std::vector<int>& u,
                        const std::vector<int>& v, std::size_t center = 0);

/// A random eventually periodic point of s: random walks of `half_length`
/// steps each way from a random symbol, then periodize.
SymbolicPoint random_point(const Subshift& s, std::mt19937_64& rng, int half_length);

/// "# ..." header lines, then one "row col 1" line per transition.
void write_transitions(std::ostream& out, const Subshift& s);

}  // namespace qdyn

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qdyn {

/// Eventually periodic bi-infinite string
///   ... left_loop left_loop middle right_loop right_loop ...
/// with s_0 = middle[origin]. Symbols are member indices of a partition.
struct SymbolicPoint {
  int level = 0;
  std::vector<int> left_loop;
  std::vector<int> middle;
  std::vector<int> right_loop;
  std::size_t origin = 0;

  /// s_i for any integer i.
  int at(long i) const;
  /// sigma^k: (sigma s)_i = s_{i+1}.
  SymbolicPoint shifted(long k) const;
  /// The window s_first .. s_last.
  std::vector<int> window(long first, long last) const;
  /// Throws ConfigError on empty loops, empty middle or origin out of range.
  void validate() const;
  bool purely_periodic() const;
  /// Same bi-infinite sequence, whatever the representation.
  bool same_sequence(const SymbolicPoint& o) const;

  /// Text form pre_left|loop_left|center|loop_right|pre_right, symbols comma
  /// separated: (loop_left)^inf pre_left center pre_right (loop_right)^inf
  /// with s_0 the first symbol of center.
  static SymbolicPoint parse(std::string_view text, int level = 0);
  std::string format() const;

  friend bool operator==(const SymbolicPoint&, const SymbolicPoint&) = default;
};

/// Purely periodic point (loop)^inf with s_0 = loop[0].
SymbolicPoint periodic_point(std::vector<int> loop, int level = 0);

}  // namespace qdyn

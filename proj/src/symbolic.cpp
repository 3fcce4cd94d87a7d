#include "qdyn/symbolic.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "qdyn/errors.hpp"

namespace qdyn {

namespace {

long mod(long a, long m) {
  const long r = a % m;
  return r < 0 ? r + m : r;
}

std::vector<int> parse_symbols(std::string_view text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view tok = text.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || v < 0)
      throw ConfigError("bad symbol '" + std::string(tok) + "' in symbolic point");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  return out.str();
}

}  // namespace

int SymbolicPoint::at(long i) const {
  const long j = static_cast<long>(origin) + i;
  const long len = static_cast<long>(middle.size());
  if (j >= 0 && j < len) return middle[j];
  if (j >= len) return right_loop[mod(j - len, static_cast<long>(right_loop.size()))];
  const long l = static_cast<long>(left_loop.size());
  return left_loop[l - 1 - mod(-j - 1, l)];
}

SymbolicPoint SymbolicPoint::shifted(long k) const {
  SymbolicPoint out = *this;
  for (; k > 0; --k) {
    if (out.origin + 1 >= out.middle.size()) {
      out.middle.push_back(out.right_loop.front());
      std::rotate(out.right_loop.begin(), out.right_loop.begin() + 1, out.right_loop.end());
    }
    ++out.origin;
  }
  for (; k < 0; ++k) {
    if (out.origin == 0) {
      out.middle.insert(out.middle.begin(), out.left_loop.back());
      std::rotate(out.left_loop.rbegin(), out.left_loop.rbegin() + 1, out.left_loop.rend());
      ++out.origin;
    }
    --out.origin;
  }
  return out;
}

std::vector<int> SymbolicPoint::window(long first, long last) const {
  std::vector<int> out;
  for (long i = first; i <= last; ++i) out.push_back(at(i));
  return out;
}

void SymbolicPoint::validate() const {
  if (left_loop.empty() || right_loop.empty()) throw ConfigError("symbolic point: loops must be nonempty");
  if (middle.empty() || origin >= middle.size()) throw ConfigError("symbolic point: center must be nonempty");
}

bool SymbolicPoint::purely_periodic() const {
  // Periodic iff both tails are the same cycle and the middle is part of it.
  const long p = static_cast<long>(right_loop.size());
  const long lo = -static_cast<long>(origin) - static_cast<long>(left_loop.size());
  const long hi = static_cast<long>(middle.size() - origin) + p;
  for (long i = lo; i < hi; ++i) {
    if (at(i) != at(i + p)) return false;
  }
  return true;
}

bool SymbolicPoint::same_sequence(const SymbolicPoint& o) const {
  const long left = std::lcm(static_cast<long>(left_loop.size()), static_cast<long>(o.left_loop.size()));
  const long right = std::lcm(static_cast<long>(right_loop.size()), static_cast<long>(o.right_loop.size()));
  const long lo = -static_cast<long>(std::max(origin, o.origin)) - left;
  const long hi = static_cast<long>(std::max(middle.size(), o.middle.size())) + right;
  for (long i = lo; i <= hi; ++i) {
    if (at(i) != o.at(i)) return false;
  }
  return true;
}

SymbolicPoint SymbolicPoint::parse(std::string_view text, int level) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t bar = text.find('|', pos);
    fields.push_back(text.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos));
    if (bar == std::string_view::npos) break;
    pos = bar + 1;
  }
  if (fields.size() != 5)
    throw ConfigError("symbolic point needs 5 '|'-separated fields, got " + std::to_string(fields.size()));
  SymbolicPoint sp;
  sp.level = level;
  std::vector<int> pre_left = parse_symbols(fields[0]);
  sp.left_loop = parse_symbols(fields[1]);
  std::vector<int> center = parse_symbols(fields[2]);
  sp.right_loop = parse_symbols(fields[3]);
  std::vector<int> pre_right = parse_symbols(fields[4]);
  sp.origin = pre_left.size();
  sp.middle = std::move(pre_left);
  if (center.empty()) throw ConfigError("symbolic point: center must be nonempty");
  sp.middle.insert(sp.middle.end(), center.begin(), center.end());
  sp.middle.insert(sp.middle.end(), pre_right.begin(), pre_right.end());
  sp.validate();
  return sp;
}

std::string SymbolicPoint::format() const {
  const std::vector<int> pre_left(middle.begin(), middle.begin() + static_cast<long>(origin));
  const std::vector<int> center{middle[origin]};
  const std::vector<int> pre_right(middle.begin() + static_cast<long>(origin) + 1, middle.end());
  return join(pre_left) + "|" + join(left_loop) + "|" + join(center) + "|" + join(right_loop) + "|" + join(pre_right);
}

SymbolicPoint periodic_point(std::vector<int> loop, int level) {
  if (loop.empty()) throw ConfigError("periodic point needs a nonempty loop");
  SymbolicPoint sp;
  sp.level = level;
  sp.left_loop = loop;
  sp.right_loop = loop;
  sp.middle = std::move(loop);
  sp.origin = 0;
  return sp;
}

}  // namespace qdyn

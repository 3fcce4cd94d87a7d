#pragma once

#include <array>
#include <compare>
#include <concepts>
#include <optional>
#include <string>
#include <vector>

#include "qdyn/rational.hpp"

namespace qdyn {

/// An exact element a + b*sqrt(D) of a real quadratic field, viewed as a real
/// number under the embedding sqrt(D) > 0.
///
/// Elements with b == 0 are field-agnostic and combine with elements of any
/// field; mixing two different D with irrational parts throws.
class QElem {
 public:
  QElem() = default;
  QElem(Rational a) : a_(std::move(a)) { a_.canonicalize(); }  // NOLINT(google-explicit-constructor)
  template <std::integral T>
  QElem(T a) : a_(static_cast<long>(a)) {}  // NOLINT(google-explicit-constructor)
  QElem(Rational a, Rational b, long d);

  static QElem sqrt_d(long d) { return QElem(0, 1, d); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  long d() const { return d_; }

  bool is_rational() const { return sgn(b_) == 0; }
  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }

  QElem conj() const;
  /// Field norm a^2 - D b^2.
  Rational norm() const;
  /// -1, 0 or +1, decided without floating point.
  int sign() const;
  QElem abs() const { return sign() < 0 ? -*this : *this; }
  QElem inverse() const;
  Integer floor() const;
  Integer ceil() const;
  double to_double() const;

  QElem operator-() const { return QElem(-a_, -b_, d_, Raw{}); }
  QElem& operator+=(const QElem& o);
  QElem& operator-=(const QElem& o);
  QElem& operator*=(const QElem& o);
  QElem& operator/=(const QElem& o);

  friend QElem operator+(QElem x, const QElem& y) { return x += y; }
  friend QElem operator-(QElem x, const QElem& y) { return x -= y; }
  friend QElem operator*(QElem x, const QElem& y) { return x *= y; }
  friend QElem operator/(QElem x, const QElem& y) { return x /= y; }

  friend bool operator==(const QElem& x, const QElem& y);
  friend std::strong_ordering operator<=>(const QElem& x, const QElem& y);

  std::string str() const;

 private:
  struct Raw {};
  QElem(Rational a, Rational b, long d, Raw) : a_(std::move(a)), b_(std::move(b)), d_(d) {}

  Rational a_;
  Rational b_;
  long d_ = 0;
};

/// Compares exactly; same as operator<=> but usable as a named operation.
std::strong_ordering compare(const QElem& x, const QElem& y);
/// |a^2 - D b^2|.
Rational abs_norm(const QElem& x);
QElem min(const QElem& x, const QElem& y);
QElem max(const QElem& x, const QElem& y);

/// Everything fixed once a field Q(sqrt D) is chosen.
struct FieldContext {
  long D = 0;
  QElem alpha;       ///< integral basis generator, {1, alpha} spans O_K
  QElem alpha_conj;
  /// alpha^2 = alpha_trace * alpha + alpha_const
  Integer alpha_trace;
  Integer alpha_const;
  QElem eps;         ///< fundamental unit, eps > 1
  QElem eps_conj;
  QElem eps_inv;
  /// eps = eps_x + eps_y * alpha with integer coordinates
  Integer eps_x;
  Integer eps_y;
  /// Sign of conj(eps), equal to Nm(eps).
  int eps_conj_sign = 1;
  /// Any proven upper bound for the Euclidean minimum M_1(K).
  Rational m1_bound;
  /// Integer matrix of multiplication by eps acting on (x, y), row-major.
  std::array<Integer, 4> phi;
  std::array<Integer, 4> phi_inv;
  double log_eps = 0.0;
  double alpha_d = 0.0;
  double alpha_conj_d = 0.0;
  double eps_d = 0.0;
  double eps_conj_d = 0.0;

  /// Covolume of O_K in (s,u) coordinates, alpha - conj(alpha).
  QElem covolume() const { return alpha - alpha_conj; }
  QElem eps_pow(long k) const;
  QElem eps_conj_pow(long k) const;
  /// Membership of a + b sqrt(D) in O_K.
  bool is_integral(const QElem& x) const;
  /// (m, n) with x = m + n*alpha, exact; x must lie in K.
  std::pair<Rational, Rational> basis_coords(const QElem& x) const;
  QElem from_basis(const Rational& m, const Rational& n) const { return QElem(m) + QElem(n) * alpha; }
};

bool is_square_free(long d);

/// Validates D, computes alpha and the fundamental unit by continued fractions.
/// m1_bound defaults to ceil(sqrt(D)).
FieldContext make_context(long D, std::optional<Rational> m1_bound = std::nullopt);

/// Closed interval with exact endpoints.
struct Interval {
  QElem lo;
  QElem hi;

  QElem length() const { return hi - lo; }
  bool contains(const QElem& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  /// Interiors intersect.
  bool overlaps_open(const Interval& o) const { return lo < o.hi && o.lo < hi; }
  Interval scaled(const QElem& c) const;  // c * [lo, hi], reordered if c < 0
  Interval shifted(const QElem& c) const { return {lo + c, hi + c}; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace qdyn

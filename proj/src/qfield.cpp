#include "qdyn/qfield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdyn/errors.hpp"

namespace qdyn {

namespace {

long combine_d(long d1, long d2) {
  if (d1 == d2 || d2 == 0) return d1;
  if (d1 == 0) return d2;
  throw std::invalid_argument("QElem: mixing elements of Q(sqrt " + std::to_string(d1) +
                              ") and Q(sqrt " + std::to_string(d2) + ")");
}

int sgn_of(const Rational& r) { return sgn(r); }

// Approximates a + b sqrt(D) with enough mantissa to survive cancellation
// between the two terms.
mpf_class approx(const QElem& x) {
  const auto bits = [](const Rational& r) {
    return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
  };
  const mp_bitcnt_t prec = 128 + 2 * std::max(bits(x.a()), bits(x.b()));
  mpf_class a(x.a(), prec);
  if (x.is_rational()) return a;
  mpf_class root(x.d(), prec);
  root = sqrt(root);
  mpf_class b(x.b(), prec);
  return a + b * root;
}

}  // namespace

QElem::QElem(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
  a_.canonicalize();
  b_.canonicalize();
  if (sgn(b_) != 0 && d_ <= 1) throw std::invalid_argument("QElem: irrational part needs D > 1");
}

QElem QElem::conj() const { return QElem(a_, -b_, d_, Raw{}); }

Rational QElem::norm() const { return a_ * a_ - Rational(d_) * b_ * b_; }

int QElem::sign() const {
  const int sa = sgn_of(a_);
  const int sb = sgn_of(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: the larger of a^2 and D b^2 wins (never equal, D is not a square).
  return cmp(a_ * a_, Rational(d_) * b_ * b_) > 0 ? sa : sb;
}

QElem QElem::inverse() const {
  const Rational n = norm();
  if (sgn(n) == 0) throw std::domain_error("QElem: division by zero");
  return QElem(a_ / n, -b_ / n, d_, Raw{});
}

Integer QElem::floor() const {
  if (is_rational()) return floor_div(a_);
  mpf_class v = approx(*this);
  mpf_class f = ::floor(v);
  Integer r(f);
  while (QElem(Rational(r)) > *this) --r;
  while (QElem(Rational(r + 1)) <= *this) ++r;
  return r;
}

Integer QElem::ceil() const {
  Integer f = floor();
  return QElem(Rational(f)) == *this ? f : Integer(f + 1);
}

double QElem::to_double() const {
  if (is_rational()) return a_.get_d();
  const double root = std::sqrt(static_cast<double>(d_));
  const int sa = sgn_of(a_);
  const int sb = sgn_of(b_);
  if (sa == 0 || sa == sb) return a_.get_d() + b_.get_d() * root;
  // a and b sqrt(D) nearly cancel; divide the exact norm by the conjugate instead.
  return norm().get_d() / (a_.get_d() - b_.get_d() * root);
}

QElem& QElem::operator+=(const QElem& o) {
  d_ = combine_d(d_, o.d_);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QElem& QElem::operator-=(const QElem& o) {
  d_ = combine_d(d_, o.d_);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QElem& QElem::operator*=(const QElem& o) {
  d_ = combine_d(d_, o.d_);
  if (o.is_rational()) {
    a_ *= o.a_;
    b_ *= o.a_;
    return *this;
  }
  if (is_rational()) {
    b_ = a_ * o.b_;
    a_ *= o.a_;
    return *this;
  }
  Rational na = a_ * o.a_ + Rational(d_) * b_ * o.b_;
  Rational nb = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  return *this;
}

QElem& QElem::operator/=(const QElem& o) {
  if (o.is_rational()) {
    if (sgn(o.a_) == 0) throw std::domain_error("QElem: division by zero");
    d_ = combine_d(d_, o.d_);
    a_ /= o.a_;
    b_ /= o.a_;
    return *this;
  }
  return *this *= o.inverse();
}

bool operator==(const QElem& x, const QElem& y) {
  if (x.a_ != y.a_ || x.b_ != y.b_) return false;
  if (!x.is_rational()) combine_d(x.d_, y.d_);
  return true;
}

std::strong_ordering operator<=>(const QElem& x, const QElem& y) {
  const int s = (x - y).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string QElem::str() const {
  std::ostringstream out;
  if (is_rational()) {
    out << a_.get_str();
  } else {
    out << a_.get_str() << (sgn(b_) < 0 ? " - " : " + ") << qdyn::abs(b_).get_str() << "*sqrt(" << d_
        << ")";
  }
  return out.str();
}

std::strong_ordering compare(const QElem& x, const QElem& y) { return x <=> y; }

Rational abs_norm(const QElem& x) { return qdyn::abs(x.norm()); }

QElem min(const QElem& x, const QElem& y) { return y < x ? y : x; }
QElem max(const QElem& x, const QElem& y) { return x < y ? y : x; }

Interval Interval::scaled(const QElem& c) const {
  QElem a = lo * c;
  QElem b = hi * c;
  if (c.sign() < 0) return {std::move(b), std::move(a)};
  return {std::move(a), std::move(b)};
}

bool is_square_free(long d) {
  if (d == 0) return false;
  long n = d < 0 ? -d : d;
  for (long p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

QElem FieldContext::eps_pow(long k) const {
  QElem base = k >= 0 ? eps : eps_inv;
  unsigned long e = static_cast<unsigned long>(k >= 0 ? k : -k);
  QElem result(1);
  while (e != 0) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e != 0) base *= base;
  }
  return result;
}

QElem FieldContext::eps_conj_pow(long k) const { return eps_pow(k).conj(); }

std::pair<Rational, Rational> FieldContext::basis_coords(const QElem& x) const {
  if (!x.is_rational() && x.d() != D) throw std::invalid_argument("basis_coords: element of a different field");
  if (D % 4 == 1) {
    // alpha = (1 + sqrt D)/2, so a + b sqrt D = (a - b) + 2b alpha.
    return {x.a() - x.b(), 2 * x.b()};
  }
  return {x.a(), x.b()};
}

bool FieldContext::is_integral(const QElem& x) const {
  auto [m, n] = basis_coords(x);
  return m.get_den() == 1 && n.get_den() == 1;
}

FieldContext make_context(long D, std::optional<Rational> m1_bound) {
  if (D <= 1) throw ConfigError("D must be an integer > 1, got " + std::to_string(D));
  if (!is_square_free(D)) throw ConfigError("D = " + std::to_string(D) + " is not square-free");

  FieldContext ctx;
  ctx.D = D;
  if (D % 4 == 1) {
    ctx.alpha = QElem(Rational(1, 2), Rational(1, 2), D);
    ctx.alpha_trace = 1;
    ctx.alpha_const = (D - 1) / 4;
  } else {
    ctx.alpha = QElem::sqrt_d(D);
    ctx.alpha_trace = 0;
    ctx.alpha_const = D;
  }
  ctx.alpha_conj = ctx.alpha.conj();

  // Continued fraction of alpha: the first convergent p/q with p - q*alpha a
  // unit yields the fundamental unit as |conj(p - q*alpha)|.
  QElem x = ctx.alpha;
  Integer p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  bool found = false;
  for (int iter = 0; iter < 100000 && !found; ++iter) {
    Integer a = x.floor();
    Integer p = a * p_prev + p_prev2;
    Integer q = a * q_prev + q_prev2;
    QElem candidate = QElem(Rational(p)) - QElem(Rational(q)) * ctx.alpha;
    if (abs_norm(candidate) == 1) {
      QElem c = candidate.conj();
      ctx.eps = c.sign() > 0 ? c : -c;
      found = true;
    }
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    QElem frac = x - QElem(Rational(a));
    if (frac.is_zero()) break;
    x = frac.inverse();
  }
  if (!found) throw InvariantError("fundamental unit search did not terminate for D = " + std::to_string(D));

  ctx.eps_conj = ctx.eps.conj();
  ctx.eps_inv = ctx.eps.inverse();
  ctx.eps_conj_sign = sgn(ctx.eps.norm());
  auto [ex, ey] = ctx.basis_coords(ctx.eps);
  ctx.eps_x = ex.get_num();
  ctx.eps_y = ey.get_num();
  if (ex.get_den() != 1 || ey.get_den() != 1) throw InvariantError("fundamental unit is not integral");

  const Integer& e0 = ctx.eps_x;
  const Integer& e1 = ctx.eps_y;
  ctx.phi = {e0, e1 * ctx.alpha_const, e1, e0 + e1 * ctx.alpha_trace};
  const Integer det = ctx.phi[0] * ctx.phi[3] - ctx.phi[1] * ctx.phi[2];
  if (det != ctx.eps_conj_sign) throw InvariantError("multiplication-by-eps matrix has wrong determinant");
  ctx.phi_inv = {det * ctx.phi[3], -det * ctx.phi[1], -det * ctx.phi[2], det * ctx.phi[0]};
  ctx.log_eps = std::log(ctx.eps.to_double());
  ctx.alpha_d = ctx.alpha.to_double();
  ctx.alpha_conj_d = ctx.alpha_conj.to_double();
  ctx.eps_d = ctx.eps.to_double();
  ctx.eps_conj_d = ctx.eps_conj.to_double();

  if (m1_bound) {
    if (*m1_bound <= 0) throw ConfigError("m1 bound must be positive");
    ctx.m1_bound = *m1_bound;
  } else {
    ctx.m1_bound = Rational(isqrt_ceil(Integer(D)));
  }
  return ctx;
}

}  // namespace qdyn

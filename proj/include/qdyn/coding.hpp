#pragma once

#include <vector>

#include "qdyn/partition.hpp"
#include "qdyn/symbolic.hpp"
#include "qdyn/torus.hpp"

namespace qdyn {

/// Relative height of the bottom of A ∩ phi^{-1}(B) inside A, for members
/// a, b of p. Throws ConfigError if a -> b is not admissible.
QElem rho_u(const Partition& p, int a, int b);
/// Relative offset of A ∩ phi(B) inside A along the stable axis, from the
/// low end (plus) or from the high end (minus). Needs b -> a admissible.
QElem rho_s(const Partition& p, int a, int b, bool plus);

/// Evaluates the coding map on eventually periodic strings. Holds the
/// level-0 tables, so one instance serves many evaluations.
class Coder {
 public:
  explicit Coder(const Partition& p);

  const Partition& partition() const { return p_; }
  const Partition& generator_partition() const { return p0_; }

  /// The plane point of pi(sp), inside the representative of member s_0.
  /// Exact; throws ConfigError on inadmissible input.
  PointSU eval(const SymbolicPoint& sp) const;
  /// Torus point of pi(sp) in (x, y) coordinates, reduced mod 1.
  KPointXY eval_xy(const SymbolicPoint& sp) const;

  /// Level-0 symbols of sp (centres of its words).
  SymbolicPoint project(const SymbolicPoint& sp) const;
  /// All consecutive pairs admissible in the partition.
  bool admissible(const SymbolicPoint& sp) const;

  /// Transition data between generator symbols a -> b.
  struct Step {
    bool ok = false;
    QElem rho_u;
    QElem rho_s_plus;
    QElem rho_s_minus;
    LatticePoint shift;  ///< A ∩ phi^{-1}(B + shift)
    Interval s;          ///< closure of that piece
    Interval u;
  };
  const Step& step(int a, int b) const { return steps_[a][b]; }

 private:
  Partition p_;
  Partition p0_;
  std::vector<std::vector<Step>> steps_;  ///< steps_[a][b] on the generator
};

/// Itineraries of a Q-point's periodic orbit through closed members of p.
/// More than one itinerary means the orbit meets member boundaries.
struct QCoding {
  std::vector<SymbolicPoint> codings;
  bool ambiguous = false;
};

QCoding code_qpoint(const Coder& coder, const PointXY& p);

PointSU pi_eval(const Partition& p, const SymbolicPoint& sp);
QCoding code_qpoint(const Partition& p, const PointXY& point);

}  // namespace qdyn

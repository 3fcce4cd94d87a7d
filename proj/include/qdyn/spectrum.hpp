#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdyn/coding.hpp"
#include "qdyn/partition.hpp"
#include "qdyn/sft.hpp"
#include "qdyn/trapping.hpp"

namespace qdyn {

struct SpectrumSample {
  Rational t;
  int n = 0;
  long trapped_count = 0;
  long alphabet_size = 0;
  double entropy = 0.0;
  double dim_upper = 0.0;
  bool empty = false;
};

/// t_min, t_min + step, ... up to and including t_max when it is hit exactly.
std::vector<Rational> t_grid(const Rational& t_min, const Rational& t_max, const Rational& step);

/// Worker count from QDYN_THREADS, else the hardware concurrency.
unsigned thread_count();

/// One sample per t: avoid the members trapped at t, then entropy and
/// dimension. Output order follows the grid whatever the thread count.
std::vector<SpectrumSample> dim_curve(const Partition& pn, const std::vector<Rational>& grid,
                                      const std::vector<LatticePoint>& lattice_set, unsigned threads = 0);
std::vector<SpectrumSample> dim_curve(const FieldContext& ctx, const std::vector<Rational>& grid, int n,
                                      const std::vector<LatticePoint>& lattice_set, unsigned threads = 0);

struct Plateau {
  std::size_t first = 0;  ///< sample indices, inclusive
  std::size_t last = 0;
  Rational t_lo;
  Rational t_hi;
  double dim_upper = 0.0;
  /// The candidate SFT at t_lo.
  long alphabet_size = 0;
  long trapped_count = 0;
};

/// Maximal runs of at least two samples whose successive dim_upper values
/// differ by less than flat_tol.
std::vector<Plateau> plateau_detect(const std::vector<SpectrumSample>& samples, double flat_tol);

/// Davenport's minima of Q(sqrt 5): M_1 = 1/4, then
/// M_{j+1} = (f_{6j-2} + f_{6j-4}) / (4 (f_{6j-1} + f_{6j-3} - 2)).
Rational davenport_minima(long i);
/// (-1 + sqrt 5)/8; ConfigError unless ctx.D == 5.
QElem t_infinity(const FieldContext& ctx);

/// Exact M(pi(sp)). Q-points go through the orbit search, other K-points
/// through the collapse onto their limiting torsion orbits.
QElem certify_spectrum_point(const Coder& coder, const SymbolicPoint& sp);

void write_csv(std::ostream& out, const std::vector<SpectrumSample>& samples);

struct RunManifest {
  long D = 0;
  Rational m1_bound;
  std::string lattice_set;
  std::string grid;
  int level = 0;
  double wall_seconds = 0.0;
};
nlohmann::json manifest_json(const RunManifest& m);

std::string tool_version();

}  // namespace qdyn

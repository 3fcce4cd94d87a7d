#include "qdyn/spectrum.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <mutex>
#include <thread>

#include "qdyn/errors.hpp"

namespace qdyn {

std::vector<Rational> t_grid(const Rational& t_min, const Rational& t_max, const Rational& step) {
  if (sgn(step) <= 0) throw ConfigError("t step must be positive");
  if (t_max < t_min) throw ConfigError("t_min must not exceed t_max");
  const Integer count = floor_div((t_max - t_min) / step) + 1;
  if (count > 1000000) throw ConfigError("t grid has more than 10^6 points");
  std::vector<Rational> out;
  for (long k = 0; k < count.get_si(); ++k) out.push_back(t_min + step * k);
  return out;
}

unsigned thread_count() {
  if (const char* env = std::getenv("QDYN_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError("QDYN_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SpectrumSample> dim_curve(const Partition& pn, const std::vector<Rational>& grid,
                                      const std::vector<LatticePoint>& lattice_set, unsigned threads) {
  const TrapProfile profile = trap_profile(pn, lattice_set);
  std::vector<SpectrumSample> out(grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < grid.size(); k = next++) {
      const std::vector<int> trapped = profile.trapped_at(grid[k]);
      const Subshift s = avoid(pn, trapped);
      const EntropyResult h = entropy(s);
      SpectrumSample& sample = out[k];
      sample.t = grid[k];
      sample.n = pn.level;
      sample.trapped_count = static_cast<long>(trapped.size());
      sample.alphabet_size = static_cast<long>(s.size());
      sample.empty = h.empty;
      sample.entropy = h.value;
      sample.dim_upper = h.empty ? 0.0 : dimension(h.value, pn.ctx);
    }
  };
  if (threads == 0) threads = thread_count();
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(grid.size(), 1)));
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned i = 1; i < threads; ++i) {
    pool.emplace_back([&] {
      try {
        work();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = grid.size();
      }
    });
  }
  try {
    work();
  } catch (...) {
    std::lock_guard lock(error_mutex);
    if (!error) error = std::current_exception();
    next = grid.size();
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<SpectrumSample> dim_curve(const FieldContext& ctx, const std::vector<Rational>& grid, int n,
                                      const std::vector<LatticePoint>& lattice_set, unsigned threads) {
  return dim_curve(partition_at_level(ctx, n), grid, lattice_set, threads);
}

std::vector<Plateau> plateau_detect(const std::vector<SpectrumSample>& samples, double flat_tol) {
  std::vector<Plateau> out;
  std::size_t start = 0;
  auto close = [&](std::size_t last) {
    if (last > start) {
      Plateau p;
      p.first = start;
      p.last = last;
      p.t_lo = samples[start].t;
      p.t_hi = samples[last].t;
      p.dim_upper = samples[start].dim_upper;
      p.alphabet_size = samples[start].alphabet_size;
      p.trapped_count = samples[start].trapped_count;
      out.push_back(std::move(p));
    }
  };
  for (std::size_t k = 1; k <= samples.size(); ++k) {
    if (k == samples.size() || !(std::abs(samples[k].dim_upper - samples[k - 1].dim_upper) < flat_tol)) {
      if (!samples.empty()) close(k - 1);
      start = k;
    }
  }
  return out;
}

Rational davenport_minima(long i) {
  if (i < 1) throw ConfigError("davenport_minima: index must be >= 1");
  if (i == 1) return Rational(1, 4);
  const unsigned long j = static_cast<unsigned long>(i - 1);
  auto fib = [](unsigned long k) {
    Integer f;
    mpz_fib_ui(f.get_mpz_t(), k);
    return f;
  };
  Rational r(fib(6 * j - 2) + fib(6 * j - 4), 4 * (fib(6 * j - 1) + fib(6 * j - 3) - 2));
  r.canonicalize();
  return r;
}

QElem t_infinity(const FieldContext& ctx) {
  if (ctx.D != 5) throw ConfigError("t_infinity is the limit of the minima of Q(sqrt 5) only");
  return QElem(Rational(-1, 8), Rational(1, 8), 5);
}

QElem certify_spectrum_point(const Coder& coder, const SymbolicPoint& sp) {
  const FieldContext& ctx = coder.partition().ctx;
  const KPointXY p = coder.eval_xy(sp);
  if (auto q = as_rational(p)) return QElem(euclidean_min_qpoint(ctx, *q));
  return euclidean_min_kpoint(ctx, p);
}

void write_csv(std::ostream& out, const std::vector<SpectrumSample>& samples) {
  out << "t_num,t_den,n,trapped_count,alphabet_size,entropy,dim_upper,empty_flag\n";
  char buf[64];
  for (const SpectrumSample& s : samples) {
    out << s.t.get_num().get_str() << ',' << s.t.get_den().get_str() << ',' << s.n << ',' << s.trapped_count << ','
        << s.alphabet_size << ',';
    std::snprintf(buf, sizeof buf, "%.17g", s.entropy);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", s.dim_upper);
    out << buf << ',' << (s.empty ? 1 : 0) << '\n';
  }
}

std::string tool_version() { return QDYN_VERSION; }

nlohmann::json manifest_json(const RunManifest& m) {
  return {{"D", m.D},
          {"M1_bound", m.m1_bound.get_str()},
          {"I", m.lattice_set},
          {"grid", m.grid},
          {"n", m.level},
          {"tool_version", tool_version()},
          {"wall_time_seconds", m.wall_seconds}};
}

}  // namespace qdyn

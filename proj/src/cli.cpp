#include "qdyn/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "qdyn/errors.hpp"
#include "qdyn/spectrum.hpp"

namespace qdyn {

void RunConfig::validate() const {
  if (n < 0) throw ConfigError("--n must be >= 0");
  if (!(t_min < t_max)) throw ConfigError("t_min must be below t_max");
  if (sgn(t_step) <= 0) throw ConfigError("t_step must be positive");
  if (denom_cap < 1) throw ConfigError("--denom-cap must be >= 1");
  if (i_extra < 0) throw ConfigError("--i-extra must be >= 0");
  if (count < 1) throw ConfigError("--count must be >= 1");
}

void parse_grid(const std::string& spec, RunConfig& cfg) {
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? std::string::npos : spec.find(':', a + 1);
  if (b == std::string::npos || spec.find(':', b + 1) != std::string::npos)
    throw ConfigError("grid must look like t_min:t_max:t_step, got '" + spec + "'");
  cfg.t_min = parse_rational(spec.substr(0, a));
  cfg.t_max = parse_rational(spec.substr(a + 1, b - a - 1));
  cfg.t_step = parse_rational(spec.substr(b + 1));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Output sink: stdout for "-", a file otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw IoError(path, "cannot open for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError(path_, "write failed");
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

std::string grid_spec(const RunConfig& cfg) {
  return to_string(cfg.t_min) + ":" + to_string(cfg.t_max) + ":" + to_string(cfg.t_step);
}

nlohmann::json lattice_json(const LatticePoint& q) {
  return {{"m", q.m.get_str()}, {"n", q.n.get_str()}, {"s", qelem_to_json(q.s)}, {"u", qelem_to_json(q.u)}};
}

}  // namespace

int cmd_curve(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = Clock::now();
  const FieldContext ctx = make_context(cfg.D, cfg.m1_bound);
  const std::vector<Rational> grid = t_grid(cfg.t_min, cfg.t_max, cfg.t_step);
  const Partition p0 = generator(ctx);
  const std::vector<LatticePoint> lattice_set = i_k_set(p0, cfg.i_extra);
  Partition pn = p0;
  for (int i = 0; i < cfg.n; ++i) pn = refine(pn);
  const std::vector<SpectrumSample> samples = dim_curve(pn, grid, lattice_set);

  Sink sink(cfg.out);
  write_csv(sink.stream(), samples);
  sink.finish();
  log << "curve: " << samples.size() << " rows, |P_n| = " << pn.size() << ", |I| = " << lattice_set.size() << "\n";

  if (!cfg.manifest.empty()) {
    RunManifest m;
    m.D = ctx.D;
    m.m1_bound = ctx.m1_bound;
    m.lattice_set = "I_K from P_0 with margin " + std::to_string(cfg.i_extra) + ", " +
                    std::to_string(lattice_set.size()) + " points";
    m.grid = grid_spec(cfg);
    m.level = cfg.n;
    m.wall_seconds = seconds_since(t0);
    Sink manifest(cfg.manifest);
    manifest.stream() << manifest_json(m).dump(2) << "\n";
    manifest.finish();
  }
  return kExitOk;
}

int cmd_minima(const RunConfig& cfg, std::ostream& out) {
  if (cfg.D != 5)
    throw ConfigError("minima: the Davenport formula describes Q(sqrt 5) only (got D = " + std::to_string(cfg.D) + ")");
  const FieldContext ctx = make_context(5, cfg.m1_bound);
  const QElem t_inf = t_infinity(ctx);
  char buf[128];
  out << "i,M_i,decimal,gap_to_t_inf,above_t_inf\n";
  for (long i = 1; i <= cfg.count; ++i) {
    const Rational m = davenport_minima(i);
    const QElem gap = QElem(m) - t_inf;
    std::snprintf(buf, sizeof buf, "%ld,%s,%.12f,%.6e,%s\n", i, m.get_str().c_str(), m.get_d(), gap.to_double(),
                  gap.sign() > 0 ? "yes" : "no");
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "t_inf,%s,%.12f,,\n", t_inf.str().c_str(), t_inf.to_double());
  out << buf;
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const FieldContext ctx = make_context(cfg.D, cfg.m1_bound);
  struct Check {
    std::string name;
    std::function<std::string()> run;
  };
  std::vector<Partition> levels{generator(ctx)};
  if (cfg.perturb) {
    Partition& p = levels.front();
    p.rects[0].u.hi += QElem(Rational(1, 100));
    p.rects[0].refresh_approx();
    p.rebuild_index();
  }

  std::vector<Check> checks;
  checks.push_back({"unit", [&] {
                      if (abs_norm(ctx.eps) != 1) return std::string("|Nm(eps)| != 1");
                      if (!(ctx.eps > QElem(1))) return std::string("eps <= 1");
                      if (!(ctx.eps_conj.abs() < QElem(1))) return std::string("|conj(eps)| >= 1");
                      if (ctx.eps * ctx.eps_conj != QElem(ctx.eps_conj_sign)) return std::string("eps*conj(eps) != +-1");
                      if (!ctx.is_integral(ctx.eps)) return std::string("eps not integral");
                      return std::string();
                    }});
  for (int n = 0; n <= cfg.n; ++n) {
    checks.push_back({"markov P_" + std::to_string(n), [&, n] {
                        while (static_cast<int>(levels.size()) <= n) levels.push_back(refine(levels.back()));
                        MarkovReport r = verify_markov(levels[n]);
                        return r.ok ? std::string() : r.message;
                      }});
    checks.push_back({"tiling P_" + std::to_string(n), [&, n] {
                        MarkovReport r = verify_tiling(levels[n]);
                        return r.ok ? std::string() : r.message;
                      }});
    if (n > 0) {
      checks.push_back({"nesting P_" + std::to_string(n), [&, n] {
                          MarkovReport r = verify_nesting(levels[n], levels[n - 1]);
                          return r.ok ? std::string() : r.message;
                        }});
    }
  }
  checks.push_back({"conjugacy", [&] {
                      const Partition& p = levels.back();
                      const Coder coder(p);
                      std::mt19937_64 rng(cfg.seed);
                      const Subshift s = full_shift(p);
                      for (int k = 0; k < 50; ++k) {
                        const SymbolicPoint sp = random_point(s, rng, 6);
                        if (!(coder.eval_xy(sp.shifted(1)) == phi_apply(ctx, coder.eval_xy(sp), 1)))
                          return "phi(pi(s)) != pi(sigma s) for s = " + sp.format();
                      }
                      return std::string();
                    }});
  checks.push_back({"coding round trip and trapping soundness", [&] {
                      const Partition& p = levels.back();
                      const Coder coder(p);
                      const std::vector<LatticePoint> lattice_set = i_k_set(levels.front());
                      const TrapProfile profile = trap_profile(p, lattice_set);
                      for (const PointXY& pt : orbit_representatives(ctx, cfg.denom_cap)) {
                        const std::string where = "(" + to_string(pt.x) + ", " + to_string(pt.y) + ")";
                        const Rational m = euclidean_min_qpoint(ctx, pt);
                        const std::vector<int> trapped = profile.trapped_at(m);
                        for (const SymbolicPoint& sp : code_qpoint(coder, pt).codings) {
                          if (!(coder.eval_xy(sp) == to_kpoint(reduce_mod1(pt))))
                            return "pi(code(P)) != P for P = " + where;
                          for (int sym : sp.right_loop) {
                            if (std::binary_search(trapped.begin(), trapped.end(), sym))
                              return "member " + std::to_string(sym) + " trapped at t = M(P) = " + to_string(m) +
                                     " occurs in the coding of " + where;
                          }
                        }
                      }
                      return std::string();
                    }});

  bool ok = true;
  char buf[64];
  for (const Check& c : checks) {
    const auto t0 = Clock::now();
    std::string failure;
    try {
      failure = c.run();
    } catch (const InvariantError& e) {
      failure = e.what();
    }
    std::snprintf(buf, sizeof buf, " (%.3f s)", seconds_since(t0));
    if (failure.empty()) {
      out << "[PASS] " << c.name << buf << "\n";
    } else {
      out << "[FAIL] " << c.name << buf << ": " << failure << "\n";
      ok = false;
      break;
    }
  }
  out << (ok ? "all checks passed" : "verification failed") << " for D = " << ctx.D << "\n";
  return ok ? kExitOk : kExitInvariant;
}

int cmd_partition_dump(const RunConfig& cfg, std::ostream& log) {
  const FieldContext ctx = make_context(cfg.D, cfg.m1_bound);
  const Partition p = partition_at_level(ctx, cfg.n);
  Sink sink(cfg.out);
  sink.stream() << partition_to_json(p).dump(1) << "\n";
  sink.finish();
  log << "partition-dump: level " << p.level << ", " << p.size() << " rectangles\n";
  return kExitOk;
}

int cmd_ik_dump(const RunConfig& cfg, std::ostream& log) {
  const FieldContext ctx = make_context(cfg.D, cfg.m1_bound);
  const Partition p0 = generator(ctx);
  const std::vector<LatticePoint> lattice_set = i_k_set(p0, cfg.i_extra);
  const BigRect big = big_rectangle(ctx);
  nlohmann::json j;
  j["D"] = ctx.D;
  j["M1_bound"] = ctx.m1_bound.get_str();
  j["i_extra"] = cfg.i_extra;
  j["half_width_squared"] = qelem_to_json(big.half_width_squared);
  j["half_width_outer"] = big.half_width_outer.get_str();
  j["points"] = nlohmann::json::array();
  for (const LatticePoint& q : lattice_set) j["points"].push_back(lattice_json(q));
  Sink sink(cfg.out);
  sink.stream() << j.dump(1) << "\n";
  sink.finish();
  log << "ik-dump: " << lattice_set.size() << " lattice points\n";
  return kExitOk;
}

int cmd_sft_export(const RunConfig& cfg, std::ostream& log) {
  const FieldContext ctx = make_context(cfg.D, cfg.m1_bound);
  const Partition p0 = generator(ctx);
  Partition pn = p0;
  for (int i = 0; i < cfg.n; ++i) pn = refine(pn);
  const TrapConfig trap{cfg.t_min, i_k_set(p0, cfg.i_extra), cfg.n};
  const Subshift s = avoid(pn, trapped_set(pn, trap));
  Sink sink(cfg.out);
  sink.stream() << "# D " << ctx.D << "\n# t " << to_string(cfg.t_min) << "\n";
  write_transitions(sink.stream(), s);
  sink.finish();
  log << "sft-export: " << s.size() << " symbols\n";
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Euclidean minima, Markov partitions and dimension bounds for real quadratic fields", "qdyn"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  RunConfig cfg;
  std::string grid;
  std::string m1;
  auto field = [&](CLI::App* sub) {
    sub->add_option("--D", cfg.D, "square-free D > 1")->capture_default_str();
    sub->add_option("--m1-bound", m1, "upper bound for M_1(K), p/q or decimal (default ceil(sqrt D))");
  };
  auto output = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "output path, - for stdout")->capture_default_str(); };

  CLI::App* curve = app.add_subcommand("curve", "dimension upper bounds over a t grid (CSV)");
  field(curve);
  curve->add_option("--n", cfg.n, "refinement level")->capture_default_str();
  curve->add_option("--t", grid, "t_min:t_max:t_step")->required();
  curve->add_option("--i-extra", cfg.i_extra, "widen the I_K search box by this many units")->capture_default_str();
  curve->add_option("--manifest", cfg.manifest, "JSON run manifest path");
  output(curve);

  CLI::App* minima = app.add_subcommand("minima", "Davenport's minima of Q(sqrt 5)");
  field(minima);
  minima->add_option("--count", cfg.count, "number of minima")->capture_default_str();
  output(minima);

  CLI::App* verify = app.add_subcommand("verify", "run the invariant checks");
  field(verify);
  int verify_depth = 2;
  verify->add_option("--n", verify_depth, "deepest refinement checked")->capture_default_str();
  verify->add_option("--denom-cap", cfg.denom_cap, "largest Q-point denominator")->capture_default_str();
  verify->add_option("--seed", cfg.seed, "seed for random symbolic points")->capture_default_str();
  verify->add_flag("--perturb", cfg.perturb, "nudge one rectangle by 1/100 (must fail)");

  CLI::App* pdump = app.add_subcommand("partition-dump", "P_n as JSON");
  field(pdump);
  pdump->add_option("--n", cfg.n, "refinement level")->capture_default_str();
  output(pdump);

  CLI::App* ikdump = app.add_subcommand("ik-dump", "the lattice set I_K as JSON");
  field(ikdump);
  ikdump->add_option("--i-extra", cfg.i_extra, "widen the search box")->capture_default_str();
  output(ikdump);

  CLI::App* sft = app.add_subcommand("sft-export", "transition matrix of the subshift avoiding P_n trapped at t");
  field(sft);
  std::string t_single;
  sft->add_option("--n", cfg.n, "refinement level")->capture_default_str();
  sft->add_option("--t", t_single, "threshold t")->required();
  sft->add_option("--i-extra", cfg.i_extra, "widen the I_K search box")->capture_default_str();
  output(sft);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    if (chosen == verify) cfg.n = verify_depth;
    if (!m1.empty()) cfg.m1_bound = parse_rational(m1);
    if (!grid.empty()) parse_grid(grid, cfg);
    if (!t_single.empty()) {
      cfg.t_min = parse_rational(t_single);
      cfg.t_max = cfg.t_min + 1;
    }
    cfg.validate();
    if (chosen == curve) return cmd_curve(cfg, std::cerr);
    if (chosen == minima) {
      Sink sink(cfg.out);
      const int rc = cmd_minima(cfg, sink.stream());
      sink.finish();
      return rc;
    }
    if (chosen == verify) return cmd_verify(cfg, std::cout);
    if (chosen == pdump) return cmd_partition_dump(cfg, std::cerr);
    if (chosen == ikdump) return cmd_ik_dump(cfg, std::cerr);
    return cmd_sft_export(cfg, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvariantError& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace qdyn

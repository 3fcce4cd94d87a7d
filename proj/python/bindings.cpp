#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qdyn/coding.hpp"
#include "qdyn/errors.hpp"
#include "qdyn/spectrum.hpp"

namespace py = pybind11;
using namespace qdyn;

namespace {

py::object fraction(const Rational& r) { return py::module_::import("fractions").attr("Fraction")(r.get_str()); }

// Accepts int, Fraction, str ("p/q" or decimal) or float (through its repr).
Rational rational(const py::handle& obj) { return parse_rational(py::str(obj).cast<std::string>()); }

FieldContext context(long D, const py::object& m1_bound) {
  if (m1_bound.is_none()) return make_context(D);
  return make_context(D, rational(m1_bound));
}

py::dict sample_dict(const SpectrumSample& s) {
  py::dict d;
  d["t"] = fraction(s.t);
  d["n"] = s.n;
  d["trapped_count"] = s.trapped_count;
  d["alphabet_size"] = s.alphabet_size;
  d["entropy"] = s.entropy;
  d["dim_upper"] = s.dim_upper;
  d["empty"] = s.empty;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qdyn, m) {
  m.doc() = "Exact Euclidean minima, Markov partitions and dimension bounds for real quadratic fields";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<FieldContext>(m, "Field")
      .def_readonly("D", &FieldContext::D)
      .def_property_readonly("eps", [](const FieldContext& c) { return c.eps.str(); })
      .def_property_readonly("eps_float", [](const FieldContext& c) { return c.eps_d; })
      .def_property_readonly("norm_of_eps", [](const FieldContext& c) { return c.eps_conj_sign; })
      .def_property_readonly("m1_bound", [](const FieldContext& c) { return fraction(c.m1_bound); })
      .def("__repr__", [](const FieldContext& c) { return "Field(D=" + std::to_string(c.D) + ", eps=" + c.eps.str() + ")"; });

  m.def("make_field", &context, py::arg("D"), py::arg("m1_bound") = py::none());

  m.def(
      "euclidean_min",
      [](long D, const py::object& x, const py::object& y, const py::object& m1) {
        return fraction(euclidean_min_qpoint(context(D, m1), PointXY{rational(x), rational(y)}));
      },
      py::arg("D"), py::arg("x"), py::arg("y"), py::arg("m1_bound") = py::none(),
      "Exact M(P) of the Q-point x + y*alpha.");

  m.def("davenport_minima", [](long i) { return fraction(davenport_minima(i)); }, py::arg("i"));
  m.def("t_infinity", [] { return t_infinity(make_context(5)).to_double(); });

  py::class_<Partition>(m, "Partition")
      .def_readonly("level", &Partition::level)
      .def("__len__", &Partition::size)
      .def_property_readonly("D", [](const Partition& p) { return p.ctx.D; })
      .def("transitions", &Partition::transitions)
      .def("words", [](const Partition& p) {
        std::vector<Word> out;
        for (const Rect& r : p.rects) out.push_back(r.word);
        return out;
      })
      .def("verify_markov", [](const Partition& p) {
        const MarkovReport r = verify_markov(p);
        return py::make_tuple(r.ok, r.message);
      })
      .def("verify_tiling", [](const Partition& p) {
        const MarkovReport r = verify_tiling(p);
        return py::make_tuple(r.ok, r.message);
      })
      .def("to_json", [](const Partition& p) { return partition_to_json(p).dump(); });

  m.def(
      "partition",
      [](long D, int n, const py::object& m1) { return partition_at_level(context(D, m1), n); }, py::arg("D"),
      py::arg("n") = 0, py::arg("m1_bound") = py::none());

  m.def(
      "lattice_set",
      [](long D, long extra, const py::object& m1) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const LatticePoint& q : i_k_set(generator(context(D, m1)), extra))
          out.emplace_back(q.m.get_str(), q.n.get_str());
        return out;
      },
      py::arg("D"), py::arg("extra_margin") = 0, py::arg("m1_bound") = py::none(),
      "I_K as (m, n) pairs with q = m + n*alpha, integers given as strings.");

  m.def(
      "entropy",
      [](const std::vector<std::vector<int>>& matrix) {
        const EntropyResult e = entropy(from_matrix(matrix));
        py::dict d;
        d["value"] = e.value;
        d["lower"] = e.lower;
        d["upper"] = e.upper;
        d["empty"] = e.empty;
        return d;
      },
      py::arg("matrix"));

  m.def(
      "dim_curve",
      [](long D, int n, const py::object& t_min, const py::object& t_max, const py::object& t_step, long extra,
         const py::object& m1, unsigned threads) {
        const FieldContext ctx = context(D, m1);
        const auto grid = t_grid(rational(t_min), rational(t_max), rational(t_step));
        const auto set = i_k_set(generator(ctx), extra);
        std::vector<SpectrumSample> samples;
        {
          py::gil_scoped_release release;
          samples = dim_curve(ctx, grid, n, set, threads);
        }
        py::list out;
        for (const auto& s : samples) out.append(sample_dict(s));
        return out;
      },
      py::arg("D"), py::arg("n"), py::arg("t_min"), py::arg("t_max"), py::arg("t_step"), py::arg("extra_margin") = 0,
      py::arg("m1_bound") = py::none(), py::arg("threads") = 0);

  m.def(
      "code_qpoint",
      [](long D, int n, const py::object& x, const py::object& y) {
        const Coder coder(partition_at_level(make_context(D), n));
        std::vector<std::string> out;
        for (const SymbolicPoint& sp : code_qpoint(coder, PointXY{rational(x), rational(y)}).codings)
          out.push_back(sp.format());
        return out;
      },
      py::arg("D"), py::arg("n"), py::arg("x"), py::arg("y"),
      "Codings of a Q-point in the text form pre_left|loop_left|center|loop_right|pre_right.");

  m.def(
      "certify",
      [](long D, int n, const std::string& text) {
        const Coder coder(partition_at_level(make_context(D), n));
        const QElem v = certify_spectrum_point(coder, SymbolicPoint::parse(text, n));
        return py::make_tuple(v.str(), v.to_double());
      },
      py::arg("D"), py::arg("n"), py::arg("text"), "Exact M(pi(s)) as (text, float).");

  m.attr("__version__") = tool_version();
}

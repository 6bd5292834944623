// Python bindings for the core operations. Big integers and exact rationals
// cross the boundary as decimal strings; the package wrapper converts them.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "remlab/error.hpp"
#include "remlab/experiments.hpp"

namespace py = pybind11;
using namespace remlab;

namespace {

py::tuple certified(const CertifiedValue& v) { return py::make_tuple(v.value(), v.radius_value()); }

mpz_class big(const std::string& s) {
  mpz_class v;
  if (v.set_str(s, 10) != 0) throw Error(ErrorKind::InvalidSpec, "not an integer: '" + s + "'");
  return v;
}

mpq_class rational(const std::string& s) {
  mpq_class v;
  if (v.set_str(s, 10) != 0) throw Error(ErrorKind::InvalidSpec, "not a rational: '" + s + "'");
  v.canonicalize();
  return v;
}

py::dict cf_dict(const CFExpansion& cf) {
  py::dict d;
  std::vector<std::string> q;
  for (const auto& a : cf.quotients) q.push_back(a.get_str());
  d["quotients"] = q;
  d["terminated"] = cf.terminated;
  d["period_start"] = cf.period_start ? py::cast(*cf.period_start) : py::none();
  d["period_length"] = cf.period_length;
  d["text"] = cf.str();
  return d;
}

}  // namespace

PYBIND11_MODULE(_remlab, m) {
  m.doc() = "Certified experiments on bounded remainder sets of ({a_n alpha}).";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error;
      py::object instance = exc(e.what());
      instance.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error.ptr(), instance.ptr());
    }
  });

  m.def("parse_real", [](const std::string& s) { return RealSpec::parse(s).str(); }, py::arg("spec"),
        "Canonical text of a real spec.");
  m.def("frac_part", [](const std::string& x, const std::string& mult, double tol) {
    return certified(frac_part(RealSpec::parse(x), big(mult), tol));
  }, py::arg("x"), py::arg("m"), py::arg("tol") = 1e-12, "{m x} as (midpoint, radius).");
  m.def("nearest_int_dist", [](const std::string& x, const std::string& mult, double tol) {
    return certified(nearest_int_dist(RealSpec::parse(x), big(mult), tol));
  }, py::arg("x"), py::arg("m"), py::arg("tol") = 1e-12, "||m x|| as (midpoint, radius).");

  m.def("cf_expand", [](const std::string& x, std::size_t n) { return cf_dict(cf_expand(RealSpec::parse(x), n)); },
        py::arg("x"), py::arg("n"));
  m.def("convergents", [](const std::string& x, std::size_t n) {
    const CFExpansion cf = cf_expand(RealSpec::parse(x), n + 1);
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& c : convergents(cf, n)) out.emplace_back(c.p.get_str(), c.q.get_str());
    return out;
  }, py::arg("x"), py::arg("n"), "Convergents 1..n as (p, q) decimal strings.");
  m.def("simultaneous_approx", [](const std::vector<std::string>& alphas, const std::string& eps,
                                  const std::string& q_cap) {
    std::vector<RealSpec> a;
    for (const auto& s : alphas) a.push_back(RealSpec::parse(s));
    return simultaneous_approx(a, TrackedReal(rational(eps)), big(q_cap)).get_str();
  }, py::arg("alphas"), py::arg("eps"), py::arg("q_cap"));

  m.def("beta_expand", [](const std::string& x, const std::string& base, std::size_t n) {
    return beta_expand(RealSpec::parse(x), PisotBase::parse(base), n).digits;
  }, py::arg("x"), py::arg("base"), py::arg("n"));
  m.def("pisot_power_dist", [](const std::string& base, unsigned long n, double tol) {
    return certified(pisot_power_dist(PisotBase::parse(base), n, tol));
  }, py::arg("base"), py::arg("n"), py::arg("tol") = 1e-20);
  m.def("tail_index", [](const std::string& base, const std::string& eps) {
    return tail_index(PisotBase::parse(base), rational(eps));
  }, py::arg("base"), py::arg("eps"));
  m.def("zero_run_find", [](const std::string& digits, std::uint64_t run_len, std::uint64_t scan_cap) {
    const RealSpec spec = RealSpec::parse(digits);
    if (!spec.digit_source()) throw Error(ErrorKind::InvalidSpec, "zero_run_find needs a digits: spec");
    return zero_run_find(*spec.digit_source(), run_len, scan_cap);
  }, py::arg("digits"), py::arg("run_len"), py::arg("scan_cap"));

  m.def("generate", [](const std::string& sequence_json, std::uint64_t n, double tol) {
    const PointStream s = generate(sequence_from_json(nlohmann::json::parse(sequence_json)), n, tol);
    std::vector<std::vector<double>> out;
    for (std::uint64_t i = 1; i <= n; ++i) {
      std::vector<double> p;
      for (const auto& c : s.point(i)) p.push_back(c.approx());
      out.push_back(p);
    }
    return out;
  }, py::arg("sequence_json"), py::arg("n"), py::arg("tol") = 1e-12, "Point midpoints, one list per point.");
  m.def("build_qn_plus_n", [](const std::string& alpha, std::uint64_t n) {
    std::vector<std::string> a;
    for (const auto& v : build_qn_plus_n(RealSpec::parse(alpha), n).a) a.push_back(v.get_str());
    return a;
  }, py::arg("alpha"), py::arg("n"));
  m.def("counterexample_boundary", [](unsigned depth) {
    const CounterexampleBoundary b = counterexample_boundary(depth);
    py::dict d;
    std::vector<std::string> n;
    for (const auto& v : b.n) n.push_back(v.get_str());
    d["n"] = n;
    d["a_lower"] = certified(b.a_lower.certify(1e-30));
    d["a_upper"] = certified(b.a_upper.certify(1e-30));
    d["sandwich"] = b.sandwich;
    return d;
  }, py::arg("depth"));
  m.def("kesten_lengths", [](const std::string& alpha, std::size_t j_max) {
    std::vector<py::tuple> out;
    for (const auto& v : kesten_lengths(RealSpec::parse(alpha), j_max)) out.push_back(certified(v.certify(1e-15)));
    return out;
  }, py::arg("alpha"), py::arg("j_max"));

  m.def("extreme_discrepancy", [](const std::vector<std::string>& points) {
    std::vector<mpq_class> xs;
    for (const auto& p : points) xs.push_back(rational(p));
    return extreme_discrepancy(xs).get_str();
  }, py::arg("points"), "Exact extreme discrepancy of rationals given as 'p/q' strings.");
  m.def("snbrs_thresholds", [](const std::string& c, const std::string& interval) {
    const Thresholds t = snbrs_thresholds(rational(c), Interval::parse(interval));
    return py::make_tuple(t.k_inside.get_str(), t.k_outside.get_str());
  }, py::arg("c"), py::arg("interval"));

  m.def("run_experiment", [](const std::string& config_json) {
    ExperimentConfig c;
    c.merge_json(nlohmann::json::parse(config_json));
    ExperimentResult r;
    {
      py::gil_scoped_release release;
      r = run_experiment(c);
    }
    return py::make_tuple(r.summary.dump(), r.csv);
  }, py::arg("config_json"), "(summary JSON text, trace CSV text).");
}

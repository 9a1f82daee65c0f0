#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "detwork/approx.hpp"
#include "detwork/bounds.hpp"
#include "detwork/errors.hpp"
#include "detwork/protocol.hpp"
#include "detwork/rate.hpp"
#include "detwork/shellcount.hpp"
#include "detwork/spectrum.hpp"

namespace py = pybind11;
using namespace detwork;

namespace {

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(py::str(to_string(r)));
}

py::object big(const BigInt& v) { return py::module_::import("builtins").attr("int")(py::str(v.get_str())); }

Rational to_rational(const py::handle& h) { return parse_rational(py::str(h).cast<std::string>()); }

Spectrum spectrum_from(const py::list& levels, const std::string& label) {
  std::vector<LevelSpec> out;
  for (const auto& item : levels) {
    auto t = item.cast<py::tuple>();
    if (t.size() != 3) throw InvalidSpectrum("each level is (energy, degeneracy, occupied)");
    out.push_back({to_rational(t[0]), t[1].cast<int>(), t[2].cast<int>()});
  }
  return normalize_ground(Spectrum(std::move(out), label));
}

py::dict rate_dict(const RateResult& r) {
  py::dict d;
  d["n"] = r.n;
  d["shift"] = r.shift;
  d["work_total"] = fraction(r.work_total);
  d["rate"] = fraction(r.rate);
  return d;
}

py::dict report_dict(const ProtocolReport& rep) {
  py::dict works;
  for (const auto& [w, k] : rep.work_counts) works[fraction(w)] = big(k);
  py::dict d;
  d["works"] = works;
  d["states"] = big(rep.states);
  d["deterministic"] = rep.deterministic;
  d["mean"] = fraction(rep.mean_work);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact deterministic work extraction engine";

  auto base = py::register_exception<Error>(m, "DetworkError", PyExc_RuntimeError);
  py::register_exception<InvalidSpectrum>(m, "InvalidSpectrum", base.ptr());
  py::register_exception<ResourceLimitExceeded>(m, "ResourceLimitExceeded", base.ptr());

  py::class_<Spectrum>(m, "Spectrum")
      .def(py::init(&spectrum_from), py::arg("levels"), py::arg("label") = "",
           "levels: list of (energy, degeneracy, occupied); energies may be int, str or Fraction")
      .def_static("from_json", [](const std::string& text) { return parse_spectrum(text); })
      .def_property_readonly("energies",
                             [](const Spectrum& s) {
                               py::list out;
                               for (const auto& e : s.energies()) out.append(fraction(e));
                               return out;
                             })
      .def_property_readonly("degeneracies",
                             [](const Spectrum& s) {
                               std::vector<int> d;
                               for (const auto& l : s.levels()) d.push_back(l.degeneracy);
                               return d;
                             })
      .def_property_readonly("occupied", &Spectrum::occupied_dims)
      .def_property_readonly("ground_shift", [](const Spectrum& s) { return fraction(s.ground_shift()); })
      .def_property_readonly("label", &Spectrum::label)
      .def("__len__", &Spectrum::size);

  m.def("eps_min", [](const Spectrum& s) { return fraction(eps_min(s)); });
  m.def("dominates", &dominates, py::arg("a"), py::arg("b"));
  m.def("lattice", [](const Spectrum& s) {
    const auto ls = to_lattice(s);
    return py::make_tuple(fraction(ls.unit), ls.m);
  });

  m.def(
      "shell_counts",
      [](const Spectrum& s, int n, const std::string& weight) {
        const auto sc = shell_counts(to_lattice(s), n, weight == "occupied" ? Weight::occupied : Weight::full);
        py::list out;
        for (const auto& c : sc.counts) out.append(big(c));
        return out;
      },
      py::arg("spectrum"), py::arg("n"), py::arg("weight") = "full");

  m.def("rate_n", [](const Spectrum& s, int n) { return rate_dict(rate_n(s, n)); }, py::arg("spectrum"), py::arg("n"));
  m.def(
      "rate_sweep",
      [](const Spectrum& s, int lo, int hi) {
        py::list out;
        for (const auto& r : rate_sweep(s, lo, hi)) out.append(rate_dict(r));
        return out;
      },
      py::arg("spectrum"), py::arg("n_from"), py::arg("n_to"));
  m.def("brute_force_mdew", [](const Spectrum& s, int n) { return rate_dict(brute_force_mdew(s, n)); });
  m.def("binomial_rate_2level",
        [](int d1, int delta1, int n) { return fraction(binomial_rate_2level(d1, delta1, n)); });

  m.def("ergotropy_upper_bound", &ergotropy_upper_bound);
  m.def("beta_hat", [](const Spectrum& s) {
    const auto r = solve_beta_star(s);
    return py::make_tuple(r.beta, r.residual);
  });
  m.def("clt_estimate", [](const Spectrum& s) { return clt_estimate(s).value; });
  m.def(
      "lower_bounds",
      [](const Spectrum& s, std::optional<int> n) {
        const auto lb = lower_bounds(to_lattice(s), n);
        py::dict d;
        d["lcm_lower"] = fraction(lb.lcm_lower);
        d["harmonic_lower"] = lb.harmonic_lower ? fraction(*lb.harmonic_lower) : py::none();
        d["finite_n_lower"] = lb.finite_n_lower ? fraction(*lb.finite_n_lower) : py::none();
        return d;
      },
      py::arg("spectrum"), py::arg("n") = py::none());
  m.def("lcm_plan", [](const Spectrum& s) {
    const auto p = lcm_plan(to_lattice(s));
    py::dict K;
    for (const auto& [i, k] : p.K) K[py::int_(i)] = big(k);
    py::dict d;
    d["M_S"] = big(p.M_S);
    d["K"] = K;
    d["K_S"] = big(p.K_S);
    d["e_frak"] = fraction(p.e_frak);
    return d;
  });

  m.def(
      "verify_protocol",
      [](const Spectrum& s, int n, std::optional<long long> shift) {
        const auto ls = to_lattice(s);
        const auto pt = build_protocol(ls, n, shift ? *shift : max_det_shift(ls, n), false);
        return report_dict(verify_protocol(pt, s));
      },
      py::arg("spectrum"), py::arg("n"), py::arg("shift") = py::none(),
      "Build the protocol for (n, shift) and verify it on the same spectrum");
  m.def("lcm_protocol", [](const Spectrum& s) {
    const auto lp = lcm_protocol(to_lattice(s));
    py::dict d = report_dict(verify_protocol(lp.table, s));
    d["n"] = lp.n;
    d["work_total"] = fraction(lp.table.work());
    d["realizes_injection"] = lp.realizes_injection;
    return d;
  });

  m.def(
      "bounded_fluctuation",
      [](const Spectrum& s, const std::string& delta, int n, double c, const std::string& ground) {
        const auto plan = plan_bounded_fluctuation(s, parse_rational(delta), c,
                                                   ground == "split" ? GroundMode::split : GroundMode::pinned);
        const auto res = bounded_fluctuation_protocol(plan, n);
        py::dict d;
        d["unit"] = fraction(plan.snapped.unit);
        d["m"] = plan.snapped.m;
        d["e_frak"] = fraction(plan.e_frak);
        d["shift"] = res.table.shift;
        d["positive_shift"] = res.positive_shift;
        d["w_prime"] = fraction(res.band.w_prime);
        d["min_work"] = fraction(res.band.min_work);
        d["max_work"] = fraction(res.band.max_work);
        d["spread"] = fraction(res.band.spread);
        d["pass"] = res.band.pass;
        return d;
      },
      py::arg("spectrum"), py::arg("delta"), py::arg("n"), py::arg("c") = 0.5, py::arg("ground") = "pinned");
}

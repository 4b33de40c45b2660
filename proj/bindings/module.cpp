// Python face of the library: plain data in, plain data out.  Exact scalars
// travel as fractions.Fraction (or int), floats as float; sequences as
// (lo, [coeffs]) pairs.

#include "subdivkit/analysis.hpp"
#include "subdivkit/construct.hpp"
#include "subdivkit/errors.hpp"
#include "subdivkit/interp.hpp"
#include "subdivkit/io.hpp"
#include "subdivkit/mask.hpp"
#include "subdivkit/quasistat.hpp"
#include "subdivkit/transition.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <complex>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace subdivkit;

namespace {

py::object fraction_type() {
    static py::object t = py::module_::import("fractions").attr("Fraction");
    return t;
}

py::object big_int(const mpz_class& z) {
    return py::module_::import("builtins").attr("int")(z.get_str());
}

py::object scalar_to_py(const Scalar& s) {
    if (!s.exact()) return py::float_(s.dbl());
    const mpq_class& q = s.rat();
    if (q.get_den() == 1) return big_int(q.get_num());
    return fraction_type()(big_int(q.get_num()), big_int(q.get_den()));
}

Scalar scalar_from_py(py::handle h) {
    if (py::isinstance<py::bool_>(h)) throw std::invalid_argument("bool is not a coefficient");
    if (py::isinstance<py::int_>(h))
        return Scalar(mpz_class(py::str(h).cast<std::string>()));
    if (py::isinstance<py::float_>(h)) return Scalar(h.cast<double>());
    if (py::isinstance<py::str>(h)) return io::parse_scalar(h.cast<std::string>());
    if (py::hasattr(h, "numerator") && py::hasattr(h, "denominator"))
        return Scalar::ratio(mpz_class(py::str(h.attr("numerator")).cast<std::string>()),
                             mpz_class(py::str(h.attr("denominator")).cast<std::string>()));
    throw std::invalid_argument("cannot interpret " +
                                py::str(py::type::of(h)).cast<std::string>() + " as a coefficient");
}

FiniteSequence seq_from_py(long lo, py::handle coeffs) {
    std::vector<Scalar> c;
    for (py::handle item : py::iter(coeffs)) c.push_back(scalar_from_py(item));
    return FiniteSequence(lo, std::move(c));
}

py::tuple seq_to_py(const FiniteSequence& u) {
    py::list c;
    for (const auto& s : u.coeffs()) c.append(scalar_to_py(s));
    return py::make_tuple(u.is_zero() ? 0 : u.lower(), c);
}

py::list scalars_to_py(const std::vector<Scalar>& v) {
    py::list out;
    for (const auto& s : v) out.append(scalar_to_py(s));
    return out;
}

py::dict smoothness_to_py(const analysis::SmoothnessReport& r) {
    py::dict d;
    d["sum_rules"] = r.sum_rules;
    d["sm2"] = r.sm2.value;
    d["lambda_c"] = r.sm2.lambda_c;
    py::dict coset;
    for (const auto& [n, bound] : r.sminf_coset) coset[py::int_(n)] = bound;
    d["sminf"] = coset;
    d["certified_sminf"] = r.certified_sminf;
    d["inexact"] = r.inexact;
    return d;
}

py::dict cert_to_py(const interp::InterpolationCertificate& c) {
    py::dict d;
    d["verdict"] = verdict_name(c.verdict);
    d["reason"] = c.reason;
    d["s_a"] = scalar_to_py(c.s_a);
    d["m"] = c.m;
    d["m_s"] = c.params.m_s;
    d["n_s"] = c.params.n_s;
    d["gamma"] = c.params.gamma;
    d["exact"] = c.exact;
    d["max_residual"] = c.max_residual;
    d["w"] = seq_to_py(c.w);
    d["smoothness"] = smoothness_to_py(c.smoothness);
    return d;
}

py::dict candidate_to_py(const construct::Candidate& c) {
    py::dict d;
    d["mask"] = c.mask;
    d["params"] = scalars_to_py(c.params);
    d["w"] = seq_to_py(c.w);
    d["exact"] = c.exact;
    d["residual"] = c.residual;
    d["lambda_c"] = c.lambda_c;
    d["sm2"] = c.sm2;
    d["accepted"] = c.accepted;
    d["verdict"] = interp::verdict_name(c.verdict);
    return d;
}

std::vector<unsigned> level_list(const std::vector<unsigned>& levels) {
    if (levels.empty()) throw std::invalid_argument("levels must be nonempty");
    return levels;
}

quasistat::SchemeSpec scheme_from_masks(const std::vector<Mask>& masks) {
    return quasistat::SchemeSpec(masks);
}

}  // namespace

PYBIND11_MODULE(_subdivkit, mod) {
    mod.doc() = "interpolatory M-subdivision schemes: exact masks, smoothness, verification";

    py::register_exception<Infeasible>(mod, "Infeasible");
    py::register_exception<ResourceLimit>(mod, "ResourceLimit");

    py::class_<Mask>(mod, "Mask")
        .def(py::init([](long dilation, long lo, py::handle coeffs) {
                 return Mask(seq_from_py(lo, coeffs), dilation);
             }),
             "dilation"_a, "lo"_a, "coeffs"_a,
             "Mask with coefficients a(lo), a(lo+1), ... given as Fraction, int, "
             "float, or 'p/q' strings.")
        .def_property_readonly("dilation", [](const Mask& a) { return a.dilation; })
        .def_property_readonly("lo", [](const Mask& a) { return a.seq.lower(); })
        .def_property_readonly("hi", [](const Mask& a) { return a.seq.upper(); })
        .def_property_readonly("coeffs",
                               [](const Mask& a) { return scalars_to_py(a.seq.coeffs()); })
        .def_property_readonly("exact", &Mask::exact)
        .def_property_readonly("symmetry_center",
                               [](const Mask& a) -> py::object {
                                   auto c = seqalg::symmetry_center(a);
                                   if (!c) return py::none();
                                   return py::int_(*c);
                               })
        .def("__eq__",
             [](const Mask& a, const Mask& b) { return a.dilation == b.dilation && a.seq == b.seq; })
        .def("__repr__", [](const Mask& a) {
            std::string r = "Mask(dilation=" + std::to_string(a.dilation) +
                            ", lo=" + std::to_string(a.seq.is_zero() ? 0 : a.seq.lower()) +
                            ", coeffs=[";
            const auto& c = a.seq.coeffs();
            for (size_t i = 0; i < c.size(); ++i) {
                if (i) r += ", ";
                r += io::scalar_string(c[i]);
            }
            return r + "])";
        });

    mod.def("hat", &seqalg::hat_mask, "dilation"_a,
            "Centered hat mask: dilation^{-2} z^{1-M} (1 + z + ... + z^{M-1})^2.");

    mod.def("sum_rules", [](const Mask& a) { return analysis::sum_rule_factorization(a).order; },
            "a"_a, "Maximal J with (1 + z + ... + z^{M-1})^J dividing the symbol.");

    mod.def("sm2", [](const Mask& a) { return analysis::sm2(a).value; }, "a"_a,
            "L2 smoothness exponent from the autocorrelation eigenvalue.");

    mod.def("lambda_c", [](const Mask& a) { return analysis::sm2(a).lambda_c; }, "a"_a,
            "Largest-modulus eigenvalue behind sm2.");

    mod.def("sminf_lower_bound", &analysis::sminf_lower_bound, "a"_a, "n"_a,
            "Coset lower bound for the L-infinity smoothness exponent at depth n.");

    mod.def("smoothness",
            [](const Mask& a, const std::vector<unsigned>& levels) {
                return smoothness_to_py(analysis::smoothness_summary(a, level_list(levels)));
            },
            "a"_a, "levels"_a = std::vector<unsigned>{1, 2, 3},
            "Combined report: sum rules, sm2, coset sm_inf bounds, certified bound.");

    mod.def("moments",
            [](const Mask& a, unsigned jmax) {
                auto mo = analysis::moments(a, jmax);
                py::dict d;
                d["mu"] = scalars_to_py(mo.mu);
                d["m_a"] = scalar_to_py(mo.m_a);
                d["s_a"] = scalar_to_py(mo.s_a);
                return d;
            },
            "a"_a, "jmax"_a = 1, "Power moments mu_j = sum_k k^j a(k), with m_a and s_a = m_a/(M-1).");

    mod.def("admissible",
            [](py::handle s_a, long dilation) {
                auto p = interp::admissible_params(scalar_from_py(s_a), dilation);
                return py::make_tuple(p.m_s, p.n_s, p.gamma);
            },
            "s_a"_a, "dilation"_a,
            "Minimal (m_s, n_s, gamma) with dilation^{m_s} (dilation^{n_s} - 1) s_a = gamma.");

    mod.def("verify",
            [](const Mask& a, py::handle s_a, unsigned m, const std::vector<unsigned>& levels) {
                return cert_to_py(
                    interp::verify_interpolatory(a, scalar_from_py(s_a), m, level_list(levels)));
            },
            "a"_a, "s_a"_a, "m"_a = 0, "levels"_a = std::vector<unsigned>{1, 2, 3},
            "Interpolation certificate of the n_s-step scheme at shift s_a, smoothness target m.");

    mod.def("construct",
            [](long dilation, unsigned sum_rules, std::pair<long, long> support, py::handle s_a,
               bool symmetric, unsigned m, bool optimize, unsigned starts, unsigned iterations) {
                construct::ConstructionSpec spec;
                spec.dilation = dilation;
                spec.sum_rules = sum_rules;
                spec.lo = support.first;
                spec.hi = support.second;
                spec.s_a = scalar_from_py(s_a);
                spec.symmetric = symmetric;
                spec.m = m;
                spec.optimize = optimize;
                spec.starts = starts;
                spec.iterations = iterations;
                auto res = construct::run(spec);
                py::dict d;
                d["m_s"] = res.params.m_s;
                d["n_s"] = res.params.n_s;
                d["gamma"] = res.params.gamma;
                py::list cands;
                for (const auto& c : res.candidates) cands.append(candidate_to_py(c));
                d["best"] = candidate_to_py(res.best());
                d["candidates"] = cands;
                py::dict fam;
                fam["present"] = res.family.present;
                fam["exact"] = res.family.exact;
                fam["dimension"] = res.family.dimension;
                d["family"] = fam;
                d["optimized"] =
                    res.optimized ? py::object(candidate_to_py(*res.optimized)) : py::none();
                return d;
            },
            "dilation"_a, "sum_rules"_a, "support"_a, "s_a"_a, "symmetric"_a = false, "m"_a = 0,
            "optimize"_a = false, "starts"_a = 64, "iterations"_a = 200,
            "Construct interpolatory masks with the requested support, sum rules, and shift.");

    mod.def("subdivide",
            [](const Mask& a, py::handle values, unsigned levels, long lo) {
                FiniteSequence v = seq_from_py(lo, values);
                for (unsigned i = 0; i < levels; ++i) v = seqalg::subdivide_once(a, v);
                return seq_to_py(v);
            },
            "a"_a, "values"_a, "levels"_a = 1, "lo"_a = 0,
            "Apply the subdivision operator `levels` times to data starting at index lo.");

    mod.def("iterated_mask",
            [](const Mask& a, unsigned n) { return seq_to_py(seqalg::iterated_mask(a, n)); },
            "a"_a, "n"_a, "A_n = dilation^{-n} S^n delta.");

    mod.def("compose",
            [](const std::vector<Mask>& masks) {
                return quasistat::compose_masks(scheme_from_masks(masks));
            },
            "masks"_a, "Composed mask of one period of the periodic scheme (dilation M^r).");

    mod.def("quasi_subdivide",
            [](const std::vector<Mask>& masks, py::handle values, unsigned n, long lo) {
                return seq_to_py(quasistat::quasi_subdivide(scheme_from_masks(masks),
                                                            seq_from_py(lo, values), n));
            },
            "masks"_a, "values"_a, "n"_a, "lo"_a = 0,
            "n steps of the periodic scheme (masks[0] applied first).");

    mod.def("quasi_verify",
            [](const std::vector<Mask>& masks, py::handle s_a, unsigned m,
               const std::vector<unsigned>& levels) {
                auto cert = quasistat::verify_quasi(scheme_from_masks(masks), scalar_from_py(s_a),
                                                    m, level_list(levels));
                py::dict d;
                d["verdict"] = interp::verdict_name(cert.verdict);
                d["reason"] = cert.reason;
                d["mask_sum_rules"] = cert.mask_sum_rules;
                d["composed"] = cert_to_py(cert.composed);
                d["composed_mask"] = cert.composed_mask;
                return d;
            },
            "masks"_a, "s_a"_a, "m"_a = 0, "levels"_a = std::vector<unsigned>{1, 2, 3},
            "Certificate for the periodic scheme: per-mask sum rules, composed-mask "
            "smoothness, interpolation identities.");

    mod.def("eval_phi",
            [](const Mask& a, py::handle s) {
                return scalar_to_py(transition::eval_phi(a, scalar_from_py(s)).value);
            },
            "a"_a, "s"_a,
            "phi(s) of the interpolating refinable function at an M-adic rational s; "
            "exact for exact masks.");

    mod.def("sample_phi",
            [](const Mask& a, unsigned level, unsigned deriv) {
                return seq_to_py(transition::sample_phi_grid(a, level, deriv).values);
            },
            "a"_a, "level"_a, "deriv"_a = 0,
            "Grid samples phi(M^{-level} k); deriv = j emits scaled j-th backward differences.");

    mod.def("spectrum",
            [](const Mask& a, long gamma) {
                auto eig = transition::spectrum(transition::transition_matrix(a, gamma));
                std::sort(eig.begin(), eig.end(), [](auto x, auto y) {
                    if (std::abs(x) != std::abs(y)) return std::abs(x) > std::abs(y);
                    if (x.real() != y.real()) return x.real() > y.real();
                    return x.imag() > y.imag();
                });
                return eig;
            },
            "a"_a, "gamma"_a = 0,
            "Eigenvalues of the restricted transition operator, largest modulus first.");

    mod.def("mask_to_json", &io::emit_mask_json, "a"_a, "name"_a = "");
    mod.def("mask_from_json", &io::parse_mask_json, "text"_a);
    mod.def("scheme_to_json",
            [](const std::vector<Mask>& masks, const std::string& name) {
                return io::emit_scheme_json(scheme_from_masks(masks), name);
            },
            "masks"_a, "name"_a = "");
    mod.def("scheme_from_json",
            [](const std::string& text) { return io::parse_scheme_json(text).masks; }, "text"_a);

    mod.attr("__version__") = "0.1.0";
}

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diastasis/acceptance.hpp"
#include "diastasis/calabi.hpp"
#include "diastasis/cli.hpp"
#include "diastasis/cone.hpp"
#include "diastasis/corpus.hpp"
#include "diastasis/curvature.hpp"
#include "diastasis/errors.hpp"

namespace py = pybind11;
using namespace diastasis;

namespace {

// Rationals cross the boundary as fractions.Fraction; inputs may be anything
// whose str() is "p" or "p/q".
py::object fraction(const Rational& r)
{
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    return cls(to_string(r));
}

Rational rational(const py::handle& h)
{
    return parse_rational(py::str(h).cast<std::string>());
}

py::tuple coefficient(const Coefficient& c)
{
    return py::make_tuple(fraction(c.re), fraction(c.im));
}

py::tuple exponents(const MultiIndex& m)
{
    return py::cast(m.exponents());
}

py::dict verdict(const InducibilityVerdict& v)
{
    py::dict out;
    if (const auto* ni = std::get_if<NotInduced>(&v)) {
        out["class"] = "NotInduced";
        out["order"] = ni->order;
        py::list w;
        for (const auto& c : ni->witness.vector)
            w.append(coefficient(c));
        out["witness"] = w;
        out["value"] = fraction(ni->witness.value);
        out["radial_weight"] = ni->radial_weight ? py::cast(*ni->radial_weight) : py::none();
    } else {
        const auto& c = std::get<ConsistentUpTo>(v);
        out["class"] = "ConsistentUpTo";
        out["order"] = c.order;
        out["rank_lower_bound"] = c.rank_lower_bound;
    }
    return out;
}

py::list matrix(const HermitianMatrix& m)
{
    py::list rows;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        py::list row;
        for (std::size_t j = 0; j < m.dim(); ++j)
            row.append(coefficient(m(i, j)));
        rows.append(row);
    }
    return rows;
}

HermitianSeries from_terms(std::size_t n, unsigned d, const py::iterable& terms)
{
    std::vector<std::tuple<MultiIndex, MultiIndex, Coefficient>> out;
    for (const auto& t : terms) {
        const auto seq = t.cast<py::sequence>();
        if (seq.size() != 3 && seq.size() != 4)
            throw ParseError("term must be (m, k, re) or (m, k, re, im)");
        const MultiIndex m(seq[0].cast<std::vector<unsigned>>());
        const MultiIndex k(seq[1].cast<std::vector<unsigned>>());
        const Coefficient c(rational(seq[2]), seq.size() == 4 ? rational(seq[3]) : Rational(0));
        out.emplace_back(m, k, c);
    }
    return HermitianSeries::from_terms(n, d, out);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Exact Calabi-diastasis analysis of Kähler potentials";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

    py::class_<HermitianSeries>(m, "Potential")
        .def_property_readonly("n", &HermitianSeries::n)
        .def_property_readonly("order", &HermitianSeries::bound)
        .def("terms", [](const HermitianSeries& s) {
            py::list out;
            for (const auto& [key, c] : s.terms())
                out.append(py::make_tuple(exponents(s.order().monomial(key.first)),
                    exponents(s.order().monomial(key.second)), coefficient(c)));
            return out;
        }, "List of (m, k, (re, im)) for the terms z^m zbar^k.")
        .def("coeff", [](const HermitianSeries& s, const std::vector<unsigned>& mm, const std::vector<unsigned>& kk) {
            return coefficient(s.coeff(MultiIndex(mm), MultiIndex(kk)));
        })
        .def("scaled", [](const HermitianSeries& s, const py::object& k) { return s.scaled(rational(k)); })
        .def("serialize", &serialize_potential)
        .def("__eq__", [](const HermitianSeries& a, const HermitianSeries& b) { return a == b; })
        .def("__repr__", [](const HermitianSeries& s) { return to_string(s.series()); });

    m.def("builtin_potential", &builtin_potential, py::arg("name"), py::arg("order"));
    m.def("corpus_names", &corpus_names);
    m.def("parse_potential", [](const std::string& arg, unsigned d) { return parse_potential(arg, d).series; },
        py::arg("arg"), py::arg("order"));
    m.def("parse_potential_text", [](const std::string& text, unsigned d) { return parse_potential_text(text, d).series; },
        py::arg("text"), py::arg("order"));
    m.def("from_terms", &from_terms, py::arg("n"), py::arg("order"), py::arg("terms"));
    m.def("is_kahler_at_origin", &is_kahler_at_origin);

    m.def("calabi_matrix", [](const HermitianSeries& phi, unsigned d) {
        return matrix(calabi_matrix(diastasis_normalize(phi), d).entries);
    }, py::arg("phi"), py::arg("order"));
    m.def("inducibility", [](const HermitianSeries& phi, unsigned d) { return verdict(inducibility(phi, d)); },
        py::arg("phi"), py::arg("order"));
    m.def("find_inducing_multiple", [](const HermitianSeries& phi, unsigned max_k, unsigned d) -> py::object {
        const auto r = find_inducing_multiple(phi, max_k, d);
        return r.k ? py::cast(*r.k) : py::none();
    }, py::arg("phi"), py::arg("max_k"), py::arg("order"));

    m.def("cone_inducibility", [](const HermitianSeries& psi, const py::object& c, unsigned K, unsigned d) {
        return verdict(cone_inducibility(ConePotential(rational(c), psi), K, d));
    }, py::arg("psi"), py::arg("c"), py::arg("K"), py::arg("order"));
    m.def("epsilon_submatrix", [](const HermitianSeries& psi, const py::object& c, const py::object& eps, unsigned d) {
        return matrix(epsilon_submatrix(ConePotential(rational(c), psi), rational(eps), d).v);
    }, py::arg("psi"), py::arg("c"), py::arg("epsilon"), py::arg("order"));
    m.def("flatness_witness", [](const HermitianSeries& psi, const py::object& c, unsigned d) {
        return flatness_witness(ConePotential(rational(c), psi), d).flat;
    }, py::arg("psi"), py::arg("c"), py::arg("order"));

    m.def("einstein_constant", [](const HermitianSeries& phi, unsigned d) -> py::object {
        const auto r = ricci_report(phi, d);
        return r.lambda ? fraction(*r.lambda) : py::none();
    }, py::arg("phi"), py::arg("order"), "lambda with ricci_potential = lambda * phi, or None.");
    m.def("ricci_flat", [](const HermitianSeries& phi, unsigned d) { return ricci_flat_check(phi, d).flat; },
        py::arg("phi"), py::arg("order"));
    m.def("cone_ricci_flat", [](const HermitianSeries& psi, const py::object& c, unsigned d) {
        return ricci_flat_check(ConePotential(rational(c), psi), d).flat;
    }, py::arg("psi"), py::arg("c"), py::arg("order"));
    m.def("sasaki_einstein_bridge", [](const HermitianSeries& psi, const py::object& a, unsigned d) {
        const auto b = sasaki_einstein_bridge(psi, rational(a), d);
        py::dict out;
        out["c"] = fraction(b.c);
        out["lambda_base"] = b.lambda_base ? fraction(*b.lambda_base) : py::none();
        out["base_is_ke_2n2"] = b.base_is_ke_2n2;
        out["cone_ricci_flat"] = b.cone_ricci_flat;
        out["consistent"] = b.consistent;
        return out;
    }, py::arg("psi"), py::arg("a"), py::arg("order"));

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli_dispatch(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Runs one CLI subcommand; returns (exit_code, stdout, stderr).");
    m.def("acceptance", [](int id) {
        const auto r = acceptance::run(id);
        py::dict out;
        out["id"] = r.id;
        out["title"] = r.title;
        out["passed"] = r.passed;
        out["detail"] = r.detail;
        return out;
    }, py::arg("criterion"));
    m.def("acceptance_count", &acceptance::count);
}

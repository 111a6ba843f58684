#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "pscurve/arclength.hpp"
#include "pscurve/equivalence.hpp"
#include "pscurve/error.hpp"
#include "pscurve/invariants.hpp"
#include "pscurve/path.hpp"

namespace py = pybind11;
using namespace pscurve;

namespace {

GroupTag make_group(const std::string& family, int n, std::optional<int> p, const std::string& field) {
    return GroupTag{parse_family(family), Signature(n, p.value_or(n)), parse_field(field)};
}

py::dict regularity_dict(const RegularityReport& r) {
    py::dict d;
    d["pass"] = r.pass;
    d["failing"] = r.failing;
    d["min_abs_det"] = r.min_abs_det;
    d["max_abs_det"] = r.max_abs_det;
    d["notes"] = r.notes;
    return d;
}

py::dict nondegeneracy_dict(const NondegeneracyReport& r) {
    py::dict d;
    d["pass"] = r.pass;
    d["failing"] = r.failing;
    d["sign_changes"] = r.sign_changes;
    d["min_abs"] = r.min_abs;
    d["max_abs"] = r.max_abs;
    d["notes"] = r.notes;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Invariants and equivalence of paths in pseudo-Euclidean space";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<SignatureError>(m, "SignatureError", base.ptr());
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<OverflowError>(m, "OverflowError", domain.ptr());
    py::register_exception<StrongRegularityError>(m, "StrongRegularityError", base.ptr());
    py::register_exception<QuadratureError>(m, "QuadratureError", base.ptr());
    py::register_exception<IndeterminateTailError>(m, "IndeterminateTailError", base.ptr());
    py::register_exception<BracketError>(m, "BracketError", base.ptr());

    py::enum_<Field>(m, "Field").value("REAL", Field::Real).value("COMPLEX", Field::Complex);
    py::enum_<Family>(m, "Family")
        .value("O", Family::O)
        .value("SO", Family::SO)
        .value("EO", Family::EO)
        .value("ESO", Family::ESO);
    py::enum_<PathType>(m, "PathType")
        .value("L1", PathType::L1)
        .value("L2", PathType::L2)
        .value("L3", PathType::L3)
        .value("L4", PathType::L4);

    py::class_<Signature>(m, "Signature")
        .def(py::init<int, int>(), py::arg("n"), py::arg("p"))
        .def_property_readonly("n", &Signature::n)
        .def_property_readonly("p", &Signature::p)
        .def_property_readonly("euclidean", &Signature::euclidean)
        .def("__eq__", [](const Signature& a, const Signature& b) { return a == b; })
        .def("__repr__", [](const Signature& s) {
            return "Signature(" + std::to_string(s.n()) + ", " + std::to_string(s.p()) + ")";
        });

    py::class_<GroupTag>(m, "Group")
        .def(py::init(&make_group), py::arg("family"), py::arg("n"), py::arg("p") = std::nullopt,
             py::arg("field") = "real")
        .def_readonly("family", &GroupTag::family)
        .def_readonly("sig", &GroupTag::sig)
        .def_readonly("field", &GroupTag::field)
        .def_property_readonly("name", &GroupTag::name)
        .def("__repr__", [](const GroupTag& g) { return g.name(); });

    m.def("e_p_matrix", &e_p_matrix, py::arg("sig"));
    m.def("h_matrix", [](const Signature& sig) { return h_matrix(sig, Field::Complex); }, py::arg("sig"));
    m.def("euclidean_form", &euclidean_form, py::arg("x"), py::arg("y"));
    m.def("pseudo_form", &pseudo_form, py::arg("x"), py::arg("y"), py::arg("sig"));
    m.def("determinant", &determinant, py::arg("m"));
    m.def("membership_defect", &membership_defect, py::arg("g"), py::arg("group"));

    py::class_<Interval>(m, "Interval")
        .def(py::init(&Interval::make), py::arg("a"), py::arg("b"))
        .def_readonly("a", &Interval::a)
        .def_readonly("b", &Interval::b)
        .def("__contains__", &Interval::contains)
        .def("__repr__", [](const Interval& iv) { return to_string(iv); });

    py::class_<PathDef>(m, "Path")
        .def_property_readonly("sig", &PathDef::sig)
        .def_property_readonly("field", &PathDef::field)
        .def_property_readonly("dim", &PathDef::dim)
        .def_property_readonly("interval", &PathDef::interval)
        .def_property_readonly("label", &PathDef::label)
        .def_property_readonly("components",
                               [](const PathDef& p) {
                                   std::vector<std::string> out;
                                   for (const Expr& e : p.components()) {
                                       out.push_back(e.to_string());
                                   }
                                   return out;
                               })
        .def("derivative_path", &PathDef::derivative_path)
        .def("__call__", [](const PathDef& p, double t) { return eval_point(p, t); }, py::arg("t"))
        .def("jet",
             [](const PathDef& p, double t, int order) { return eval_jet(p, t, order).rows; },
             py::arg("t"), py::arg("order"))
        .def("__str__", &print_path);

    m.def("parse_path", [](const std::string& text) { return parse_path(text); }, py::arg("text"));
    m.def("load_path", [](const std::string& file) {
        py::object open = py::module_::import("builtins").attr("open");
        py::object f = open(file, "r");
        const std::string text = f.attr("read")().cast<std::string>();
        f.attr("close")();
        return parse_path(text);
    }, py::arg("file"));
    m.def("sample_grid", &sample_grid, py::arg("interval"), py::arg("count"), py::arg("margin") = 0.05);
    m.def("default_grid", &default_grid, py::arg("interval"), py::arg("count") = 33);

    m.def(
        "generator_signature",
        [](const PathDef& p, const GroupTag& g, double t) { return generator_signature(p, g, t).values; },
        py::arg("path"), py::arg("group"), py::arg("t"));
    m.def("signature_labels", &signature_labels, py::arg("group"));
    m.def(
        "frame_matrix", [](const PathDef& p, double t) { return frame_matrix(eval_jet(p, t, p.dim() - 1)); },
        py::arg("path"), py::arg("t"));
    m.def(
        "frenet_matrix", [](const PathDef& p, double t) { return frenet_matrix(eval_jet(p, t, p.dim())); },
        py::arg("path"), py::arg("t"));
    m.def(
        "is_strongly_regular",
        [](const PathDef& p, const std::vector<double>& grid, std::optional<double> tol) {
            return regularity_dict(is_strongly_regular(p, grid, tol));
        },
        py::arg("path"), py::arg("grid"), py::arg("tol") = std::nullopt);

    py::class_<GroupElement>(m, "GroupElement")
        .def(py::init([](Matrix g, std::optional<Vector> u) { return GroupElement{std::move(g), std::move(u)}; }),
             py::arg("g"), py::arg("u") = std::nullopt)
        .def_readonly("g", &GroupElement::g)
        .def_readonly("u", &GroupElement::u)
        .def("act", &GroupElement::act, py::arg("x"))
        .def("inverse", [](const GroupElement& h) { return inverse(h); })
        .def("__mul__", [](const GroupElement& a, const GroupElement& b) { return compose(a, b); });

    m.def("sample_group_element", &sample_group_element, py::arg("group"), py::arg("seed"),
          py::arg("scale") = 1.0);
    m.def("apply", &apply, py::arg("h"), py::arg("path"));
    m.def("recover_linear", &recover_linear, py::arg("x"), py::arg("y"), py::arg("t0"));

    py::class_<Failure>(m, "Failure")
        .def_readonly("t", &Failure::t)
        .def_readonly("identity", &Failure::identity)
        .def_readonly("defect", &Failure::defect);

    py::class_<EquivalenceVerdict>(m, "Verdict")
        .def_readonly("equivalent", &EquivalenceVerdict::equivalent)
        .def_readonly("witness", &EquivalenceVerdict::witness)
        .def_readonly("max_defect", &EquivalenceVerdict::max_defect)
        .def_readonly("failures", &EquivalenceVerdict::failures)
        .def_readonly("identities_hold", &EquivalenceVerdict::identities_hold)
        .def_readonly("witness_valid", &EquivalenceVerdict::witness_valid)
        .def("__bool__", [](const EquivalenceVerdict& v) { return v.equivalent; });

    m.def(
        "paths_equivalent",
        [](const PathDef& x, const PathDef& y, const GroupTag& g, std::optional<std::vector<double>> grid,
           double tol) { return paths_equivalent(x, y, g, grid ? *grid : default_grid(x.interval()), tol); },
        py::arg("x"), py::arg("y"), py::arg("group"), py::arg("grid") = std::nullopt, py::arg("tol") = 1e-8);

    py::class_<TypedInterval>(m, "TypedInterval")
        .def_readonly("type", &TypedInterval::ptype)
        .def_readonly("A", &TypedInterval::a_inv)
        .def_readonly("B", &TypedInterval::b_inv)
        .def_readonly("a_I", &TypedInterval::a_I);

    m.def("speed", py::overload_cast<const PathDef&, double>(&speed), py::arg("path"), py::arg("t"));
    m.def(
        "is_nondegenerate",
        [](const PathDef& p, const std::vector<double>& grid, double floor) {
            return nondegeneracy_dict(is_nondegenerate(p, grid, floor));
        },
        py::arg("path"), py::arg("grid"), py::arg("floor") = 1e-12);
    m.def("arc_integral", &arc_integral, py::arg("path"), py::arg("c"), py::arg("d"), py::arg("tol") = 1e-10);
    m.def(
        "classify_type",
        [](const PathDef& p, double qtol, std::optional<double> a_I) {
            ArcOptions o;
            o.qtol = qtol;
            o.a_I = a_I;
            return classify_type(p, o);
        },
        py::arg("path"), py::arg("qtol") = 1e-10, py::arg("a_I") = std::nullopt);
    m.def("arc_param", &arc_param, py::arg("path"), py::arg("typed"), py::arg("t"), py::arg("tol") = 1e-12);
    m.def("invert_param", &invert_param, py::arg("path"), py::arg("typed"), py::arg("s"), py::arg("tol") = 1e-12);
    m.def(
        "reparam_jet",
        [](const PathDef& p, const TypedInterval& typed, double s, int order) {
            return reparam_jet(p, typed, s, order).rows;
        },
        py::arg("path"), py::arg("typed"), py::arg("s"), py::arg("order"));

    py::class_<MonotoneReparam>(m, "MonotoneReparam")
        .def_property_readonly("phi", [](const MonotoneReparam& r) { return r.phi.to_string(); })
        .def_readonly("domain", &MonotoneReparam::domain)
        .def("__call__", [](const MonotoneReparam& r, double t) { return r.phi.eval_real(t); }, py::arg("r"));
    m.def("random_reparam", &random_reparam, py::arg("target"), py::arg("seed"));
    m.def("compose", py::overload_cast<const PathDef&, const MonotoneReparam&>(&compose), py::arg("path"),
          py::arg("phi"));

    py::class_<CurveVerdict, EquivalenceVerdict>(m, "CurveVerdict")
        .def_readonly("type_x", &CurveVerdict::type_x)
        .def_readonly("type_y", &CurveVerdict::type_y)
        .def_readonly("typed_x", &CurveVerdict::typed_x)
        .def_readonly("typed_y", &CurveVerdict::typed_y)
        .def_readonly("s0", &CurveVerdict::s0);
    m.def(
        "curves_equivalent",
        [](const PathDef& x, const PathDef& y, const GroupTag& g, double tol, double qtol, int grid) {
            CurveOptions o;
            o.tol = tol;
            o.arc.qtol = qtol;
            o.grid = grid;
            return curves_equivalent(x, y, g, o);
        },
        py::arg("x"), py::arg("y"), py::arg("group"), py::arg("tol") = 1e-8, py::arg("qtol") = 1e-10,
        py::arg("grid") = 33);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command line in-process; returns (exit code, stdout, stderr).");
}

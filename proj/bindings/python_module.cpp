#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <memory>

#include "ainfty/conditions.hpp"
#include "ainfty/families.hpp"
#include "ainfty/io.hpp"
#include "ainfty/relations.hpp"

namespace py = pybind11;
using namespace ainfty;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

ConditionId condition_from(const std::string& name) {
    const auto id = parse_condition(name);
    if (!id) throw std::invalid_argument("unknown condition '" + name + "'");
    return *id;
}

SubsetStrategy strategy_from(const std::string& name) {
    const auto s = parse_strategy(name);
    if (!s) throw std::invalid_argument("unknown strategy '" + name + "'");
    return *s;
}

ConditionParams params_from(const py::dict& kwargs) {
    ConditionParams params;
    for (const auto& [key_obj, value] : kwargs) {
        const auto key = key_obj.cast<std::string>();
        if (key == "s_grid") {
            std::vector<Rational> grid;
            for (const auto& item : value.cast<py::sequence>())
                grid.push_back(Rational::from_string(item.cast<std::string>()));
            params.s_grid = std::move(grid);
            continue;
        }
        const Rational r = Rational::from_string(value.cast<std::string>());
        if (key == "p") params.p = r;
        else if (key == "q") params.q = r;
        else if (key == "delta") params.delta = r;
        else if (key == "alpha") params.alpha = r;
        else if (key == "beta") params.beta = r;
        else throw std::invalid_argument("unknown parameter '" + key + "'");
    }
    return params;
}

} // namespace

PYBIND11_MODULE(ainfty, m) {
    m.doc() = "Tightest-constant calculator for the twelve A-infinity weight conditions "
              "over general bases on finite discrete measure spaces. Exact rationals are "
              "passed as 'p/q' strings.";

    py::class_<Instance, std::shared_ptr<Instance>>(m, "Instance")
        .def_property_readonly("atom_count", &Instance::atom_count)
        .def_property_readonly("base_count", &Instance::base_count)
        .def("atom_id", [](const Instance& i, std::int32_t a) { return i.atom_id(a); })
        .def("atom_index", [](const Instance& i, const std::string& id) { return i.atom_index(id); })
        .def("measure", [](const Instance& i, std::int32_t a) { return i.measure(a).str(); })
        .def("weight", [](const Instance& i, std::int32_t a) { return i.weight(a).str(); })
        .def("base_name", [](const Instance& i, std::int32_t b) { return i.base_name(b); })
        .def("base_atoms",
             [](const Instance& i, std::int32_t b) {
                 const auto atoms = i.base_atoms(b);
                 return std::vector<std::int32_t>(atoms.begin(), atoms.end());
             })
        .def("base_measure", [](const Instance& i, std::int32_t b) { return i.base_measure(b).str(); })
        .def("base_weight", [](const Instance& i, std::int32_t b) { return i.base_weight(b).str(); })
        .def("average", [](const Instance& i, std::int32_t b) { return average(i, b).str(); })
        .def("median", [](const Instance& i, std::int32_t b) { return median(i, b).str(); })
        .def("scaled", [](const Instance& i, const std::string& cw, const std::string& cm) {
            return std::make_shared<Instance>(
                i.scaled(Rational::from_string(cw), Rational::from_string(cm)));
        });

    m.def("parse_instance", [](const std::string& text) {
        return std::make_shared<Instance>(parse_instance(text));
    });
    m.def("serialize_instance",
          [](const Instance& inst) { return serialize_instance(inst); });

    m.def(
        "make_family",
        [](const std::string& name, long level, bool cumulative) {
            return std::make_shared<Instance>(make_family({name, level, cumulative}));
        },
        py::arg("name"), py::arg("level"), py::arg("cumulative") = false);

    m.def(
        "integral",
        [](const Instance& inst, const std::vector<std::string>& ids) {
            return integral_ids(inst, ids).str();
        },
        py::arg("instance"), py::arg("atom_ids"));

    m.def(
        "maximal_function",
        [](const Instance& inst, const std::vector<std::string>& values, std::int32_t atom) {
            std::vector<Rational> f;
            f.reserve(values.size());
            for (const std::string& v : values) f.push_back(Rational::from_string(v));
            return maximal_function(inst, f, atom).str();
        },
        py::arg("instance"), py::arg("values"), py::arg("atom"));

    m.def(
        "evaluate",
        [](const Instance& inst, const std::string& condition, const py::dict& params,
           const std::string& strategy) {
            const ConstantReport report = evaluate(inst, condition_from(condition),
                                                   params_from(params),
                                                   strategy_from(strategy));
            return json_to_py(report_to_json(inst, report));
        },
        py::arg("instance"), py::arg("condition"), py::arg("params") = py::dict(),
        py::arg("strategy") = "auto");

    m.def(
        "lift",
        [](const Instance& inst) { return json_to_py(lifted_to_json(lift(inst))); },
        py::arg("instance"));
    m.def(
        "lift_instance",
        [](const Instance& inst) {
            return std::make_shared<Instance>(lifted_to_instance(lift(inst)));
        },
        py::arg("instance"),
        "Half-line representation read back as an atomic instance");

    m.def(
        "tau_layout",
        [](const Instance& inst, const std::vector<std::string>& order) {
            const auto layout =
                order.empty() ? [&] {
                    std::vector<std::int32_t> idx(inst.atom_count());
                    for (std::size_t i = 0; i < idx.size(); ++i)
                        idx[i] = static_cast<std::int32_t>(i);
                    return tau_layout(inst, idx);
                }()
                              : tau_layout_ids(inst, order);
            std::vector<std::tuple<std::string, std::string, std::string>> rows;
            rows.reserve(layout.size());
            for (const IntervalLayout& seg : layout)
                rows.emplace_back(inst.atom_id(seg.atom), seg.left.str(), seg.right.str());
            return rows;
        },
        py::arg("instance"), py::arg("order") = std::vector<std::string>{});

    m.def(
        "family_profile",
        [](const std::string& condition, const py::dict& params, const std::string& family,
           const std::vector<long>& levels, bool cumulative, const std::string& strategy) {
            const ConditionId id = condition_from(condition);
            const ConditionParams cp = params_from(params);
            const FamilyProfile profile = family_profile(id, cp, family, levels, cumulative,
                                                         strategy_from(strategy));
            return json_to_py(profile_to_json(family, id, cp, cumulative, profile));
        },
        py::arg("condition"), py::arg("params"), py::arg("family"), py::arg("levels"),
        py::arg("cumulative") = false, py::arg("strategy") = "auto");

    m.def(
        "classify_growth",
        [](const std::vector<std::pair<long, double>>& points) {
            std::vector<ProfilePoint> pts;
            pts.reserve(points.size());
            for (const auto& [n, v] : points)
                pts.push_back({n, std::isinf(v) ? ExtendedValue::infinity(Backend::Floating)
                                                : ExtendedValue::floating(v)});
            nlohmann::ordered_json j;
            const GrowthVerdict verdict = classify_growth(pts);
            j["kind"] = to_string(verdict.kind);
            if (verdict.rate)
                j["rate"] = {{"form", to_string(verdict.rate->form)},
                             {"value", verdict.rate->value}};
            j["residual"] = verdict.residual;
            return json_to_py(j);
        },
        py::arg("points"));

    m.def(
        "check_table",
        [](long lemma1_max, long lemma2_max, long lemma3_max) {
            CheckTableOptions opts;
            opts.lemma1_max = lemma1_max;
            opts.lemma2_max = lemma2_max;
            opts.lemma3_max = lemma3_max;
            return json_to_py(check_table_to_json(check_table(opts)));
        },
        py::arg("lemma1_max") = 1024, py::arg("lemma2_max") = 8, py::arg("lemma3_max") = 10);

    m.def("conditions", [] {
        std::vector<std::string> names;
        for (const ConditionId id : all_conditions()) names.emplace_back(to_string(id));
        return names;
    });
    m.def("family_names", &family_names);

    // Base first: translators run newest-first, so the derived ones win.
    py::register_exception<Error>(m, "AinftyError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "DocumentParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "InstanceValidationError", PyExc_ValueError);
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "incmatch/gadgets.hpp"
#include "incmatch/io.hpp"
#include "incmatch/oracle.hpp"
#include "incmatch/routing.hpp"

namespace py = pybind11;
using namespace incmatch;

namespace {

using NamedPairs = std::vector<std::pair<std::string, std::string>>;

AgentId agent_id(const Instance& inst, const std::string& name) {
    auto it = std::find(inst.names.begin(), inst.names.end(), name);
    if (it == inst.names.end()) throw std::invalid_argument("unknown agent '" + name + "'");
    return static_cast<AgentId>(it - inst.names.begin());
}

std::vector<Pair> to_pairs(const Instance& inst, const NamedPairs& named) {
    std::vector<Pair> out;
    for (const auto& [a, b] : named) out.push_back(make_pair_sorted(agent_id(inst, a), agent_id(inst, b)));
    return out;
}

Matching to_matching(const Instance& inst, const NamedPairs& named) {
    Matching m(inst.size());
    for (auto [a, b] : to_pairs(inst, named)) {
        if (m.matched(a) || m.matched(b)) throw std::invalid_argument("agent matched twice");
        m.add(a, b);
    }
    return m;
}

py::dict solve_py(const Instance& inst, const std::string& algorithm, const std::vector<std::string>& outliers,
                  std::optional<long> limit) {
    SolveRequest req{algorithm, {}, limit};
    for (const auto& name : outliers) req.outliers.push_back(agent_id(inst, name));
    SolveResult r = solve(inst, req);
    py::dict d;
    d["algorithm"] = r.algorithm;
    d["feasible"] = feasible_within_budget(inst, r.outcome);
    if (r.outcome) {
        d["matching"] = named_pairs(r.outcome->matching, inst.names);
        d["symmetric_difference"] = r.outcome->diff;
    } else {
        d["matching"] = py::none();
        d["symmetric_difference"] = py::none();
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_incmatch, m) {
    m.doc() = "incremental stable matching";

    py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);

    py::class_<Instance>(m, "Instance")
        .def_property_readonly("agents", [](const Instance& i) { return i.names; })
        .def_property_readonly("k", [](const Instance& i) { return i.k; })
        .def_property_readonly("m1", [](const Instance& i) { return named_pairs(i.m1, i.names); })
        .def_property_readonly("swap_distance", [](const Instance& i) { return swap_distance(i.p1, i.p2); })
        .def("__len__", &Instance::size)
        .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; })
        .def("__str__", &serialize_instance);

    m.def("parse_instance", &parse_instance, py::arg("text"));
    m.def("serialize_instance", &serialize_instance, py::arg("instance"));
    m.def("algorithms", &algorithm_names);
    m.def("route", [](const Instance& i, std::optional<long> limit) { return route(i, limit); }, py::arg("instance"),
          py::arg("limit") = py::none());
    m.def("solve", &solve_py, py::arg("instance"), py::arg("algorithm") = "auto",
          py::arg("outliers") = std::vector<std::string>{}, py::arg("limit") = py::none());
    m.def(
        "enumerate_stable",
        [](const Instance& i, std::optional<int> limit) {
            OracleOptions opt;
            if (limit) opt.max_agents = *limit;
            std::vector<NamedPairs> out;
            for (const auto& mm : enumerate_stable(i.p2, opt)) out.push_back(named_pairs(mm, i.names));
            return out;
        },
        py::arg("instance"), py::arg("limit") = py::none());
    m.def(
        "is_stable", [](const Instance& i, const NamedPairs& pairs) { return is_stable(i.p2, to_matching(i, pairs)); },
        py::arg("instance"), py::arg("matching"));
    m.def(
        "symmetric_difference",
        [](const Instance& i, const NamedPairs& pairs) { return diff_count(i.m1, to_matching(i, pairs)); },
        py::arg("instance"), py::arg("matching"));
    m.def(
        "gen_isr_from_clique", [](const std::string& graph) { return gen_isr_from_clique(parse_graph(graph)).inst; },
        py::arg("graph_text"));
    m.def(
        "apply_forced_pair_gadget", [](const Instance& i) { return apply_forced_pair_gadget(i).inst; },
        py::arg("instance"));
    m.def(
        "apply_forbidden_pairs_gadget",
        [](const Instance& i, const NamedPairs& pairs) { return apply_forbidden_pairs_gadget(i, to_pairs(i, pairs)).inst; },
        py::arg("instance"), py::arg("forbidden"));
}

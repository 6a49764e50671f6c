#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qosheft/errors.hpp"
#include "qosheft/generator.hpp"
#include "qosheft/io.hpp"
#include "qosheft/metrics.hpp"
#include "qosheft/oracle.hpp"
#include "qosheft/periodic.hpp"

namespace py = pybind11;
using namespace qosheft;

// Structured values cross the boundary as JSON text in the documented schema;
// the Python package wraps them with json.loads / json.dumps.

namespace {

std::vector<DagSpec> parse_dags(std::vector<std::string> const & texts) {
    std::vector<DagSpec> dags;
    for (auto const & t : texts) dags.push_back(io::dag_from_json(io::parse_json(t, "<dag>")));
    return dags;
}

Platform parse_platform(std::string const & text) { return io::platform_from_json(io::parse_json(text, "<platform>")); }

std::string schedule(std::vector<std::string> const & dags, std::string const & platform, int repetition_factor,
                     bool enhance) {
    auto const hs = schedule_periodic(parse_dags(dags), parse_platform(platform),
                                      PeriodicOptions{repetition_factor, enhance});
    return io::to_json(hs).dump();
}

py::list verify(std::string const & schedule, std::vector<std::string> const & dags, std::string const & platform) {
    auto const hs = io::schedule_from_json(io::parse_json(schedule, "<schedule>"));
    py::list out;
    for (auto const & v : verify_schedule(hs, parse_dags(dags), parse_platform(platform))) {
        out.append(py::make_tuple(std::string(to_string(v.kind)), v.location, v.detail));
    }
    return out;
}

py::dict reward(std::string const & schedule, std::vector<std::string> const & dags) {
    auto const hs = io::schedule_from_json(io::parse_json(schedule, "<schedule>"));
    auto const r = normalized_reward(hs, parse_dags(dags));
    py::dict d;
    d["r_act"] = to_string(r.r_act);
    d["r_max"] = to_string(r.r_max);
    d["nr_percent"] = to_double(r.nr_percent);
    d["nullified_instances"] = r.nullified_instances;
    return d;
}

std::string generate_dag_json(std::size_t n_tasks, std::uint64_t seed, double edge_density, int n_levels,
                              std::size_t n_vms, std::string const & period_slack, Tick period_quantum) {
    GenParams p;
    p.n_tasks = n_tasks;
    p.seed = seed;
    p.edge_density = edge_density;
    p.n_levels = n_levels;
    p.n_vms = n_vms;
    p.period_slack = parse_rational(period_slack);
    p.period_quantum = period_quantum;
    return io::to_json(generate_dag(p)).dump();
}

std::string generate_platform_json(std::size_t n_vms, std::string const & occupancy, std::uint64_t seed,
                                   Tick background_period, Tick min_slot) {
    OccupancyParams p;
    p.n_vms = n_vms;
    p.occupancy_fraction = parse_rational(occupancy);
    p.seed = seed;
    p.background_period = background_period;
    p.min_slot = min_slot;
    return io::to_json(generate_preoccupation(p)).dump();
}

std::string apply_ccr_json(std::string const & dag, std::string const & ccr, std::string const & platform) {
    auto const d = io::dag_from_json(io::parse_json(dag, "<dag>"));
    return io::to_json(apply_ccr(d, parse_rational(ccr), parse_platform(platform))).dump();
}

py::dict optimal(std::string const & dag, std::string const & platform, Tick start, Tick end) {
    auto const d = io::dag_from_json(io::parse_json(dag, "<dag>"));
    auto const r = brute_force_optimal(d, parse_platform(platform), CycleWindow{start, end});
    py::dict out;
    out["feasible"] = r.feasible;
    out["reward"] = to_string(r.reward);
    py::list entries;
    for (auto const & e : r.witness) {
        entries.append(py::make_tuple(e.instance.source_task, e.vm_id, e.level, e.start, e.finish));
    }
    out["witness"] = entries;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Periodic DAG scheduling with quality versions on pre-occupied VMs";

    py::register_exception<Error>(m, "QosheftError", PyExc_ValueError);

    m.def("hyperperiod", [](std::vector<Tick> const & periods) { return hyperperiod(periods); }, py::arg("periods"));
    m.def("schedule", &schedule, py::arg("dags"), py::arg("platform"), py::arg("repetition_factor") = 1,
          py::arg("enhance") = true, "Schedule DAG JSON texts on a platform; returns schedule JSON text.");
    m.def("verify", &verify, py::arg("schedule"), py::arg("dags"), py::arg("platform"),
          "List of (kind, location, detail) violations; empty when the schedule is valid.");
    m.def("normalized_reward", &reward, py::arg("schedule"), py::arg("dags"));
    m.def("generate_dag", &generate_dag_json, py::arg("n_tasks"), py::arg("seed"), py::arg("edge_density") = 0.3,
          py::arg("n_levels") = 2, py::arg("n_vms") = 4, py::arg("period_slack") = "3/2",
          py::arg("period_quantum") = 1);
    m.def("generate_platform", &generate_platform_json, py::arg("n_vms"), py::arg("occupancy"), py::arg("seed"),
          py::arg("background_period") = 20, py::arg("min_slot") = 2);
    m.def("apply_ccr", &apply_ccr_json, py::arg("dag"), py::arg("ccr"), py::arg("platform"));
    m.def("brute_force_optimal", &optimal, py::arg("dag"), py::arg("platform"), py::arg("start"), py::arg("end"));
}

#include "flowsched/dp_poly.hpp"
#include "flowsched/dp_pseudo.hpp"
#include "flowsched/edf.hpp"
#include "flowsched/gen.hpp"
#include "flowsched/io.hpp"
#include "flowsched/lawler_moore.hpp"
#include "flowsched/oracle.hpp"
#include "flowsched/qptas.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace flowsched;

namespace {

/// Common result of every solver as seen from Python.
struct Solution {
    Schedule schedule;
    Cost objective;
    std::size_t cells = 0;
    py::dict extra;
};

py::object fraction(const Rational& value)
{
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    return cls(py::int_(py::str(boost::multiprecision::numerator(value).str())),
               py::int_(py::str(boost::multiprecision::denominator(value).str())));
}

/// Fraction when exact, float otherwise.
py::object cost_value(const Cost& cost)
{
    if (cost.exact())
        return fraction(cost.rational());
    return py::float_(static_cast<double>(cost.real()));
}

Rational rational_arg(const py::object& value)
{
    return parse_rational(py::str(value).cast<std::string>());
}

CostModel model_arg(const py::object& p, const py::object& epsilon)
{
    return CostModel(Exponent::parse(py::str(p).cast<std::string>()), rational_arg(epsilon));
}

std::vector<std::int64_t> deadlines_arg(const std::vector<std::optional<std::int64_t>>& d)
{
    std::vector<std::int64_t> out;
    for (const auto& x : d)
        out.push_back(x ? *x : kInfinity);
    return out;
}

Instance make_instance(const std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>& jobs,
                       const std::optional<std::vector<std::vector<std::optional<std::int64_t>>>>& machines)
{
    std::vector<Job> list;
    for (const auto& [p, r, w] : jobs)
        list.push_back({-1, p, r, w});
    if (!machines)
        return Instance(std::move(list));
    MachineMatrix matrix;
    for (const auto& row : *machines)
        matrix.push_back(deadlines_arg(row));
    return Instance(std::move(list), std::move(matrix));
}

Solution finish(const Instance& instance, Schedule schedule, const CostModel& model, std::size_t cells)
{
    Solution s;
    s.objective = objective(instance, schedule, model);
    s.schedule = std::move(schedule);
    s.cells = cells;
    return s;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Preemptive weighted flow-time scheduling: approximation algorithms and an exact oracle.";

    py::register_exception<ResourceLimitExceeded>(m, "ResourceLimitExceeded", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    py::class_<Instance>(m, "Instance")
        .def(py::init(&make_instance), py::arg("jobs"), py::arg("machines") = py::none(),
             "jobs: list of (p, r, w); machines: optional [machine][job] processing times, None for INF")
        .def_static("from_json", [](const std::string& text) { return read_instance(text); })
        .def("to_json", &write_instance)
        .def("__len__", &Instance::size)
        .def_property_readonly("machine_count", &Instance::machine_count)
        .def_property_readonly("horizon", &Instance::horizon)
        .def_property_readonly("jobs", [](const Instance& inst) {
            std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> jobs(inst.size());
            for (const Job& job : inst.jobs())
                jobs[static_cast<std::size_t>(job.id)] = {job.p, job.r, job.w};
            return jobs;
        })
        .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; });

    py::class_<Schedule>(m, "Schedule")
        .def_static("from_json", [](const std::string& text) { return read_schedule(text); })
        .def("to_json", [](const Schedule& s) { return write_schedule(s.normalized()); })
        .def_property_readonly("slots", [](const Schedule& s) {
            py::list out;
            for (const Slot& slot : s.slots)
                out.append(py::make_tuple(slot.machine, slot.job, fraction(Rational(slot.start, s.time_scale)),
                                          fraction(Rational(slot.end, s.time_scale))));
            return out;
        }, "list of (machine, job, start, end)")
        .def("completion_times", [](const Schedule& s, std::size_t jobs) {
            py::list out;
            for (const Rational& c : s.completion_times(jobs))
                out.append(fraction(c));
            return out;
        });

    py::class_<Solution>(m, "Solution")
        .def_readonly("schedule", &Solution::schedule)
        .def_property_readonly("objective", [](const Solution& s) { return cost_value(s.objective); })
        .def_property_readonly("objective_text", [](const Solution& s) { return s.objective.str(); })
        .def_readonly("cells", &Solution::cells)
        .def_readonly("extra", &Solution::extra);

    m.def("validate", [](const Instance& inst, const Schedule& s) -> std::optional<std::string> {
        const ValidationReport report = validate_schedule(inst, s);
        if (report.ok())
            return std::nullopt;
        return report.violation->describe();
    }, py::arg("instance"), py::arg("schedule"), "None if valid, else a description of the first violation");

    m.def("objective", [](const Instance& inst, const Schedule& s, const py::object& p) {
        return cost_value(objective(inst, s, model_arg(p, py::int_(1))));
    }, py::arg("instance"), py::arg("schedule"), py::arg("p") = 1);

    m.def("edf_schedule", [](const Instance& inst, const std::vector<std::optional<std::int64_t>>& d) {
        const EdfResult r = edf_schedule(inst, DeadlineAssignment{deadlines_arg(d)});
        return py::make_tuple(r.schedule, r.met_all_deadlines);
    }, py::arg("instance"), py::arg("deadlines"), "EDF schedule and whether every deadline is met; None = INF");

    m.def("density_feasible", [](const Instance& inst, const std::vector<std::optional<std::int64_t>>& d) {
        return density_feasible(inst, DeadlineAssignment{deadlines_arg(d)});
    }, py::arg("instance"), py::arg("deadlines"));

    m.def("lawler_moore", [](const std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>& jobs,
                             std::int64_t deadline, std::int64_t start) {
        LmProblem problem;
        problem.deadline = deadline;
        for (const auto& [p, r, c] : jobs)
            problem.jobs.push_back({p, r, c});
        const LmSolution sol = lawler_moore(problem, start);
        return py::make_tuple(sol.on_time, sol.penalty, sol.start);
    }, py::arg("jobs"), py::arg("deadline"), py::arg("start") = 0,
       "jobs: list of (p, r, penalty); returns (on_time flags, penalty, start)");

    m.def("solve_pseudo", [](const Instance& inst, int threads) {
        PseudoResult r;
        {
            py::gil_scoped_release release;
            PseudoOptions options;
            options.threads = threads;
            r = solve_pseudo(inst, options);
        }
        Solution s = finish(inst, std::move(r.schedule), CostModel(), r.cells);
        s.extra["root_cost"] = r.root_cost;
        return s;
    }, py::arg("instance"), py::arg("threads") = 1);

    m.def("solve_poly", [](const Instance& inst, const py::object& p, const py::object& epsilon, int threads) {
        const CostModel model = model_arg(p, epsilon);
        PolyResult r;
        {
            py::gil_scoped_release release;
            PolyOptions options;
            options.threads = threads;
            r = solve_poly(inst, model, options);
        }
        Solution s = finish(inst, std::move(r.schedule), model, r.intervals);
        s.extra["root_budget"] = cost_value(r.root_budget);
        s.extra["root_budget_units"] = r.root_budget_units;
        s.extra["used_full_grid"] = r.used_full_grid;
        return s;
    }, py::arg("instance"), py::arg("p") = 1, py::arg("epsilon") = "1/2", py::arg("threads") = 1);

    m.def("solve_qptas", [](const Instance& inst, const py::object& p, const py::object& epsilon, bool migration,
                            std::optional<std::int64_t> ticks_per_unit, std::size_t state_budget) {
        const CostModel model = model_arg(p, epsilon);
        QptasResult r;
        {
            py::gil_scoped_release release;
            QptasOptions options;
            options.migration = migration;
            options.ticks_per_unit = ticks_per_unit;
            options.state_budget = state_budget;
            r = solve_qptas(inst, model, options);
        }
        Solution s = finish(inst, std::move(r.schedule), model, r.stats.cells);
        s.extra["charged_cost"] = cost_value(r.charged_cost);
        s.extra["delta"] = fraction(r.delta);
        s.extra["epsilon"] = fraction(r.epsilon);
        return s;
    }, py::arg("instance"), py::arg("p") = 1, py::arg("epsilon") = 1, py::arg("migration") = true,
       py::arg("ticks_per_unit") = py::none(), py::arg("state_budget") = 10'000'000);

    m.def("oracle", [](const Instance& inst, const py::object& p, std::int64_t grid, bool migration) {
        const CostModel model = model_arg(p, py::int_(1));
        OracleResult r;
        {
            py::gil_scoped_release release;
            r = inst.multi_machine() ? oracle_multi(inst, model, grid, migration) : oracle_single(inst, model);
        }
        return finish(inst, std::move(r.schedule), model, r.states);
    }, py::arg("instance"), py::arg("p") = 1, py::arg("grid") = 1, py::arg("migration") = true,
       "exact optimum; multi-machine instances are searched on the grid of step 1/grid");

    m.def("generate", [](int n, std::int64_t p_max, std::int64_t r_max, std::int64_t w_max, int machines,
                         int inf_percent, std::uint64_t seed) {
        GenSpec spec;
        spec.n = n;
        spec.p_max = p_max;
        spec.r_max = r_max;
        spec.w_max = w_max;
        spec.machines = machines;
        spec.inf_percent = inf_percent;
        spec.seed = seed;
        return gen_random(spec);
    }, py::arg("n") = 5, py::arg("p_max") = 4, py::arg("r_max") = 4, py::arg("w_max") = 4, py::arg("machines") = 0,
       py::arg("inf_percent") = 0, py::arg("seed") = 1);

    m.def("adversarial", [](const std::string& family, int n) {
        return gen_adversarial(parse_adversarial_kind(family), n);
    }, py::arg("family"), py::arg("n"));
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "switchgame/classify.hpp"
#include "switchgame/closedform.hpp"
#include "switchgame/hitting.hpp"
#include "switchgame/io.hpp"
#include "switchgame/model.hpp"
#include "switchgame/montecarlo.hpp"
#include "switchgame/qvi.hpp"

namespace py = pybind11;
using namespace switchgame;

namespace {

SimConfig make_config(long paths, double dt, double horizon, std::uint64_t seed,
                      bool antithetic, int threads, int substeps) {
    SimConfig cfg;
    cfg.paths = paths;
    cfg.dt = dt;
    cfg.horizon = horizon;
    cfg.seed = seed;
    cfg.antithetic = antithetic;
    cfg.threads = threads;
    cfg.substeps = substeps;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Explicit solutions, QVI verification and Monte Carlo for the "
              "two-player switching game on a geometric Brownian motion";

    py::class_<GameSpec>(m, "GameSpec")
        .def(py::init<>())
        .def_readwrite("drift", &GameSpec::drift)
        .def_readwrite("vol", &GameSpec::vol)
        .def_readwrite("discount", &GameSpec::discount)
        .def_readwrite("gamma", &GameSpec::gamma)
        .def_readwrite("c12", &GameSpec::c12)
        .def_readwrite("c21", &GameSpec::c21)
        .def_readwrite("chi12", &GameSpec::chi12)
        .def_readwrite("chi21", &GameSpec::chi21)
        .def_readwrite("x0", &GameSpec::x0)
        .def("to_json", [](const GameSpec& s) { return spec_to_json(s).dump(2); })
        .def_static("from_json", [](const std::string& text) {
            return spec_from_json(nlohmann::json::parse(text));
        });

    py::class_<RegimeDerived>(m, "RegimeDerived")
        .def_readonly("m_plus", &RegimeDerived::m_plus)
        .def_readonly("m_minus", &RegimeDerived::m_minus)
        .def_readonly("K", &RegimeDerived::K);

    py::enum_<OrderCase>(m, "OrderCase")
        .value("EQ", OrderCase::Eq)
        .value("ROW_LT", OrderCase::RowLt)
        .value("ROW_GT", OrderCase::RowGt)
        .value("COL_LT", OrderCase::ColLt)
        .value("COL_GT", OrderCase::ColGt);

    py::enum_<CostCondition>(m, "CostCondition")
        .value("B1", CostCondition::B1)
        .value("B2", CostCondition::B2)
        .value("B3", CostCondition::B3)
        .value("B4", CostCondition::B4);

    py::class_<Solution>(m, "Solution")
        .def_readonly("order", &Solution::order)
        .def_readonly("costs", &Solution::costs)
        .def("value", [](const Solution& s, int i, int j, double x) {
            return s.value[i][j](x);
        })
        .def("deriv", [](const Solution& s, int i, int j, double x) {
            return s.value[i][j].deriv(x);
        })
        .def("thresholds",
             [](const Solution& s) {
                 py::dict d;
                 if (s.thresholds.x_star) d["x_star"] = *s.thresholds.x_star;
                 if (s.thresholds.x_a) d["x_a"] = *s.thresholds.x_a;
                 if (s.thresholds.x_b) d["x_b"] = *s.thresholds.x_b;
                 if (s.thresholds.lambda) d["lambda"] = *s.thresholds.lambda;
                 return d;
             })
        .def("region_max", [](const Solution& s, int i, int j) {
            return s.region_max[i][j].describe();
        })
        .def("region_min", [](const Solution& s, int i, int j) {
            return s.region_min[i][j].describe();
        })
        .def("to_json", [](const Solution& s) { return solution_to_json(s).dump(2); })
        .def_static("from_json", [](const std::string& text) {
            return solution_from_json(nlohmann::json::parse(text));
        });

    m.def("validate", &validate, py::arg("spec"));
    m.def("derive", &derive, py::arg("spec"), py::arg("i"), py::arg("j"));
    m.def("no_switch_value", &no_switch_value, py::arg("spec"), py::arg("i"),
          py::arg("j"), py::arg("x"));
    m.def("classify", [](const GameSpec& s) {
        const Classification c = classify(s);
        return py::make_tuple(c.order, c.costs);
    });
    m.def("solve", [](const GameSpec& s) { return build(s); }, py::arg("spec"));
    m.def("load_spec", &load_spec, py::arg("path"));

    m.def(
        "verify",
        [](const GameSpec& s, const Solution& sol, int points) {
            GridSpec grid;
            grid.points = points;
            const QviReport rep = verify(s, sol, grid);
            py::dict d;
            d["worst_residual"] = rep.worst_residual;
            d["violations"] = rep.violations;
            d["worst_fit_jump"] = worst_fit_jump(sol);
            d["passed"] = rep.worst_residual <= kQviTol && rep.violations == 0 &&
                          worst_fit_jump(sol) <= kSmoothTol;
            return d;
        },
        py::arg("spec"), py::arg("solution"), py::arg("points") = 400);

    m.def(
        "simulate",
        [](const GameSpec& s, const Solution& sol, int i, int j, long paths, double dt,
           double horizon, std::uint64_t seed, bool antithetic, int threads,
           int substeps) {
            const Estimate est =
                simulate_payoff(s, i, j, strategy_from(sol),
                                make_config(paths, dt, horizon, seed, antithetic,
                                            threads, substeps));
            return py::make_tuple(est.mean, est.std_error);
        },
        py::arg("spec"), py::arg("solution"), py::arg("i") = 0, py::arg("j") = 0,
        py::arg("paths") = 10000, py::arg("dt") = 1e-3, py::arg("horizon") = 0.0,
        py::arg("seed") = 1, py::arg("antithetic") = false, py::arg("threads") = 0,
        py::arg("substeps") = 1);

    // first-passage functionals
    m.def("laplace_hit", &laplace_hit);
    m.def("laplace_two_stage", &laplace_two_stage);
    m.def("laplace_exit", &laplace_exit);
    m.def("profit_until", &profit_until);
    m.def("profit_between", &profit_between);
    m.def("profit_until_exit", &profit_until_exit);

    py::class_<RegionTuple>(m, "RegionTuple")
        .def(py::init([](double y21, double x12_prime, double x12) {
                 return RegionTuple{y21, x12_prime, x12};
             }),
             py::arg("y21"), py::arg("x12_prime"), py::arg("x12"))
        .def_readwrite("y21", &RegionTuple::y21)
        .def_readwrite("x12_prime", &RegionTuple::x12_prime)
        .def_readwrite("x12", &RegionTuple::x12);

    m.def(
        "j_values",
        [](const GameSpec& s, double x, const RegionTuple& t, bool single_diffusion) {
            HittingOptions opts;
            opts.single_diffusion = single_diffusion;
            const JValues jv = j_values(s, x, t, opts);
            return py::make_tuple(jv.j[0][0], jv.j[0][1], jv.j[1][0], jv.j[1][1]);
        },
        py::arg("spec"), py::arg("x"), py::arg("regions"),
        py::arg("single_diffusion") = false);

    m.def(
        "threshold_search",
        [](const GameSpec& s, double x, int i, int j, const std::vector<double>& y21,
           const std::vector<double>& x12_prime, const std::vector<double>& x12,
           bool single_diffusion) {
            SearchGrids grids{y21, x12_prime, x12};
            HittingOptions opts;
            opts.single_diffusion = single_diffusion;
            const SearchResult res = threshold_search(s, x, i, j, grids, opts);
            py::dict d;
            d["best"] = py::make_tuple(res.best.y21, res.best.x12_prime, res.best.x12);
            d["value"] = res.value;
            d["maxmin_value"] = res.maxmin_value;
            d["minmax_gap"] = res.minmax_gap;
            return d;
        },
        py::arg("spec"), py::arg("x"), py::arg("i"), py::arg("j"), py::arg("y21"),
        py::arg("x12_prime"), py::arg("x12"), py::arg("single_diffusion") = false);
}

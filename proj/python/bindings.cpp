#include "slrt/io.hpp"
#include "slrt/mixture.hpp"
#include "slrt/montecarlo.hpp"
#include "slrt/statistic.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace slrt;

PYBIND11_MODULE(_slrt, m) {
    m.doc() = "Split likelihood ratio tests with universal finite-sample validity";

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<Eigen::MatrixXd>(), py::arg("rows"))
        .def_property_readonly("n", &Dataset::n)
        .def_property_readonly("d", &Dataset::d)
        .def_property_readonly("rows", &Dataset::rows)
        .def("mean", &Dataset::mean);

    py::class_<LinearHypothesis>(m, "LinearHypothesis")
        .def(py::init<Eigen::VectorXd, Eigen::MatrixXd>(), py::arg("offset"),
             py::arg("basis_rows"))
        .def_static("coordinate_subspace", &LinearHypothesis::coordinate_subspace,
                    py::arg("dim"), py::arg("free_coords"))
        .def_property_readonly("dim", &LinearHypothesis::dim)
        .def_property_readonly("q", &LinearHypothesis::q)
        .def_property_readonly("offset", &LinearHypothesis::offset)
        .def_property_readonly("basis", &LinearHypothesis::basis);

    py::enum_<ModelKind>(m, "ModelKind")
        .value("GaussianLocation", ModelKind::GaussianLocation)
        .value("GaussianMixture2", ModelKind::GaussianMixture2);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init([](ModelKind kind, Eigen::Index dim) { return ModelSpec{kind, dim}; }),
             py::arg("kind") = ModelKind::GaussianLocation, py::arg("dim") = 1)
        .def_readwrite("kind", &ModelSpec::kind)
        .def_readwrite("dim", &ModelSpec::dim);

    m.def("loglik", &loglik, py::arg("theta"), py::arg("data"));
    m.def("mle", &mle, py::arg("data"));
    m.def("project", &project, py::arg("x"), py::arg("hypothesis"));
    m.def("constrained_mle", &constrained_mle, py::arg("data"), py::arg("hypothesis"));

    py::class_<SplitSpec>(m, "SplitSpec")
        .def(py::init([](double gamma, std::uint64_t seed) { return SplitSpec{gamma, seed}; }),
             py::arg("gamma"), py::arg("seed"))
        .def_readwrite("gamma", &SplitSpec::gamma)
        .def_readwrite("seed", &SplitSpec::seed);

    py::class_<SplitData>(m, "SplitData")
        .def_readonly("estimation", &SplitData::estimation)
        .def_readonly("evaluation", &SplitData::evaluation)
        .def_readonly("permutation", &SplitData::permutation)
        .def_property_readonly("n0", &SplitData::n0)
        .def_property_readonly("n1", &SplitData::n1);

    m.def("evaluation_fold_size", &evaluation_fold_size, py::arg("n"), py::arg("gamma"));
    m.def("split", &split, py::arg("data"), py::arg("spec"));
    m.def("split_by_assignment", &split_by_assignment, py::arg("data"),
          py::arg("evaluation_indices"));

    py::enum_<StatisticKind>(m, "StatisticKind")
        .value("plain", StatisticKind::plain)
        .value("crossfit", StatisticKind::crossfit);

    py::class_<TestConfig>(m, "TestConfig")
        .def(py::init([](double alpha, std::optional<double> override) {
                 return TestConfig{alpha, override};
             }),
             py::arg("alpha") = 0.05, py::arg("critical_value_override") = std::nullopt)
        .def_readwrite("alpha", &TestConfig::alpha)
        .def_readwrite("critical_value_override", &TestConfig::critical_value_override);

    py::class_<TestResult>(m, "TestResult")
        .def_readonly("log_t", &TestResult::log_t)
        .def_readonly("log_crit", &TestResult::log_crit)
        .def_readonly("reject", &TestResult::reject)
        .def_readonly("n0", &TestResult::n0)
        .def_readonly("n1", &TestResult::n1)
        .def_readonly("gamma_effective", &TestResult::gamma_effective)
        .def_readonly("guarantee_void", &TestResult::guarantee_void)
        .def("__repr__", [](const TestResult& r) {
            return "TestResult(" + format_test_result(r, StatisticKind::plain) + ")";
        });

    m.def("slrt_statistic", &slrt_statistic, py::arg("split_data"), py::arg("hypothesis"),
          py::arg("model"));
    m.def("swapped_statistic", &swapped_statistic, py::arg("split_data"), py::arg("hypothesis"),
          py::arg("model"));
    m.def("cross_fit_statistic", &cross_fit_statistic, py::arg("log_t"), py::arg("log_t_swap"));
    m.def("decide", &decide, py::arg("log_t"), py::arg("config"));
    m.def("run_split_test", &run_split_test, py::arg("split_data"), py::arg("hypothesis"),
          py::arg("model"), py::arg("config"), py::arg("kind") = StatisticKind::plain);

    py::class_<MixtureParams>(m, "MixtureParams")
        .def(py::init([](double w, double mu1, double mu2) {
                 return MixtureParams{w, mu1, mu2};
             }),
             py::arg("weight") = 0.5, py::arg("mu1") = 0.0, py::arg("mu2") = 0.0)
        .def_readwrite("weight", &MixtureParams::weight)
        .def_readwrite("mu1", &MixtureParams::mu1)
        .def_readwrite("mu2", &MixtureParams::mu2);

    py::class_<EmConfig>(m, "EmConfig")
        .def(py::init([](int max_iters, double tol, int restarts, std::uint64_t seed) {
                 EmConfig c;
                 c.max_iters = max_iters;
                 c.tol = tol;
                 c.restarts = restarts;
                 c.seed = seed;
                 return c;
             }),
             py::arg("max_iters") = 500, py::arg("tol") = 1e-8, py::arg("restarts") = 5,
             py::arg("seed") = 0)
        .def_readwrite("max_iters", &EmConfig::max_iters)
        .def_readwrite("tol", &EmConfig::tol)
        .def_readwrite("restarts", &EmConfig::restarts)
        .def_readwrite("seed", &EmConfig::seed);

    py::class_<EmFitResult>(m, "EmFitResult")
        .def_readonly("params", &EmFitResult::params)
        .def_readonly("loglik", &EmFitResult::loglik)
        .def_readonly("iterations", &EmFitResult::iterations)
        .def_readonly("restart", &EmFitResult::restart)
        .def_readonly("trace", &EmFitResult::trace);

    m.def("mixture_loglik", &mixture_loglik, py::arg("params"), py::arg("data"));
    m.def("em_fit", &em_fit, py::arg("data"), py::arg("config") = EmConfig{});
    m.def("em_fit_detail", &em_fit_detail, py::arg("data"), py::arg("config") = EmConfig{});
    m.def("mixture_slrt", &mixture_slrt, py::arg("data"), py::arg("split_spec"),
          py::arg("config"), py::arg("em") = EmConfig{});

    py::class_<CellSpec>(m, "CellSpec")
        .def(py::init([](Eigen::Index n, Eigen::Index d, Eigen::Index q, double delta,
                         double gamma, double alpha, int reps, std::uint64_t seed,
                         StatisticKind statistic) {
                 CellSpec c;
                 c.n = n;
                 c.d = d;
                 c.q = q;
                 c.delta = delta;
                 c.gamma = gamma;
                 c.alpha = alpha;
                 c.reps = reps;
                 c.seed = seed;
                 c.statistic = statistic;
                 return c;
             }),
             py::arg("n") = 100, py::arg("d") = 50, py::arg("q") = 45, py::arg("delta") = 0.0,
             py::arg("gamma") = 0.5, py::arg("alpha") = 0.05, py::arg("reps") = 10000,
             py::arg("seed") = 1, py::arg("statistic") = StatisticKind::plain)
        .def_readwrite("n", &CellSpec::n)
        .def_readwrite("d", &CellSpec::d)
        .def_readwrite("q", &CellSpec::q)
        .def_readwrite("delta", &CellSpec::delta)
        .def_readwrite("gamma", &CellSpec::gamma)
        .def_readwrite("alpha", &CellSpec::alpha)
        .def_readwrite("reps", &CellSpec::reps)
        .def_readwrite("seed", &CellSpec::seed)
        .def_readwrite("statistic", &CellSpec::statistic);

    py::class_<SimCell>(m, "SimCell")
        .def_readonly("kind", &SimCell::kind)
        .def_readonly("spec", &SimCell::spec)
        .def_readonly("reject_rate", &SimCell::reject_rate)
        .def_readonly("std_error", &SimCell::std_error)
        .def_readonly("mean_t", &SimCell::mean_t)
        .def_readonly("mean_t_std_error", &SimCell::mean_t_std_error);

    py::class_<TuneResult>(m, "TuneResult")
        .def_readonly("gamma_grid", &TuneResult::gamma_grid)
        .def_readonly("power_at", &TuneResult::power_at)
        .def_readonly("gamma_star", &TuneResult::gamma_star)
        .def_readonly("achieved_power", &TuneResult::achieved_power)
        .def_readonly("target_power", &TuneResult::target_power)
        .def_readonly("meets_target", &TuneResult::meets_target)
        .def_readonly("cells", &TuneResult::cells);

    py::class_<MixtureTruth>(m, "MixtureTruth")
        .def(py::init([](bool is_null, double w, double mu1, double mu2) {
                 return MixtureTruth{is_null, w, mu1, mu2};
             }),
             py::arg("is_null") = true, py::arg("weight") = 0.5, py::arg("mu1") = 0.0,
             py::arg("mu2") = 0.0)
        .def_readwrite("is_null", &MixtureTruth::is_null)
        .def_readwrite("weight", &MixtureTruth::weight)
        .def_readwrite("mu1", &MixtureTruth::mu1)
        .def_readwrite("mu2", &MixtureTruth::mu2);

    py::class_<MixtureCellSpec>(m, "MixtureCellSpec")
        .def(py::init([](Eigen::Index n, double gamma, double alpha, int reps,
                         std::uint64_t seed, MixtureTruth truth, EmConfig em) {
                 MixtureCellSpec c;
                 c.n = n;
                 c.gamma = gamma;
                 c.alpha = alpha;
                 c.reps = reps;
                 c.seed = seed;
                 c.truth = truth;
                 c.em = em;
                 return c;
             }),
             py::arg("n") = 100, py::arg("gamma") = 0.5, py::arg("alpha") = 0.05,
             py::arg("reps") = 2000, py::arg("seed") = 1, py::arg("truth") = MixtureTruth{},
             py::arg("em") = EmConfig{})
        .def_readwrite("n", &MixtureCellSpec::n)
        .def_readwrite("gamma", &MixtureCellSpec::gamma)
        .def_readwrite("alpha", &MixtureCellSpec::alpha)
        .def_readwrite("reps", &MixtureCellSpec::reps)
        .def_readwrite("seed", &MixtureCellSpec::seed)
        .def_readwrite("truth", &MixtureCellSpec::truth)
        .def_readwrite("em", &MixtureCellSpec::em);

    m.def("run_cell", &run_cell, py::arg("spec"), py::arg("threads") = 0,
          py::arg("kind") = "cell", py::call_guard<py::gil_scoped_release>());
    m.def("run_mixture_cell", &run_mixture_cell, py::arg("spec"), py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def("sweep_delta", &sweep_delta, py::arg("base"), py::arg("delta_grid"),
          py::arg("threads") = 0, py::arg("kind") = "power",
          py::call_guard<py::gil_scoped_release>());
    m.def("sweep_gamma", &sweep_gamma, py::arg("base"), py::arg("gamma_grid"),
          py::arg("threads") = 0, py::arg("kind") = "size",
          py::call_guard<py::gil_scoped_release>());
    m.def("tune_gamma", &tune_gamma, py::arg("base"), py::arg("gamma_grid"),
          py::arg("target_power"), py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>());

    m.def("cells_to_csv", &cells_to_csv, py::arg("cells"));
    m.def("parse_grid", &parse_grid, py::arg("text"));
    m.def("parse_free_coords", &parse_free_coords, py::arg("text"), py::arg("dim"));

    m.attr("__version__") = "0.1.0";
}

#include "slrt/io.hpp"
#include "slrt/mixture.hpp"
#include "slrt/montecarlo.hpp"
#include "slrt/statistic.hpp"
#include "slrt/svg.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct TestOptions {
    std::string data_path;
    bool header = false;
    std::string free_coords;
    std::string hypothesis_path;
    double gamma = 0.5;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    bool cross_fit = false;
    double critical_value = 0.0;
    std::string assign;
};

struct SweepOptions {
    Eigen::Index n = 100;
    Eigen::Index dim = 50;
    Eigen::Index null_dim = 45;
    double gamma = 0.5;
    double delta = 0.0;
    double alpha = 0.05;
    int reps = 10000;
    std::uint64_t seed = 1;
    std::string delta_grid = "0:0.5:0.025";
    std::string gamma_grid = "0.1:0.9:0.05";
    double target_power = 0.5;
    std::string statistic = "plain";
    std::string out_path;
    std::string svg_path;
    int threads = 0;
};

struct MixtureOptions {
    Eigen::Index n = 100;
    std::string truth = "null";
    double gamma = 0.5;
    double alpha = 0.05;
    int reps = 2000;
    std::uint64_t seed = 1;
    int em_restarts = 5;
    int em_max_iters = 500;
    double em_tol = 1e-8;
    std::string out_path;
    int threads = 0;
};

slrt::StatisticKind parse_statistic(const std::string& s) {
    if (s == "plain") return slrt::StatisticKind::plain;
    if (s == "crossfit") return slrt::StatisticKind::crossfit;
    throw std::invalid_argument("statistic must be 'plain' or 'crossfit'");
}

std::vector<Eigen::Index> parse_assignment(const std::string& text) {
    std::vector<Eigen::Index> out;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        std::size_t pos = 0;
        const long v = std::stol(token, &pos);
        if (pos != token.size() || v < 0)
            throw std::invalid_argument("--assign: bad index '" + token + "'");
        out.push_back(static_cast<Eigen::Index>(v));
    }
    if (out.empty()) throw std::invalid_argument("--assign: no indices given");
    return out;
}

slrt::MixtureTruth parse_truth(const std::string& text) {
    slrt::MixtureTruth truth;
    if (text == "null") return truth;
    const std::string prefix = "mix:";
    if (text.rfind(prefix, 0) != 0)
        throw std::invalid_argument("--truth must be 'null' or 'mix:<w>,<mu1>,<mu2>'");
    const auto grid = slrt::parse_grid(text.substr(prefix.size()));
    if (grid.size() != 3)
        throw std::invalid_argument("--truth mix: expected three values w,mu1,mu2");
    truth.is_null = false;
    truth.weight = grid[0];
    truth.mu1 = grid[1];
    truth.mu2 = grid[2];
    if (!(truth.weight >= 0.0 && truth.weight <= 1.0))
        throw std::invalid_argument("--truth mix: weight must lie in [0, 1]");
    return truth;
}

slrt::LinearHypothesis load_hypothesis(const TestOptions& opt, Eigen::Index dim) {
    const bool have_fc = !opt.free_coords.empty();
    const bool have_file = !opt.hypothesis_path.empty();
    if (have_fc == have_file)
        throw std::invalid_argument("exactly one of --free-coords / --hypothesis is required");
    if (have_file) return slrt::read_hypothesis_json(opt.hypothesis_path);
    return slrt::LinearHypothesis::coordinate_subspace(
        dim, slrt::parse_free_coords(opt.free_coords, dim));
}

int run_test(const TestOptions& opt) {
    const slrt::Dataset data = slrt::read_dataset_csv(opt.data_path, opt.header);
    const slrt::LinearHypothesis h = load_hypothesis(opt, data.d());

    slrt::SplitData sd = opt.assign.empty()
                             ? slrt::split(data, slrt::SplitSpec{opt.gamma, opt.seed})
                             : slrt::split_by_assignment(data, parse_assignment(opt.assign));

    slrt::TestConfig cfg{opt.alpha, std::nullopt};
    if (opt.critical_value > 0.0) cfg.critical_value_override = opt.critical_value;

    const slrt::ModelSpec model{slrt::ModelKind::GaussianLocation, data.d()};
    const auto kind = opt.cross_fit ? slrt::StatisticKind::crossfit : slrt::StatisticKind::plain;
    const slrt::TestResult r = slrt::run_split_test(sd, h, model, cfg, kind);
    std::cout << slrt::format_test_result(r, kind) << '\n';
    return 0;
}

void write_outputs(const std::vector<slrt::SimCell>& cells, const SweepOptions& opt,
                   const std::string& title, const std::string& x_label, bool x_is_delta) {
    slrt::write_file_atomic(opt.out_path, slrt::cells_to_csv(cells));
    if (opt.svg_path.empty()) return;

    std::vector<slrt::SvgSeries> series;
    for (const char* name : {"plain", "crossfit"}) {
        slrt::SvgSeries s;
        s.label = name;
        for (const auto& c : cells) {
            const bool plain = c.spec.statistic == slrt::StatisticKind::plain;
            if (plain != (std::string(name) == "plain")) continue;
            s.x.push_back(x_is_delta ? c.spec.delta : c.spec.gamma);
            s.y.push_back(c.reject_rate);
            s.se.push_back(c.std_error);
        }
        if (!s.x.empty()) series.push_back(std::move(s));
    }
    slrt::write_file_atomic(opt.svg_path,
                            slrt::render_line_plot(title, x_label, "rejection rate", series));
}

// Runs the sweep once per requested statistic kind and interleaves the rows
// grid-point-first so the CSV stays sorted by the swept variable.
std::vector<slrt::SimCell> run_sweeps(const SweepOptions& opt, const slrt::CellSpec& base,
                                      const std::vector<double>& grid, bool sweep_over_delta,
                                      const std::string& kind) {
    std::vector<slrt::StatisticKind> kinds;
    if (opt.statistic == "both")
        kinds = {slrt::StatisticKind::plain, slrt::StatisticKind::crossfit};
    else
        kinds = {parse_statistic(opt.statistic)};

    std::vector<std::vector<slrt::SimCell>> blocks;
    for (const auto k : kinds) {
        slrt::CellSpec spec = base;
        spec.statistic = k;
        blocks.push_back(sweep_over_delta ? slrt::sweep_delta(spec, grid, opt.threads, kind)
                                          : slrt::sweep_gamma(spec, grid, opt.threads, kind));
    }
    std::vector<slrt::SimCell> cells;
    for (std::size_t i = 0; i < blocks.front().size(); ++i)
        for (const auto& block : blocks) cells.push_back(block[i]);
    return cells;
}

int run_power(const SweepOptions& opt) {
    slrt::ensure_writable(opt.out_path);
    if (!opt.svg_path.empty()) slrt::ensure_writable(opt.svg_path);
    slrt::CellSpec base;
    base.n = opt.n;
    base.d = opt.dim;
    base.q = opt.null_dim;
    base.gamma = opt.gamma;
    base.alpha = opt.alpha;
    base.reps = opt.reps;
    base.seed = opt.seed;
    const auto cells = run_sweeps(opt, base, slrt::parse_grid(opt.delta_grid), true, "power");
    write_outputs(cells, opt, "Power vs delta", "delta", true);
    return 0;
}

int run_size(const SweepOptions& opt) {
    slrt::ensure_writable(opt.out_path);
    if (!opt.svg_path.empty()) slrt::ensure_writable(opt.svg_path);
    slrt::CellSpec base;
    base.n = opt.n;
    base.d = opt.dim;
    base.q = opt.null_dim;
    base.delta = 0.0;
    base.alpha = opt.alpha;
    base.reps = opt.reps;
    base.seed = opt.seed;
    const auto cells = run_sweeps(opt, base, slrt::parse_grid(opt.gamma_grid), false, "size");
    write_outputs(cells, opt, "Size vs gamma", "gamma", false);
    return 0;
}

int run_tune(const SweepOptions& opt) {
    if (!opt.out_path.empty()) slrt::ensure_writable(opt.out_path);
    if (!opt.svg_path.empty()) slrt::ensure_writable(opt.svg_path);
    slrt::CellSpec base;
    base.n = opt.n;
    base.d = opt.dim;
    base.q = opt.null_dim;
    base.delta = opt.delta;
    base.alpha = opt.alpha;
    base.reps = opt.reps;
    base.seed = opt.seed;
    if (opt.statistic == "both")
        throw std::invalid_argument("tune: --statistic must be 'plain' or 'crossfit'");
    base.statistic = parse_statistic(opt.statistic);

    const slrt::TuneResult tr =
        slrt::tune_gamma(base, slrt::parse_grid(opt.gamma_grid), opt.target_power, opt.threads);

    if (!opt.out_path.empty()) slrt::write_file_atomic(opt.out_path, slrt::cells_to_csv(tr.cells));
    if (!opt.svg_path.empty()) {
        slrt::SvgSeries s;
        s.label = opt.statistic;
        s.x = tr.gamma_grid;
        s.y = tr.power_at;
        for (const auto& c : tr.cells) s.se.push_back(c.std_error);
        slrt::write_file_atomic(opt.svg_path, slrt::render_line_plot("Power vs gamma", "gamma",
                                                                     "rejection rate", {s}));
    }
    std::cout << "gamma_star=" << slrt::format_double(tr.gamma_star)
              << " achieved_power=" << slrt::format_double(tr.achieved_power)
              << " target_power=" << slrt::format_double(tr.target_power)
              << " meets_target=" << (tr.meets_target ? 1 : 0) << '\n';
    return 0;
}

int run_mixture_demo(const MixtureOptions& opt) {
    if (!opt.out_path.empty()) slrt::ensure_writable(opt.out_path);
    slrt::MixtureCellSpec spec;
    spec.n = opt.n;
    spec.gamma = opt.gamma;
    spec.alpha = opt.alpha;
    spec.reps = opt.reps;
    spec.seed = opt.seed;
    spec.truth = parse_truth(opt.truth);
    spec.em.restarts = opt.em_restarts;
    spec.em.max_iters = opt.em_max_iters;
    spec.em.tol = opt.em_tol;

    const slrt::SimCell cell = slrt::run_mixture_cell(spec, opt.threads);
    const std::string csv = slrt::cells_to_csv({cell});
    if (opt.out_path.empty())
        std::cout << csv;
    else
        slrt::write_file_atomic(opt.out_path, csv);
    return 0;
}

void add_sweep_dims(CLI::App* cmd, SweepOptions& opt) {
    cmd->add_option("--n", opt.n, "sample size")->capture_default_str()
        ->check(CLI::Range(static_cast<Eigen::Index>(2), static_cast<Eigen::Index>(100000000)));
    cmd->add_option("--dim", opt.dim, "ambient dimension d")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--null-dim", opt.null_dim, "null dimension q (coordinate subspace)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
}

void add_sweep_common(CLI::App* cmd, SweepOptions& opt, bool out_required) {
    cmd->add_option("--alpha", opt.alpha, "nominal size")->capture_default_str()
        ->check(CLI::Range(0.0, 1.0).description("FLOAT in (0,1)"));
    cmd->add_option("--reps", opt.reps, "Monte Carlo replicates per cell")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt.seed, "master seed")->capture_default_str();
    cmd->add_option("--statistic", opt.statistic, "plain | crossfit | both")
        ->capture_default_str()
        ->check(CLI::IsMember({"plain", "crossfit", "both"}));
    auto* out = cmd->add_option("--out", opt.out_path, "output CSV path");
    if (out_required) out->required();
    cmd->add_option("--svg", opt.svg_path, "optional SVG plot path");
    cmd->add_option("--threads", opt.threads, "worker threads (0 = auto)")
        ->capture_default_str()
        ->envname("UNIVERSAL_INFER_THREADS");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Split likelihood ratio test with universal finite-sample validity"};
    app.set_config("--config", "", "key=value config file supplying defaults; flags override");
    app.require_subcommand(1);

    TestOptions test_opt;
    auto* test_cmd = app.add_subcommand(
        "test", "Run one split test on a CSV dataset and print the result");
    test_cmd->add_option("--data", test_opt.data_path, "CSV file, one observation per row")
        ->required();
    test_cmd->add_flag("--header", test_opt.header, "skip one header line");
    test_cmd->add_option("--free-coords", test_opt.free_coords,
                         "null's free coordinates, 1-based ('none', '1..45', '2,5..7')");
    test_cmd->add_option("--hypothesis", test_opt.hypothesis_path,
                         "JSON file with offset vector and orthonormal basis rows");
    auto* gamma_opt = test_cmd->add_option("--gamma", test_opt.gamma,
                                           "evaluation-fold fraction n1/n")
                          ->capture_default_str()
                          ->check(CLI::Range(0.0, 1.0).description("FLOAT in (0,1)"));
    test_cmd->add_option("--alpha", test_opt.alpha, "nominal size")->capture_default_str()
        ->check(CLI::Range(0.0, 1.0).description("FLOAT in (0,1)"));
    test_cmd->add_option("--seed", test_opt.seed, "split seed")->capture_default_str();
    test_cmd->add_flag("--cross-fit", test_opt.cross_fit,
                       "decide on the cross-fit statistic log((T + T_swap)/2)");
    test_cmd->add_option("--critical-value", test_opt.critical_value,
                         "override the universal critical value 1/alpha (voids the guarantee)")
        ->check(CLI::PositiveNumber);
    test_cmd->add_option("--assign", test_opt.assign,
                         "explicit 0-based evaluation-fold row indices, e.g. '2,3'")
        ->excludes(gamma_opt);

    SweepOptions power_opt;
    auto* power_cmd = app.add_subcommand("power", "Power as a function of delta (CSV out)");
    add_sweep_dims(power_cmd, power_opt);
    power_cmd->add_option("--gamma", power_opt.gamma, "evaluation-fold fraction")
        ->required()
        ->check(CLI::Range(0.0, 1.0).description("FLOAT in (0,1)"));
    power_cmd->add_option("--delta-grid", power_opt.delta_grid,
                          "departure grid start:stop:step")
        ->capture_default_str();
    add_sweep_common(power_cmd, power_opt, true);

    SweepOptions size_opt;
    auto* size_cmd =
        app.add_subcommand("size", "True size at delta = 0 as a function of gamma (CSV out)");
    add_sweep_dims(size_cmd, size_opt);
    size_cmd->add_option("--gamma-grid", size_opt.gamma_grid, "split-ratio grid start:stop:step")
        ->capture_default_str();
    add_sweep_common(size_cmd, size_opt, true);

    SweepOptions tune_opt;
    auto* tune_cmd = app.add_subcommand(
        "tune", "Pick the power-maximising gamma on a grid; the critical value stays 1/alpha");
    add_sweep_dims(tune_cmd, tune_opt);
    tune_cmd->add_option("--delta", tune_opt.delta, "departure at which power is tuned")
        ->required();
    tune_cmd->add_option("--gamma-grid", tune_opt.gamma_grid, "split-ratio grid start:stop:step")
        ->capture_default_str();
    tune_cmd->add_option("--target-power", tune_opt.target_power, "requested power level")
        ->required()
        ->check(CLI::Range(0.0, 1.0).description("FLOAT in (0,1)"));
    add_sweep_common(tune_cmd, tune_opt, false);

    MixtureOptions mix_opt;
    auto* mix_cmd = app.add_subcommand(
        "mixture-demo", "Size/power of the mixture SLRT (irregular null); one SimCell row");
    mix_cmd->add_option("--n", mix_opt.n, "sample size")->capture_default_str()
        ->check(CLI::Range(static_cast<Eigen::Index>(2), static_cast<Eigen::Index>(100000000)));
    mix_cmd->add_option("--truth", mix_opt.truth, "'null' or 'mix:<w>,<mu1>,<mu2>'")
        ->capture_default_str();
    mix_cmd->add_option("--gamma", mix_opt.gamma, "evaluation-fold fraction")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0).description("FLOAT in (0,1)"));
    mix_cmd->add_option("--alpha", mix_opt.alpha, "nominal size")->capture_default_str()
        ->check(CLI::Range(0.0, 1.0).description("FLOAT in (0,1)"));
    mix_cmd->add_option("--reps", mix_opt.reps, "Monte Carlo replicates")->capture_default_str()
        ->check(CLI::PositiveNumber);
    mix_cmd->add_option("--seed", mix_opt.seed, "master seed")->capture_default_str();
    mix_cmd->add_option("--em-restarts", mix_opt.em_restarts, "EM restarts")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    mix_cmd->add_option("--em-max-iters", mix_opt.em_max_iters, "EM iteration cap")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    mix_cmd->add_option("--em-tol", mix_opt.em_tol, "EM log-likelihood gain tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    mix_cmd->add_option("--out", mix_opt.out_path, "output CSV path (default: stdout)");
    mix_cmd->add_option("--threads", mix_opt.threads, "worker threads (0 = auto)")
        ->capture_default_str()
        ->envname("UNIVERSAL_INFER_THREADS");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        if (*test_cmd) return run_test(test_opt);
        if (*power_cmd) return run_power(power_opt);
        if (*size_cmd) return run_size(size_opt);
        if (*tune_cmd) return run_tune(tune_opt);
        if (*mix_cmd) return run_mixture_demo(mix_opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

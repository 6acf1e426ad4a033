#include "slrt/montecarlo.hpp"

#include "slrt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace slrt {

namespace {

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, count) on a fork-join pool with strided assignment.
// Work item i always performs the same computation, so the schedule never
// affects results; the first exception wins and is rethrown after the join.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::min(resolve_threads(threads), std::max(count, 1));
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (int i = t; i < count; i += threads) fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void validate_cell(const CellSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("run_cell: n must be >= 2");
    if (spec.d < 1) throw std::invalid_argument("run_cell: d must be >= 1");
    if (spec.q < 0 || spec.q >= spec.d)
        throw std::invalid_argument("run_cell: null dimension must satisfy 0 <= q < d");
    if (spec.reps < 1) throw std::invalid_argument("run_cell: reps must be >= 1");
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
        throw std::invalid_argument("run_cell: alpha must lie in (0, 1)");
    if (!std::isfinite(spec.delta)) throw std::invalid_argument("run_cell: delta must be finite");
    evaluation_fold_size(spec.n, spec.gamma);  // rejects infeasible gamma before sampling
}

// Observations are drawn row-major: row i fills coordinates 0..d-1 before
// row i+1. Part of the reproducibility contract.
Eigen::MatrixXd draw_gaussian_rows(Eigen::Index n, Eigen::Index d, double delta,
                                   std::uint64_t seed) {
    rng::NormalSampler sampler(seed);
    Eigen::MatrixXd rows(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) rows(i, j) = delta + sampler.next();
    return rows;
}

struct Reduction {
    double reject_rate = 0.0;
    double std_error = 0.0;
    double mean_t = 0.0;
    double mean_t_std_error = 0.0;
};

// Sequential index-order reduction of per-replicate results; keeps floating
// sums independent of the worker count.
Reduction reduce(const std::vector<double>& log_t, const std::vector<unsigned char>& rejected) {
    const auto reps = static_cast<double>(log_t.size());
    long long count = 0;
    for (const unsigned char f : rejected) count += f;
    Reduction r;
    r.reject_rate = static_cast<double>(count) / reps;
    r.std_error = std::sqrt(r.reject_rate * (1.0 - r.reject_rate) / reps);

    double sum_t = 0.0;
    for (const double lt : log_t) sum_t += std::exp(lt);
    r.mean_t = sum_t / reps;
    double ss = 0.0;
    for (const double lt : log_t) {
        const double dev = std::exp(lt) - r.mean_t;
        ss += dev * dev;
    }
    r.mean_t_std_error = log_t.size() > 1
                             ? std::sqrt(ss / (reps * (reps - 1.0)))
                             : 0.0;
    return r;
}

}  // namespace

std::size_t argmax_first(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("argmax_first: empty input");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

SimCell run_cell(const CellSpec& spec, int threads, std::string kind) {
    validate_cell(spec);

    std::vector<Eigen::Index> free_coords(static_cast<std::size_t>(spec.q));
    for (Eigen::Index i = 0; i < spec.q; ++i) free_coords[static_cast<std::size_t>(i)] = i;
    const LinearHypothesis h = LinearHypothesis::coordinate_subspace(spec.d, free_coords);
    const ModelSpec model{ModelKind::GaussianLocation, spec.d};
    const double log_crit = std::log(1.0 / spec.alpha);

    std::vector<double> log_t(static_cast<std::size_t>(spec.reps));
    std::vector<unsigned char> rejected(static_cast<std::size_t>(spec.reps));

    parallel_for(spec.reps, threads, [&](int r) {
        const auto rep = static_cast<std::uint64_t>(r);
        const Dataset data(draw_gaussian_rows(spec.n, spec.d, spec.delta,
                                              rng::derive_seed(spec.seed, rep, rng::kStreamData)));
        const SplitData sd =
            split(data, SplitSpec{spec.gamma, rng::derive_seed(spec.seed, rep, rng::kStreamSplit)});
        double lt = slrt_statistic(sd, h, model);
        if (spec.statistic == StatisticKind::crossfit)
            lt = cross_fit_statistic(lt, swapped_statistic(sd, h, model));
        log_t[static_cast<std::size_t>(r)] = lt;
        rejected[static_cast<std::size_t>(r)] = lt >= log_crit ? 1 : 0;
    });

    const Reduction red = reduce(log_t, rejected);
    SimCell cell;
    cell.kind = std::move(kind);
    cell.spec = spec;
    cell.reject_rate = red.reject_rate;
    cell.std_error = red.std_error;
    cell.mean_t = red.mean_t;
    cell.mean_t_std_error = red.mean_t_std_error;
    return cell;
}

SimCell run_mixture_cell(const MixtureCellSpec& spec, int threads) {
    if (spec.n < 2) throw std::invalid_argument("run_mixture_cell: n must be >= 2");
    if (spec.reps < 1) throw std::invalid_argument("run_mixture_cell: reps must be >= 1");
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
        throw std::invalid_argument("run_mixture_cell: alpha must lie in (0, 1)");
    if (!spec.truth.is_null &&
        !(spec.truth.weight >= 0.0 && spec.truth.weight <= 1.0))
        throw std::invalid_argument("run_mixture_cell: mixture weight must lie in [0, 1]");
    evaluation_fold_size(spec.n, spec.gamma);

    const TestConfig cfg{spec.alpha, std::nullopt};

    std::vector<double> log_t(static_cast<std::size_t>(spec.reps));
    std::vector<unsigned char> rejected(static_cast<std::size_t>(spec.reps));

    parallel_for(spec.reps, threads, [&](int r) {
        const auto rep = static_cast<std::uint64_t>(r);
        rng::NormalSampler sampler(rng::derive_seed(spec.seed, rep, rng::kStreamData));
        Eigen::MatrixXd rows(spec.n, 1);
        for (Eigen::Index i = 0; i < spec.n; ++i) {
            if (spec.truth.is_null) {
                rows(i, 0) = sampler.next();
            } else {
                // one uniform for the component label, then one normal
                const double u = sampler.engine().next_double();
                const double mu = u < spec.truth.weight ? spec.truth.mu1 : spec.truth.mu2;
                rows(i, 0) = mu + sampler.next();
            }
        }
        EmConfig em = spec.em;
        em.seed = rng::derive_seed(spec.seed, rep, rng::kStreamEm);
        const TestResult res =
            mixture_slrt(Dataset(std::move(rows)),
                         SplitSpec{spec.gamma, rng::derive_seed(spec.seed, rep, rng::kStreamSplit)},
                         cfg, em);
        log_t[static_cast<std::size_t>(r)] = res.log_t;
        rejected[static_cast<std::size_t>(r)] = res.reject ? 1 : 0;
    });

    const Reduction red = reduce(log_t, rejected);
    SimCell cell;
    cell.kind = "mixture";
    cell.spec.n = spec.n;
    cell.spec.d = 1;
    cell.spec.q = 0;
    cell.spec.delta = spec.truth.is_null ? 0.0 : std::abs(spec.truth.mu2 - spec.truth.mu1);
    cell.spec.gamma = spec.gamma;
    cell.spec.alpha = spec.alpha;
    cell.spec.reps = spec.reps;
    cell.spec.seed = spec.seed;
    cell.spec.statistic = StatisticKind::plain;
    cell.reject_rate = red.reject_rate;
    cell.std_error = red.std_error;
    cell.mean_t = red.mean_t;
    cell.mean_t_std_error = red.mean_t_std_error;
    return cell;
}

std::vector<SimCell> sweep_delta(const CellSpec& base, const std::vector<double>& delta_grid,
                                 int threads, const std::string& kind) {
    if (delta_grid.empty()) throw std::invalid_argument("sweep_delta: empty grid");
    std::vector<double> grid = delta_grid;
    std::sort(grid.begin(), grid.end());
    std::vector<SimCell> cells;
    cells.reserve(grid.size());
    for (const double delta : grid) {
        CellSpec spec = base;
        spec.delta = delta;
        cells.push_back(run_cell(spec, threads, kind));
    }
    return cells;
}

std::vector<SimCell> sweep_gamma(const CellSpec& base, const std::vector<double>& gamma_grid,
                                 int threads, const std::string& kind) {
    if (gamma_grid.empty()) throw std::invalid_argument("sweep_gamma: empty grid");
    std::ostringstream bad;
    for (const double g : gamma_grid)
        if (!(g > 0.0 && g < 1.0)) bad << ' ' << g;
    if (!bad.str().empty())
        throw std::invalid_argument("sweep_gamma: gamma values outside (0, 1):" + bad.str());

    std::vector<double> grid = gamma_grid;
    std::sort(grid.begin(), grid.end());
    std::vector<SimCell> cells;
    cells.reserve(grid.size());
    for (const double gamma : grid) {
        CellSpec spec = base;
        spec.gamma = gamma;
        cells.push_back(run_cell(spec, threads, kind));
    }
    return cells;
}

TuneResult tune_gamma(const CellSpec& base, const std::vector<double>& gamma_grid,
                      double target_power, int threads) {
    if (!(target_power > 0.0 && target_power < 1.0))
        throw std::invalid_argument("tune_gamma: target power must lie in (0, 1)");

    TuneResult out;
    out.cells = sweep_gamma(base, gamma_grid, threads, "tune");
    for (const SimCell& c : out.cells) {
        out.gamma_grid.push_back(c.spec.gamma);
        out.power_at.push_back(c.reject_rate);
    }
    const std::size_t star = argmax_first(out.power_at);
    out.gamma_star = out.gamma_grid[star];
    out.achieved_power = out.power_at[star];
    out.target_power = target_power;
    out.meets_target = out.achieved_power >= target_power;
    return out;
}

}  // namespace slrt

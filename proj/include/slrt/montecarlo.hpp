#pragma once

#include "slrt/mixture.hpp"
#include "slrt/statistic.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace slrt {

// One simulation configuration: truth mean (delta, ..., delta) in d
// coordinates, null = coordinate subspace spanned by the first q coordinates.
struct CellSpec {
    Eigen::Index n = 100;
    Eigen::Index d = 50;
    Eigen::Index q = 45;
    double delta = 0.0;
    double gamma = 0.5;
    double alpha = 0.05;
    int reps = 10000;
    std::uint64_t seed = 1;
    StatisticKind statistic = StatisticKind::plain;
};

struct SimCell {
    std::string kind;  // sweep that produced the cell: power | size | tune | mixture | cell
    CellSpec spec;
    double reject_rate = 0.0;
    double std_error = 0.0;        // sqrt(p (1 - p) / reps)
    double mean_t = 0.0;           // across-replicate mean of T = exp(log_t)
    double mean_t_std_error = 0.0; // its Monte Carlo standard error
};

struct TuneResult {
    std::vector<double> gamma_grid;
    std::vector<double> power_at;
    double gamma_star = 0.0;
    double achieved_power = 0.0;
    double target_power = 0.0;
    bool meets_target = false;
    std::vector<SimCell> cells;
};

struct MixtureTruth {
    bool is_null = true;  // N(0, 1) when true, the mixture below otherwise
    double weight = 0.5;
    double mu1 = 0.0;
    double mu2 = 0.0;
};

struct MixtureCellSpec {
    Eigen::Index n = 100;
    double gamma = 0.5;
    double alpha = 0.05;
    int reps = 2000;
    std::uint64_t seed = 1;
    MixtureTruth truth;
    EmConfig em;
};

// Replicate r of a cell draws its data with seed derive_seed(seed, r, data
// stream) and splits with derive_seed(seed, r, split stream), so results are
// bit-identical for any worker count. threads <= 0 selects the hardware
// concurrency.
SimCell run_cell(const CellSpec& spec, int threads = 0, std::string kind = "cell");

SimCell run_mixture_cell(const MixtureCellSpec& spec, int threads = 0);

// Grids are evaluated in ascending order; every cell shares the master seed,
// so replicate r sees the same underlying draws across grid points.
std::vector<SimCell> sweep_delta(const CellSpec& base, const std::vector<double>& delta_grid,
                                 int threads = 0, const std::string& kind = "power");

std::vector<SimCell> sweep_gamma(const CellSpec& base, const std::vector<double>& gamma_grid,
                                 int threads = 0, const std::string& kind = "size");

// Power sweep over gamma at the base cell's delta; gamma_star is the smallest
// grid value attaining maximal estimated power. The critical value is never
// altered by tuning.
TuneResult tune_gamma(const CellSpec& base, const std::vector<double>& gamma_grid,
                      double target_power, int threads = 0);

// Index of the maximum; ties resolve to the smallest index.
std::size_t argmax_first(const std::vector<double>& values);

}  // namespace slrt

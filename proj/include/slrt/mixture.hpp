#pragma once

#include "slrt/models.hpp"
#include "slrt/split.hpp"
#include "slrt/statistic.hpp"

#include <cstdint>
#include <vector>

namespace slrt {

// Two-component Gaussian location mixture w * N(mu1, 1) + (1 - w) * N(mu2, 1).
// Component variances are fixed at 1, which keeps the likelihood bounded.
struct MixtureParams {
    double weight = 0.5;
    double mu1 = 0.0;
    double mu2 = 0.0;
};

struct EmConfig {
    int max_iters = 500;
    double tol = 1e-8;   // stop once the per-iteration log-likelihood gain drops below
    int restarts = 5;
    std::uint64_t seed = 0;
};

struct EmFitResult {
    MixtureParams params;
    double loglik = 0.0;
    int iterations = 0;
    int restart = 0;                 // winning restart; -1 for the collapsed baseline
    std::vector<double> trace;       // per-iteration log-likelihood of the winning run
};

// Mixture log-likelihood, log-sum-exp stable. Requires d = 1.
double mixture_loglik(const MixtureParams& p, const Dataset& data);

// EM over `restarts` seeded initialisations (quantile pairs of the data,
// jittered), plus the collapsed single-Gaussian fit as a baseline candidate.
// Winner is the highest log-likelihood; exact ties keep the earlier candidate.
EmFitResult em_fit_detail(const Dataset& data, const EmConfig& cfg);
MixtureParams em_fit(const Dataset& data, const EmConfig& cfg);

// SLRT for H0 "single Gaussian" against the two-component mixture: the
// mixture is fit by EM on the estimation fold, while the null MLE on the
// evaluation fold is the exact sample mean. Size control follows from the
// Markov bound even though the classical LRT is irregular here.
TestResult mixture_slrt(const Dataset& data, const SplitSpec& spec, const TestConfig& cfg,
                        const EmConfig& em);

}  // namespace slrt

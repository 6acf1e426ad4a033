#pragma once

#include "slrt/models.hpp"
#include "slrt/split.hpp"

#include <optional>

namespace slrt {

enum class StatisticKind { plain, crossfit };

struct TestConfig {
    double alpha = 0.05;
    // Replaces the universal critical value 1/alpha. Using it voids the
    // finite-sample guarantee; every result produced under an override is
    // flagged accordingly.
    std::optional<double> critical_value_override;
};

struct TestResult {
    double log_t = 0.0;
    double log_crit = 0.0;
    bool reject = false;
    Eigen::Index n0 = 0;
    Eigen::Index n1 = 0;
    double gamma_effective = 0.0;  // n1 / n
    bool guarantee_void = false;   // true iff an override threshold applied
};

// log T = loglik(theta1; D1) - loglik(theta0; D1), where theta1 is the
// unrestricted MLE on the estimation fold and theta0 the null MLE on the
// evaluation fold. Computed in the Gaussian closed form
//   (n1/2) * (|xbar1 - theta0|^2 - |xbar1 - theta1|^2).
double slrt_statistic(const SplitData& sd, const LinearHypothesis& h, const ModelSpec& model);

// Same statistic with the roles of the folds exchanged.
double swapped_statistic(const SplitData& sd, const LinearHypothesis& h, const ModelSpec& model);

// log of (T + T_swap) / 2, evaluated stably in log space.
// cross_fit_statistic(x, x) == x exactly.
double cross_fit_statistic(double log_t, double log_t_swap);

// Markov decision rule: reject iff log_t >= log(1/alpha), or >= log(override)
// when an override is set. Fold sizes are not known here and left zero.
TestResult decide(double log_t, const TestConfig& cfg);

// Split-test pipeline on pre-split data: statistic of the requested kind,
// then the decision rule, with fold sizes filled in.
TestResult run_split_test(const SplitData& sd, const LinearHypothesis& h,
                          const ModelSpec& model, const TestConfig& cfg,
                          StatisticKind kind);

}  // namespace slrt

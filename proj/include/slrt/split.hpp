#pragma once

#include "slrt/models.hpp"

#include <cstdint>
#include <vector>

namespace slrt {

// gamma is the fraction of observations assigned to the EVALUATION fold D1,
// the fold on which the likelihood ratio is evaluated.
struct SplitSpec {
    double gamma = 0.5;
    std::uint64_t seed = 0;
};

struct SplitData {
    Dataset estimation;              // D0: fits the unrestricted estimate
    Dataset evaluation;              // D1: likelihood ratio and null MLE
    std::vector<Eigen::Index> permutation;  // shuffled row indices; first n1 are D1

    Eigen::Index n0() const noexcept { return estimation.n(); }
    Eigen::Index n1() const noexcept { return evaluation.n(); }
};

// n1 = clamp(round(gamma * n), 1, n - 1), rounding half away from zero.
Eigen::Index evaluation_fold_size(Eigen::Index n, double gamma);

// Deterministic partition: a seeded uniform shuffle of row indices assigns
// the first n1 to the evaluation fold. Identical (data order, spec) inputs
// produce identical folds on every platform.
SplitData split(const Dataset& data, const SplitSpec& spec);

// Explicit assignment of evaluation-fold row indices (0-based, distinct).
SplitData split_by_assignment(const Dataset& data,
                              const std::vector<Eigen::Index>& evaluation_indices);

}  // namespace slrt

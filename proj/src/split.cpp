#include "slrt/split.hpp"

#include "slrt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slrt {

Eigen::Index evaluation_fold_size(Eigen::Index n, double gamma) {
    if (n < 2) throw std::invalid_argument("split: need at least 2 observations");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("split: gamma must lie in (0, 1)");
    const auto rounded = static_cast<Eigen::Index>(std::llround(gamma * static_cast<double>(n)));
    return std::clamp<Eigen::Index>(rounded, 1, n - 1);
}

namespace {

SplitData folds_from_permutation(const Dataset& data, std::vector<Eigen::Index> perm,
                                 Eigen::Index n1) {
    const Eigen::Index n = data.n();
    const Eigen::Index n0 = n - n1;
    Eigen::MatrixXd eval_rows(n1, data.d());
    Eigen::MatrixXd est_rows(n0, data.d());
    for (Eigen::Index i = 0; i < n1; ++i) eval_rows.row(i) = data.rows().row(perm[static_cast<std::size_t>(i)]);
    for (Eigen::Index i = 0; i < n0; ++i) est_rows.row(i) = data.rows().row(perm[static_cast<std::size_t>(n1 + i)]);
    return SplitData{Dataset(std::move(est_rows)), Dataset(std::move(eval_rows)), std::move(perm)};
}

}  // namespace

SplitData split(const Dataset& data, const SplitSpec& spec) {
    const Eigen::Index n = data.n();
    const Eigen::Index n1 = evaluation_fold_size(n, spec.gamma);

    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    rng::SplitMix64 gen(spec.seed);
    for (Eigen::Index i = n - 1; i > 0; --i) {
        const auto j = static_cast<Eigen::Index>(gen.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    return folds_from_permutation(data, std::move(perm), n1);
}

SplitData split_by_assignment(const Dataset& data,
                              const std::vector<Eigen::Index>& evaluation_indices) {
    const Eigen::Index n = data.n();
    if (n < 2) throw std::invalid_argument("split: need at least 2 observations");
    const auto n1 = static_cast<Eigen::Index>(evaluation_indices.size());
    if (n1 < 1 || n1 > n - 1)
        throw std::invalid_argument("split: assignment must leave both folds nonempty");

    std::vector<bool> in_eval(static_cast<std::size_t>(n), false);
    std::vector<Eigen::Index> perm;
    perm.reserve(static_cast<std::size_t>(n));
    for (const Eigen::Index idx : evaluation_indices) {
        if (idx < 0 || idx >= n)
            throw std::invalid_argument("split: assignment index out of range");
        if (in_eval[static_cast<std::size_t>(idx)])
            throw std::invalid_argument("split: duplicate assignment index");
        in_eval[static_cast<std::size_t>(idx)] = true;
        perm.push_back(idx);
    }
    for (Eigen::Index i = 0; i < n; ++i)
        if (!in_eval[static_cast<std::size_t>(i)]) perm.push_back(i);
    return folds_from_permutation(data, std::move(perm), n1);
}

}  // namespace slrt

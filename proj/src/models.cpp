#include "slrt/models.hpp"

#include "slrt/logspace.hpp"

#include <cmath>
#include <string>

namespace slrt {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Dataset::Dataset(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
    require(rows_.rows() >= 1, "Dataset: at least one observation required");
    require(rows_.cols() >= 1, "Dataset: ambient dimension must be >= 1");
    require(rows_.allFinite(), "Dataset: observations must be finite");
}

Eigen::VectorXd Dataset::column() const {
    require(d() == 1, "Dataset: column() requires d = 1");
    return rows_.col(0);
}

LinearHypothesis::LinearHypothesis(Eigen::VectorXd offset, Eigen::MatrixXd basis_rows)
    : offset_(std::move(offset)), basis_(std::move(basis_rows)) {
    const Eigen::Index d = offset_.size();
    require(d >= 1, "LinearHypothesis: dimension must be >= 1");
    require(offset_.allFinite(), "LinearHypothesis: offset must be finite");
    if (basis_.size() == 0 && basis_.rows() == 0) {
        // point null: q = 0, normalise the stored shape to 0 x d
        basis_.resize(0, d);
    }
    require(basis_.cols() == d, "LinearHypothesis: basis row dimension mismatch");
    const Eigen::Index q = basis_.rows();
    require(q < d, "LinearHypothesis: null dimension q must satisfy q < d");
    require(basis_.allFinite(), "LinearHypothesis: basis must be finite");
    // pairwise orthonormality to within 1e-10
    for (Eigen::Index i = 0; i < q; ++i) {
        for (Eigen::Index j = i; j < q; ++j) {
            const double want = (i == j) ? 1.0 : 0.0;
            const double got = basis_.row(i).dot(basis_.row(j));
            require(std::abs(got - want) <= 1e-10,
                    "LinearHypothesis: basis rows are not orthonormal");
        }
    }
}

LinearHypothesis LinearHypothesis::coordinate_subspace(
    Eigen::Index dim, const std::vector<Eigen::Index>& free_coords) {
    require(dim >= 1, "coordinate_subspace: dimension must be >= 1");
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(
        static_cast<Eigen::Index>(free_coords.size()), dim);
    std::vector<bool> seen(static_cast<std::size_t>(dim), false);
    for (std::size_t r = 0; r < free_coords.size(); ++r) {
        const Eigen::Index c = free_coords[r];
        require(c >= 0 && c < dim, "coordinate_subspace: coordinate out of range");
        require(!seen[static_cast<std::size_t>(c)],
                "coordinate_subspace: duplicate coordinate");
        seen[static_cast<std::size_t>(c)] = true;
        basis(static_cast<Eigen::Index>(r), c) = 1.0;
    }
    return LinearHypothesis(Eigen::VectorXd::Zero(dim), std::move(basis));
}

double loglik(const ParameterVector& theta, const Dataset& data) {
    require(theta.size() == data.d(), "loglik: dimension mismatch");
    require(theta.allFinite(), "loglik: parameter must be finite");
    const double rss = (data.rows().rowwise() - theta.transpose()).squaredNorm();
    return -0.5 * static_cast<double>(data.n() * data.d()) * kLog2Pi - 0.5 * rss;
}

ParameterVector mle(const Dataset& data) {
    return data.mean();
}

ParameterVector project(const ParameterVector& x, const LinearHypothesis& h) {
    require(x.size() == h.dim(), "project: dimension mismatch");
    return h.offset() + h.basis().transpose() * (h.basis() * (x - h.offset()));
}

ParameterVector constrained_mle(const Dataset& data, const LinearHypothesis& h) {
    require(data.d() == h.dim(), "constrained_mle: dimension mismatch");
    return project(mle(data), h);
}

}  // namespace slrt

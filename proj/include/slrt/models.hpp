#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace slrt {

using ParameterVector = Eigen::VectorXd;

// n observations in d-dimensional space, one row per observation.
// Rows are immutable after construction.
class Dataset {
public:
    explicit Dataset(Eigen::MatrixXd rows);

    Eigen::Index n() const noexcept { return rows_.rows(); }
    Eigen::Index d() const noexcept { return rows_.cols(); }
    const Eigen::MatrixXd& rows() const noexcept { return rows_; }

    // Coordinatewise sample mean.
    ParameterVector mean() const { return rows_.colwise().mean().transpose(); }

    // 1-d datasets viewed as a plain vector.
    Eigen::VectorXd column() const;

private:
    Eigen::MatrixXd rows_;
};

// Affine null subspace {offset + span(basis rows)} of dimension q < d.
// Basis rows must be orthonormal; a non-orthonormal basis is rejected rather
// than silently re-orthogonalised.
class LinearHypothesis {
public:
    LinearHypothesis(Eigen::VectorXd offset, Eigen::MatrixXd basis_rows);

    // Null set {theta : theta_j free for j in free_coords, 0 elsewhere}.
    // Indices are 0-based and must be distinct and within [0, dim).
    static LinearHypothesis coordinate_subspace(Eigen::Index dim,
                                                const std::vector<Eigen::Index>& free_coords);

    Eigen::Index dim() const noexcept { return offset_.size(); }
    Eigen::Index q() const noexcept { return basis_.rows(); }
    const Eigen::VectorXd& offset() const noexcept { return offset_; }
    const Eigen::MatrixXd& basis() const noexcept { return basis_; }  // q x d, rows orthonormal

private:
    Eigen::VectorXd offset_;
    Eigen::MatrixXd basis_;
};

enum class ModelKind { GaussianLocation, GaussianMixture2 };

struct ModelSpec {
    ModelKind kind = ModelKind::GaussianLocation;
    Eigen::Index dim = 1;
};

// Log-likelihood of N(theta, I_d) summed over all rows.
double loglik(const ParameterVector& theta, const Dataset& data);

// Unrestricted MLE: the coordinatewise sample mean.
ParameterVector mle(const Dataset& data);

// Orthogonal projection of x onto the null affine subspace. Idempotent.
ParameterVector project(const ParameterVector& x, const LinearHypothesis& h);

// MLE over the null set: projection of the sample mean.
ParameterVector constrained_mle(const Dataset& data, const LinearHypothesis& h);

}  // namespace slrt

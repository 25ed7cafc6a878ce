#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace cellia {

/// Thresholds for finite-precision rank decisions. Exact rank statements
/// over generic channels hold almost surely; these tolerances decide them
/// numerically.
struct TolerancePolicy {
    double rel_rank_tol{1e-8};
    double residual_tol{1e-8};

    TolerancePolicy() = default;
    TolerancePolicy(double rank_tol, double res_tol);
};

/// Largest dimension accepted by the dense routines below.
inline constexpr Eigen::Index kMaxDim = 2048;

/// Singular values of A, descending.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a);

/// Numerical rank: the number of singular values above
/// rel_rank_tol * max(rows, cols) * sigma_max. Zero matrices have rank 0.
int numerical_rank(const Eigen::MatrixXcd& a, const TolerancePolicy& pol = {});

/// Orthonormal basis of {x : Ax = 0}; cols(A) - numerical_rank(A) columns.
Eigen::MatrixXcd nullspace_basis(const Eigen::MatrixXcd& a, const TolerancePolicy& pol = {});

/// Orthonormal basis of the column span of A (numerical_rank(A) columns).
Eigen::MatrixXcd range_basis(const Eigen::MatrixXcd& a, const TolerancePolicy& pol = {});

/// Projects a seeded random vector r (drawn from GaussianStream(seed)) onto
/// the nullspace of A and normalizes it. The scalar det(AA^H) prefactor of
/// the textbook projector formula only rescales the result and is omitted.
/// Throws NullspaceEmpty when numerical_rank(A) == cols(A).
Eigen::VectorXcd solve_homogeneous_random(const Eigen::MatrixXcd& a, std::uint64_t seed,
                                          const TolerancePolicy& pol = {});

/// Orthonormal basis of the orthogonal complement of span(V) for a full
/// column rank M x k matrix V with k <= M; returns M x (M-k). Throws
/// RankDeficientInput when V is column-rank deficient.
Eigen::MatrixXcd orth_complement(const Eigen::MatrixXcd& v, const TolerancePolicy& pol = {});

namespace detail {

/// Factored nullspace projector so repeated draws against one matrix reuse
/// a single decomposition. solve_homogeneous_random is draw() on a fresh
/// projector.
///
/// Well-conditioned wide systems take a normal-equations route (Cholesky of
/// A A^H with one refinement pass); everything else falls back to the SVD.
/// Both compute the same orthogonal projection.
class NullspaceProjector {
public:
    NullspaceProjector(const Eigen::MatrixXcd& a, const TolerancePolicy& pol);

    bool nullspace_empty() const { return rank_ == cols_; }
    int rank() const { return rank_; }
    Eigen::Index cols() const { return cols_; }

    /// Normalized projection of GaussianStream(seed)'s random vector onto
    /// the nullspace. Throws NullspaceEmpty if there is none.
    Eigen::VectorXcd draw(std::uint64_t seed) const;

private:
    enum class Mode { Wide, Svd };

    Mode mode_{Mode::Svd};
    Eigen::MatrixXcd a_;          // Wide mode: the matrix itself
    Eigen::LLT<Eigen::MatrixXcd> llt_;
    Eigen::MatrixXcd row_space_;  // Svd mode: orthonormal, cols == rank
    Eigen::Index cols_{0};
    int rank_{0};
};

}  // namespace detail

}  // namespace cellia

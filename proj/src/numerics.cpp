#include "cellia/numerics.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <stdexcept>

#include "cellia/errors.hpp"
#include "cellia/random.hpp"

namespace cellia {

namespace {

void check_dims(const Eigen::MatrixXcd& a, const char* where) {
    if (a.rows() == 0 || a.cols() == 0)
        throw std::invalid_argument(std::string(where) + ": empty matrix");
    if (a.rows() > kMaxDim || a.cols() > kMaxDim)
        throw std::invalid_argument(std::string(where) + ": dimension exceeds dense cap");
}

// Jacobi is more accurate for small problems; BDC scales to the sweep sizes.
template <unsigned Options>
struct SvdPair {
    Eigen::JacobiSVD<Eigen::MatrixXcd> jacobi;
    Eigen::BDCSVD<Eigen::MatrixXcd> bdc;
    bool use_bdc;

    explicit SvdPair(const Eigen::MatrixXcd& a) : use_bdc(a.rows() > 32 && a.cols() > 32) {
        if (use_bdc)
            bdc.compute(a, Options);
        else
            jacobi.compute(a, Options);
    }
    const Eigen::VectorXd& values() const {
        return use_bdc ? bdc.singularValues() : jacobi.singularValues();
    }
    Eigen::MatrixXcd matrixV() const { return use_bdc ? bdc.matrixV() : jacobi.matrixV(); }
    Eigen::MatrixXcd matrixU() const { return use_bdc ? bdc.matrixU() : jacobi.matrixU(); }
};

double rank_threshold(const Eigen::MatrixXcd& a, const Eigen::VectorXd& sv,
                      const TolerancePolicy& pol) {
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    return pol.rel_rank_tol * static_cast<double>(std::max(a.rows(), a.cols())) * smax;
}

int rank_from_values(const Eigen::MatrixXcd& a, const Eigen::VectorXd& sv,
                     const TolerancePolicy& pol) {
    const double thr = rank_threshold(a, sv, pol);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thr) ++r;
    return r;
}

}  // namespace

TolerancePolicy::TolerancePolicy(double rank_tol, double res_tol)
    : rel_rank_tol(rank_tol), residual_tol(res_tol) {
    if (!(rank_tol > 0.0 && rank_tol < 1e-2) || !(res_tol > 0.0 && res_tol < 1e-2))
        throw std::invalid_argument("TolerancePolicy: tolerances must lie in (0, 1e-2)");
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a) {
    check_dims(a, "singular_values");
    if (a.rows() > 32 && a.cols() > 32) return Eigen::BDCSVD<Eigen::MatrixXcd>(a).singularValues();
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues();
}

int numerical_rank(const Eigen::MatrixXcd& a, const TolerancePolicy& pol) {
    check_dims(a, "numerical_rank");
    return rank_from_values(a, singular_values(a), pol);
}

Eigen::MatrixXcd nullspace_basis(const Eigen::MatrixXcd& a, const TolerancePolicy& pol) {
    check_dims(a, "nullspace_basis");
    SvdPair<Eigen::ComputeFullV> svd(a);
    const int r = rank_from_values(a, svd.values(), pol);
    const Eigen::MatrixXcd v = svd.matrixV();
    return v.rightCols(a.cols() - r);
}

Eigen::MatrixXcd range_basis(const Eigen::MatrixXcd& a, const TolerancePolicy& pol) {
    check_dims(a, "range_basis");
    SvdPair<Eigen::ComputeThinU> svd(a);
    const int r = rank_from_values(a, svd.values(), pol);
    return svd.matrixU().leftCols(r);
}

namespace detail {

namespace {

// A direction can only be treated as null if projecting across it keeps the
// residual within tolerance, so the projector's rank cut sits at
// residual_tol * sigma_max. This is deliberately tighter than
// numerical_rank's threshold: a borderline singular value (between the two
// cuts) classified as null would leave residuals far above residual_tol.
int certified_rank(const Eigen::VectorXd& sv, const TolerancePolicy& pol) {
    const double cutoff = pol.residual_tol * (sv.size() > 0 ? sv(0) : 0.0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++r;
    return r;
}

}  // namespace

NullspaceProjector::NullspaceProjector(const Eigen::MatrixXcd& a, const TolerancePolicy& pol) {
    check_dims(a, "NullspaceProjector");
    cols_ = a.cols();

    if (a.rows() < a.cols()) {
        const Eigen::MatrixXcd gram = a * a.adjoint();
        llt_.compute(gram);
        if (llt_.info() == Eigen::Success) {
            const Eigen::VectorXd d = llt_.matrixLLT().diagonal().cwiseAbs();
            // Cholesky pivots track the singular values of A; route anything
            // remotely ill conditioned through the SVD instead.
            if (d.minCoeff() > 1e-3 * d.maxCoeff()) {
                mode_ = Mode::Wide;
                a_ = a;
                rank_ = static_cast<int>(a.rows());
                return;
            }
        }
    } else {
        // Cheap prepass: singular values of A are the eigenvalue roots of
        // A^H A. When the matrix has full column rank there is nothing to
        // draw from, so the right singular basis is never needed.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a.adjoint() * a,
                                                            Eigen::EigenvaluesOnly);
        const Eigen::VectorXd sv = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().reverse();
        if (certified_rank(sv, pol) == cols_) {
            mode_ = Mode::Svd;
            rank_ = static_cast<int>(cols_);
            return;
        }
    }

    SvdPair<Eigen::ComputeThinV> svd(a);
    mode_ = Mode::Svd;
    rank_ = certified_rank(svd.values(), pol);
    row_space_ = svd.matrixV().leftCols(rank_);
}

Eigen::VectorXcd NullspaceProjector::draw(std::uint64_t seed) const {
    if (nullspace_empty())
        throw NullspaceEmpty("NullspaceProjector: coefficient matrix has full column rank");
    GaussianStream rng(seed);
    const Eigen::VectorXcd rvec = rng.vector(cols_);
    Eigen::VectorXcd v;
    if (mode_ == Mode::Wide) {
        v = rvec - a_.adjoint() * llt_.solve(a_ * rvec);
        v -= a_.adjoint() * llt_.solve(a_ * v);  // one refinement pass
    } else {
        v = rvec - row_space_ * (row_space_.adjoint() * rvec);
    }
    v.normalize();
    return v;
}

}  // namespace detail

Eigen::VectorXcd solve_homogeneous_random(const Eigen::MatrixXcd& a, std::uint64_t seed,
                                          const TolerancePolicy& pol) {
    check_dims(a, "solve_homogeneous_random");
    detail::NullspaceProjector proj(a, pol);
    if (proj.nullspace_empty())
        throw NullspaceEmpty("solve_homogeneous_random: coefficient matrix has full column rank");
    Eigen::VectorXcd v = proj.draw(seed);
    const double residual = (a * v).norm();
    if (residual > pol.residual_tol * std::max(1.0, a.cwiseAbs().maxCoeff() * a.rows()))
        throw Error("solve_homogeneous_random: projection residual above tolerance");
    return v;
}

Eigen::MatrixXcd orth_complement(const Eigen::MatrixXcd& v, const TolerancePolicy& pol) {
    check_dims(v, "orth_complement");
    const Eigen::Index m = v.rows(), k = v.cols();
    if (k > m) throw RankDeficientInput("orth_complement: more columns than rows");
    if (numerical_rank(v, pol) != k)
        throw RankDeficientInput("orth_complement: input is column-rank deficient");
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(v);
    const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, m);
    return q.rightCols(m - k);
}

}  // namespace cellia

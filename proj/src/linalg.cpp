#include "rbffr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace rbffr::linalg {

SingularSystemError::SingularSystemError(double pivot)
    : std::runtime_error("singular system: smallest pivot magnitude " + std::to_string(pivot)),
      pivot_(pivot) {}

namespace {

template <typename Mat>
double smallest_pivot(const Eigen::PartialPivLU<Mat>& lu)
{
    double p = std::numeric_limits<double>::infinity();
    const auto& packed = lu.matrixLU();
    for (Eigen::Index i = 0; i < packed.rows(); ++i)
        p = std::min(p, std::abs(packed(i, i)));
    return p;
}

template <typename Mat, typename Vec>
Vec solve_impl(const Mat& A, const Vec& b)
{
    if (A.rows() != A.cols())
        throw ContractViolation("solve_dense: matrix must be square");
    if (b.size() != A.rows())
        throw ContractViolation("solve_dense: right-hand side length mismatch");

    Eigen::PartialPivLU<Mat> lu(A);
    const double pivot = smallest_pivot(lu);
    const double scale = A.cwiseAbs().maxCoeff();
    if (pivot <= scale * A.rows() * std::numeric_limits<double>::epsilon())
        throw SingularSystemError(pivot);
    return lu.solve(b);
}

template <typename Mat>
double cond_impl(const Mat& A)
{
    if (A.rows() != A.cols())
        throw ContractViolation("condition_number_2: matrix must be square");
    Eigen::JacobiSVD<Mat> svd(A);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (smin == 0.0)
        return std::numeric_limits<double>::infinity();
    return smax / smin;
}

template <typename Mat>
Mat invert_impl(const Mat& A)
{
    if (A.rows() != A.cols())
        throw ContractViolation("invert: matrix must be square");
    Eigen::PartialPivLU<Mat> lu(A);
    const double pivot = smallest_pivot(lu);
    const double scale = A.cwiseAbs().maxCoeff();
    if (pivot <= scale * A.rows() * std::numeric_limits<double>::epsilon())
        throw SingularSystemError(pivot);
    return lu.inverse();
}

}  // namespace

Vector solve_dense(const Matrix& A, const Vector& b) { return solve_impl(A, b); }
ComplexVector solve_dense(const ComplexMatrix& A, const ComplexVector& b) { return solve_impl(A, b); }

double condition_number_2(const Matrix& A) { return cond_impl(A); }
double condition_number_2(const ComplexMatrix& A) { return cond_impl(A); }

Matrix invert(const Matrix& A) { return invert_impl(A); }
ComplexMatrix invert(const ComplexMatrix& A) { return invert_impl(A); }

EigenDecomposition eig_complex(const ComplexMatrix& A)
{
    if (A.rows() != A.cols())
        throw ContractViolation("eig_complex: matrix must be square");
    if (A.rows() > 32)
        throw ContractViolation("eig_complex: n must be <= 32");

    Eigen::ComplexEigenSolver<ComplexMatrix> es(A, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eig_complex: QR iteration did not converge");

    const Eigen::Index n = A.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto& vals = es.eigenvalues();
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (vals(a).real() != vals(b).real())
            return vals(a).real() < vals(b).real();
        return vals(a).imag() < vals(b).imag();
    });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues(i) = vals(order[static_cast<std::size_t>(i)]);
        out.eigenvectors.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace rbffr::linalg

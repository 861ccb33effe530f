#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace rbffr::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Thrown when a system is singular to working precision. Carries the
/// magnitude of the smallest pivot encountered during elimination.
class SingularSystemError : public std::runtime_error {
public:
    explicit SingularSystemError(double pivot);
    double pivot_magnitude() const { return pivot_; }

private:
    double pivot_;
};

class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct EigenDecomposition {
    ComplexVector eigenvalues;   // sorted by real part, ties by imaginary part
    ComplexMatrix eigenvectors;  // columns, unit 2-norm
};

/// Solve Ax = b by LU with partial pivoting.
Vector solve_dense(const Matrix& A, const Vector& b);
ComplexVector solve_dense(const ComplexMatrix& A, const ComplexVector& b);

/// 2-norm condition number sigma_max / sigma_min. Returns +inf when the
/// smallest singular value underflows to zero.
double condition_number_2(const Matrix& A);
double condition_number_2(const ComplexMatrix& A);

EigenDecomposition eig_complex(const ComplexMatrix& A);

Matrix invert(const Matrix& A);
ComplexMatrix invert(const ComplexMatrix& A);

}  // namespace rbffr::linalg

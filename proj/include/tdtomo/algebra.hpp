#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "tdtomo/errors.hpp"

namespace tdtomo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Numerical tolerances shared by all modules. eps_abs gates entrywise /
// eigenvalue checks, eps_rank is the relative singular-value cutoff used
// for rank decisions.
struct Tolerance {
  double eps_abs = 1e-9;
  double eps_rank = 1e-9;
};

const Tolerance& default_tolerance();

CMatrix identity(Eigen::Index d);

// sigma_0 = I, sigma_1, sigma_2, sigma_3.
CMatrix pauli(int k);

// Throws Error if any entry is NaN or infinite, DimensionMismatch if the
// matrix is not square or is empty.
void require_square_finite(const CMatrix& a, const char* where);

double max_abs(const CMatrix& a);

// max-entry |A - A^dag|.
double hermiticity_residual(const CMatrix& a);

bool is_hermitian(const CMatrix& a, const Tolerance& tol = default_tolerance());

// Hilbert-Schmidt inner product Tr{A^dag B}.
Complex hs_inner(const CMatrix& a, const CMatrix& b);

// Smallest eigenvalue of the Hermitian part. Input must be Hermitian within
// tol.eps_abs; used for positivity decisions (PSD iff >= -eps_abs).
double min_eigenvalue(const CMatrix& a, const Tolerance& tol = default_tolerance());

// Numerical rank of the set of vectorized operators: singular values above
// eps_rank times the largest count toward the rank. Equals d^2 exactly when
// the set spans the full operator space.
Eigen::Index span_rank(const std::vector<CMatrix>& ops,
                       const Tolerance& tol = default_tolerance());

struct LinearSolution {
  CVector x;
  double condition = 0.0;
};

struct RealLinearSolution {
  RVector x;
  double condition = 0.0;
};

// Solves the square system g x = y and reports the 2-norm condition number.
// Throws SolvabilityError (carrying |det| and the condition number) when the
// matrix is numerically singular under tol.eps_rank.
LinearSolution solve_linear(const CMatrix& g, const CVector& y,
                            const Tolerance& tol = default_tolerance());
RealLinearSolution solve_linear(const RMatrix& g, const RVector& y,
                                const Tolerance& tol = default_tolerance());

struct LeastSquaresSolution {
  RVector x;
  double condition = 0.0;
  double residual = 0.0;  // ||a x - b||_2
};

// Minimum-norm least squares via SVD. Throws SolvabilityError when a is
// column-rank deficient.
LeastSquaresSolution solve_least_squares(const RMatrix& a, const RVector& b,
                                         const Tolerance& tol = default_tolerance());

}  // namespace tdtomo

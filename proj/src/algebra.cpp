#include "tdtomo/algebra.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tdtomo {

const Tolerance& default_tolerance() {
  static const Tolerance tol{};
  return tol;
}

CMatrix identity(Eigen::Index d) { return CMatrix::Identity(d, d); }

CMatrix pauli(int k) {
  CMatrix m(2, 2);
  switch (k) {
    case 0:
      m << 1, 0, 0, 1;
      break;
    case 1:
      m << 0, 1, 1, 0;
      break;
    case 2:
      m << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case 3:
      m << 1, 0, 0, -1;
      break;
    default:
      throw Error("pauli: index must be 0..3, got " + std::to_string(k));
  }
  return m;
}

void require_square_finite(const CMatrix& a, const char* where) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    std::ostringstream os;
    os << where << ": expected a nonempty square matrix, got " << a.rows() << "x" << a.cols();
    throw DimensionMismatch(os.str());
  }
  if (!a.allFinite()) {
    throw Error(std::string(where) + ": matrix has NaN or infinite entries");
  }
}

double max_abs(const CMatrix& a) { return a.cwiseAbs().maxCoeff(); }

double hermiticity_residual(const CMatrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& a, const Tolerance& tol) {
  return a.rows() == a.cols() && hermiticity_residual(a) <= tol.eps_abs;
}

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("hs_inner: operands have different dimensions");
  }
  return (a.adjoint() * b).trace();
}

double min_eigenvalue(const CMatrix& a, const Tolerance& tol) {
  require_square_finite(a, "min_eigenvalue");
  const double herm = hermiticity_residual(a);
  if (herm > tol.eps_abs) {
    std::ostringstream os;
    os << "min_eigenvalue: matrix is not Hermitian (residual " << herm << ")";
    throw NotHermitian(os.str(), herm);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es((a + a.adjoint()) / 2.0);
  return es.eigenvalues().minCoeff();
}

Eigen::Index span_rank(const std::vector<CMatrix>& ops, const Tolerance& tol) {
  if (ops.empty()) throw Error("span_rank: empty operator list");
  const Eigen::Index d = ops.front().rows();
  CMatrix stacked(static_cast<Eigen::Index>(ops.size()), d * d);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].rows() != d || ops[i].cols() != d) {
      throw DimensionMismatch("span_rank: operators have mixed dimensions");
    }
    stacked.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const CVector>(ops[i].data(), d * d).transpose();
  }
  Eigen::JacobiSVD<CMatrix> svd(stacked);
  const auto& sv = svd.singularValues();
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  if (largest <= 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol.eps_rank * largest) ++rank;
  }
  return rank;
}

namespace {

template <typename Mat>
double svd_condition_or_throw(const Mat& g, const Tolerance& tol, double abs_det) {
  Eigen::JacobiSVD<Mat> svd(g);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  const double cond =
      smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (smax <= 0.0 || smin <= tol.eps_rank * smax) {
    std::ostringstream os;
    os << "solve_linear: matrix is numerically singular (|det| = " << abs_det
       << ", condition = " << cond << ")";
    throw SolvabilityError(os.str(), abs_det, cond);
  }
  return cond;
}

// LU solve plus two iterative-refinement steps with the residual accumulated
// in long double; keeps the forward error near machine precision for
// conditioning up to the 1e12 range.
template <typename Scalar, typename LongScalar, typename Mat, typename Vec>
Vec lu_solve_refined(const Mat& g, const Vec& y) {
  Eigen::PartialPivLU<Mat> lu(g);
  Vec x = lu.solve(y);
  const Eigen::Index n = g.rows();
  Vec r(n);
  for (int step = 0; step < 2; ++step) {
    for (Eigen::Index i = 0; i < n; ++i) {
      LongScalar acc = static_cast<LongScalar>(y(i));
      for (Eigen::Index j = 0; j < n; ++j) {
        acc -= static_cast<LongScalar>(g(i, j)) * static_cast<LongScalar>(x(j));
      }
      r(i) = static_cast<Scalar>(acc);
    }
    x += lu.solve(r);
  }
  return x;
}

}  // namespace

LinearSolution solve_linear(const CMatrix& g, const CVector& y, const Tolerance& tol) {
  require_square_finite(g, "solve_linear");
  if (y.size() != g.rows()) {
    throw DimensionMismatch("solve_linear: right-hand side length does not match");
  }
  const double abs_det = std::abs(Eigen::PartialPivLU<CMatrix>(g).determinant());
  const double cond = svd_condition_or_throw(g, tol, abs_det);
  CVector x = lu_solve_refined<Complex, std::complex<long double>>(g, y);
  return {std::move(x), cond};
}

RealLinearSolution solve_linear(const RMatrix& g, const RVector& y, const Tolerance& tol) {
  if (g.rows() == 0 || g.rows() != g.cols()) {
    throw DimensionMismatch("solve_linear: expected a nonempty square matrix");
  }
  if (y.size() != g.rows()) {
    throw DimensionMismatch("solve_linear: right-hand side length does not match");
  }
  const double abs_det = std::abs(Eigen::PartialPivLU<RMatrix>(g).determinant());
  const double cond = svd_condition_or_throw(g, tol, abs_det);
  RVector x = lu_solve_refined<double, long double>(g, y);
  return {std::move(x), cond};
}

LeastSquaresSolution solve_least_squares(const RMatrix& a, const RVector& b,
                                         const Tolerance& tol) {
  if (a.rows() < a.cols()) {
    throw Underdetermined("solve_least_squares: fewer equations than unknowns");
  }
  if (b.size() != a.rows()) {
    throw DimensionMismatch("solve_least_squares: right-hand side length does not match");
  }
  Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  const double cond =
      smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (smax <= 0.0 || smin <= tol.eps_rank * smax) {
    std::ostringstream os;
    os << "solve_least_squares: matrix is column-rank deficient (condition = " << cond
       << ")";
    throw SolvabilityError(os.str(), std::numeric_limits<double>::quiet_NaN(), cond);
  }
  RVector x = svd.solve(b);
  const double residual = (a * x - b).norm();
  return {std::move(x), cond, residual};
}

}  // namespace tdtomo

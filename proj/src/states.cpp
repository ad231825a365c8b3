#include "tdtomo/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace tdtomo {

DensityMatrix::DensityMatrix(const CMatrix& m, const Tolerance& tol) : mat_(m) {
  require_square_finite(m, "DensityMatrix");
  const double herm = hermiticity_residual(m);
  if (herm > tol.eps_abs) {
    std::ostringstream os;
    os << "density matrix is not Hermitian (max |m - m^dag| = " << herm << ")";
    throw NotHermitian(os.str(), herm);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es((m + m.adjoint()) / 2.0);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol.eps_abs) {
    std::ostringstream os;
    os << "density matrix is not positive semi-definite (min eigenvalue = " << min_eig
       << ")";
    throw NotPSD(os.str(), min_eig);
  }
  const double trace_dev = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_dev > tol.eps_abs) {
    std::ostringstream os;
    os << "density matrix trace differs from one by " << trace_dev;
    throw TraceNotOne(os.str(), trace_dev);
  }
}

DensityMatrix make_density(const CMatrix& m, const Tolerance& tol) {
  return DensityMatrix(m, tol);
}

DensityMatrix random_density(int d, std::uint64_t seed) {
  if (d < 2) throw Error("random_density: dimension must be at least 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(r, c) = Complex(re, im);
    }
  }
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

DensityMatrix random_pure_density(int d, std::uint64_t seed) {
  if (d < 2) throw Error("random_pure_density: dimension must be at least 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  v.normalize();
  CMatrix rho = v * v.adjoint();
  return DensityMatrix(rho);
}

double fidelity(const DensityMatrix& r, const DensityMatrix& s) {
  if (r.dim() != s.dim()) throw DimensionMismatch("fidelity: states have different dimensions");
  Eigen::SelfAdjointEigenSolver<CMatrix> er(r.mat());
  RVector ev = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_r =
      er.eigenvectors() * ev.asDiagonal() * er.eigenvectors().adjoint();
  const CMatrix inner = sqrt_r * s.mat() * sqrt_r;
  Eigen::SelfAdjointEigenSolver<CMatrix> ei((inner + inner.adjoint()) / 2.0);
  const double root_sum = ei.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

DensityMatrix project_to_state_set(const CMatrix& m, const Tolerance& tol) {
  require_square_finite(m, "project_to_state_set");
  Eigen::SelfAdjointEigenSolver<CMatrix> es((m + m.adjoint()) / 2.0);
  RVector clipped = es.eigenvalues().cwiseMax(0.0);
  const double total = clipped.sum();
  if (total <= tol.eps_abs) {
    throw DegenerateProjection(
        "project_to_state_set: all eigenvalues clip to zero, no state to renormalize");
  }
  clipped /= total;
  CMatrix rho =
      es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
  return DensityMatrix(rho, tol);
}

}  // namespace tdtomo

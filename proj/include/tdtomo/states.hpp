#pragma once

#include <cstdint>

#include "tdtomo/algebra.hpp"

namespace tdtomo {

// Hermitian, positive semi-definite, trace-one operator. Construction always
// validates, so a DensityMatrix value is physical by invariant.
class DensityMatrix {
 public:
  explicit DensityMatrix(const CMatrix& m, const Tolerance& tol = default_tolerance());

  const CMatrix& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  CMatrix mat_;
};

DensityMatrix make_density(const CMatrix& m, const Tolerance& tol = default_tolerance());

// Full-rank random state G G^dag / Tr{G G^dag} with G a seeded complex
// Gaussian draw. Deterministic per seed.
DensityMatrix random_density(int d, std::uint64_t seed);

// Rank-one projector onto a seeded random unit vector.
DensityMatrix random_pure_density(int d, std::uint64_t seed);

// Uhlmann fidelity (Tr sqrt(sqrt(r) s sqrt(r)))^2, symmetric, in [0, 1],
// equal to 1 iff the states coincide.
double fidelity(const DensityMatrix& r, const DensityMatrix& s);

// Repairs a non-physical Hermitian estimate: hermitize, clip negative
// eigenvalues to zero, renormalize the trace to one. Idempotent; leaves
// already-valid states unchanged up to eps. Throws DegenerateProjection when
// everything clips to zero.
DensityMatrix project_to_state_set(const CMatrix& m,
                                   const Tolerance& tol = default_tolerance());

}  // namespace tdtomo

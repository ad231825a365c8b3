#pragma once

#include <random>

#include "tdtomo/algebra.hpp"

namespace tdtomo::test {

inline CMatrix random_cmatrix(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  }
  return m;
}

inline CMatrix random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
  const CMatrix g = random_cmatrix(d, rng);
  return (g + g.adjoint()) / 2.0;
}

inline CMatrix random_psd(Eigen::Index d, std::mt19937_64& rng) {
  const CMatrix g = random_cmatrix(d, rng);
  return g * g.adjoint();
}

inline CMatrix random_unitary(Eigen::Index d, std::mt19937_64& rng) {
  const CMatrix g = random_cmatrix(d, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  return q;
}

// M1 and M2, the positive qubit pair used throughout; written out locally so
// the tests do not depend on the builtin constructors they exercise.
inline CMatrix m1_matrix() {
  CMatrix m(2, 2);
  m << Complex(1.0 / 5.0), Complex(1.0 / 6.0), Complex(1.0 / 6.0), Complex(1.0 / 3.0);
  return m;
}

inline CMatrix m2_matrix() {
  CMatrix m(2, 2);
  m << Complex(3.0 / 10.0), Complex(1.0 / 7.0, 1.0 / 10.0),
      Complex(1.0 / 7.0, -1.0 / 10.0), Complex(1.0 / 6.0);
  return m;
}

inline CMatrix m0_matrix() {
  CMatrix m(2, 2);
  m << Complex(1.0 / 5.0), Complex(1.0 / 6.0, 1.0 / 10.0),
      Complex(1.0 / 6.0, -1.0 / 10.0), Complex(3.0 / 10.0);
  return m;
}

}  // namespace tdtomo::test

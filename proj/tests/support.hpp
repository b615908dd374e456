#pragma once

#include <random>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "vqsim/state.hpp"

namespace vqsim::test {

inline CMatrix random_complex(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> g;
  CMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx{g(rng), g(rng)};
  return m;
}

inline PureState random_pure(std::mt19937_64& rng, int n) {
  CVector v = random_complex(rng, static_cast<Eigen::Index>(dimension(n)), 1);
  v.normalize();
  return PureState(n, v);
}

// Ginibre mixture, full rank with probability 1
inline DensityOperator random_density(std::mt19937_64& rng, int n) {
  const auto d = static_cast<Eigen::Index>(dimension(n));
  CMatrix g = random_complex(rng, d, d);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityOperator(n, rho);
}

// Haar-ish unitary from QR
inline CMatrix random_unitary(std::mt19937_64& rng, Eigen::Index d) {
  Eigen::HouseholderQR<CMatrix> qr(random_complex(rng, d, d));
  return qr.householderQ() * CMatrix::Identity(d, d);
}

// Kraus operators from the blocks of a random isometry
inline std::vector<CMatrix> random_kraus(std::mt19937_64& rng, int arity, int count) {
  const auto d = static_cast<Eigen::Index>(dimension(arity));
  Eigen::HouseholderQR<CMatrix> qr(random_complex(rng, d * count, d));
  CMatrix iso = qr.householderQ() * CMatrix::Identity(d * count, d);
  std::vector<CMatrix> ops;
  for (int h = 0; h < count; ++h) ops.push_back(iso.block(h * d, 0, d, d));
  return ops;
}

inline CMatrix expm(const CMatrix& a) { return a.exp(); }

inline CMatrix projector(const CVector& v) { return v * v.adjoint(); }

}  // namespace vqsim::test

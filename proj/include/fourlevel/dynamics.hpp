// dynamics.hpp - density matrices, the 15-component coherence vector, uniform damping, entropy

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fourlevel/linalg.hpp"

namespace fourlevel {

class DensityMatrixError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A 4 x 4 Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  DensityMatrix() : mat_(Matrix4::Identity() / 4.0) {}

  /// Validates Hermiticity, unit trace and positivity.
  explicit DensityMatrix(const Matrix4& m) : mat_(m) {
    if ((m - m.adjoint()).norm() > 1e-10) throw DensityMatrixError("density matrix is not Hermitian");
    if (std::abs(m.trace() - Complex(1.0)) > 1e-10) throw DensityMatrixError("density matrix trace != 1");
    const auto es = eig_hermitian(Matrix4(0.5 * (m + m.adjoint())));
    if (es.eigenvalues.minCoeff() < -1e-9) throw DensityMatrixError("density matrix is not positive");
  }

  static DensityMatrix pure(int basis_index) {
    if (basis_index < 1 || basis_index > 4) throw DensityMatrixError("basis index must be in 1..4");
    Matrix4 m = Matrix4::Zero();
    m(basis_index - 1, basis_index - 1) = 1.0;
    return DensityMatrix(m);
  }

  /// Skips validation; for matrices that are density matrices by construction.
  static DensityMatrix trusted(const Matrix4& m) {
    DensityMatrix d;
    d.mat_ = m;
    return d;
  }

  const Matrix4& mat() const { return mat_; }
  Complex operator()(int i, int j) const { return mat_(i, j); }

 private:
  Matrix4 mat_;
};

/// Index pairs (0-based) of the off-diagonal components, in coherence-vector order.
inline constexpr std::array<std::array<int, 2>, 6> kOffDiagonalPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

using CoherenceVector = std::array<double, 15>;

/// eta = [r11 - r22, (r11 + r22 - 2 r33)/sqrt3, (r11 + r22 + r33 - 3 r44)/sqrt6,
///        then r_ij + r_ji, i (r_ij - r_ji) for (1,2), (1,3), (1,4), (2,3), (2,4), (3,4)].
inline CoherenceVector rho_to_eta(const DensityMatrix& rho) {
  const Matrix4& r = rho.mat();
  const double d1 = r(0, 0).real(), d2 = r(1, 1).real(), d3 = r(2, 2).real(), d4 = r(3, 3).real();
  CoherenceVector eta{};
  eta[0] = d1 - d2;
  eta[1] = (d1 + d2 - 2.0 * d3) / std::sqrt(3.0);
  eta[2] = (d1 + d2 + d3 - 3.0 * d4) / std::sqrt(6.0);
  for (std::size_t p = 0; p < kOffDiagonalPairs.size(); ++p) {
    const auto [i, j] = kOffDiagonalPairs[p];
    eta[3 + 2 * p] = (r(i, j) + r(j, i)).real();
    eta[4 + 2 * p] = (kI * (r(i, j) - r(j, i))).real();
  }
  return eta;
}

/// The unit-trace density matrix with the given coherence vector.
inline DensityMatrix eta_to_rho(const CoherenceVector& eta) {
  // Invert the diagonal block together with trace = 1.
  const double s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  const double a = eta[0], b = eta[1] * s3, c = eta[2] * s6;
  // a = d1 - d2, b = d1 + d2 - 2 d3, c = d1 + d2 + d3 - 3 d4, 1 = d1 + d2 + d3 + d4
  const double d4 = (1.0 - c) / 4.0;
  const double d3 = (1.0 - d4 - b) / 3.0;
  const double sum12 = 1.0 - d3 - d4;
  const double d1 = 0.5 * (sum12 + a), d2 = 0.5 * (sum12 - a);
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = d1;
  m(1, 1) = d2;
  m(2, 2) = d3;
  m(3, 3) = d4;
  for (std::size_t p = 0; p < kOffDiagonalPairs.size(); ++p) {
    const auto [i, j] = kOffDiagonalPairs[p];
    // r_ij = (eta_sym - i eta_anti) / 2
    const Complex rij = 0.5 * Complex(eta[3 + 2 * p], -eta[4 + 2 * p]);
    m(i, j) = rij;
    m(j, i) = std::conj(rij);
  }
  return DensityMatrix::trusted(m);
}

inline std::vector<DensityMatrix> evolve_density(const std::vector<Matrix4>& U,
                                                 const DensityMatrix& rho0) {
  std::vector<DensityMatrix> out;
  out.reserve(U.size());
  for (const Matrix4& u : U) out.push_back(DensityMatrix::trusted(u * rho0.mat() * u.adjoint()));
  return out;
}

/// Scales the coherence vector by exp(-gamma t): rho -> I/4 + exp(-gamma t) (rho - I/4).
inline std::vector<DensityMatrix> apply_uniform_damping(const std::vector<DensityMatrix>& rho,
                                                        const std::vector<double>& t,
                                                        double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("apply_uniform_damping: gamma must be >= 0");
  if (rho.size() != t.size()) throw std::invalid_argument("apply_uniform_damping: size mismatch");
  std::vector<DensityMatrix> out;
  out.reserve(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (gamma == 0.0) {
      out.push_back(rho[i]);
      continue;
    }
    CoherenceVector eta = rho_to_eta(rho[i]);
    const double f = std::exp(-gamma * t[i]);
    for (double& e : eta) e *= f;
    out.push_back(eta_to_rho(eta));
  }
  return out;
}

/// S = -sum l ln l in nats. The spectrum is taken from rho - I/n so eigenvalues close to
/// the maximally mixed value keep full relative accuracy, and ln n is added last.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  constexpr int n = 4;
  const Matrix4 shifted = rho.mat() - Matrix4::Identity() / double(n);
  const auto es = eig_hermitian(Matrix4(0.5 * (shifted + shifted.adjoint())));
  const double ln_n = std::log(double(n));
  // S = ln n + sum_k [dev_k ln n - l_k log1p(n dev_k)], a clipped l_k contributing -ln n / n
  double excess = 0.0;
  for (int k = 0; k < n; ++k) {
    const double dev = es.eigenvalues(k);
    const double lambda = 1.0 / n + dev;
    excess += lambda > 0.0 ? dev * ln_n - lambda * std::log1p(n * dev) : -ln_n / n;
  }
  return ln_n + excess;
}

inline double purity(const DensityMatrix& rho) { return (rho.mat() * rho.mat()).trace().real(); }

}  // namespace fourlevel

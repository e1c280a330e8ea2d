#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "fourlevel/dynamics.hpp"
#include "oracles.hpp"

using namespace fourlevel;
namespace to = testing_oracles;

TEST(DensityMatrix, Validation) {
  EXPECT_NO_THROW(DensityMatrix::pure(3));
  EXPECT_THROW(DensityMatrix::pure(0), DensityMatrixError);
  EXPECT_THROW(DensityMatrix::pure(5), DensityMatrixError);
  Matrix4 m = Matrix4::Identity() / 2.0;
  EXPECT_THROW(DensityMatrix{m}, DensityMatrixError);
  m = Matrix4::Zero();
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix{m}, DensityMatrixError);
  m = Matrix4::Identity() / 4.0;
  m(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{m}, DensityMatrixError);
}

TEST(Eta, Examples) {
  for (double e : rho_to_eta(DensityMatrix())) EXPECT_NEAR(e, 0.0, 1e-16);
  const CoherenceVector p = rho_to_eta(DensityMatrix::pure(1));
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_NEAR(p[1], 1.0 / std::sqrt(3.0), 1e-16);
  EXPECT_NEAR(p[2], 1.0 / std::sqrt(6.0), 1e-16);
  for (int k = 3; k < 15; ++k) EXPECT_EQ(p[k], 0.0);

  Matrix4 m = Matrix4::Identity() / 4.0;
  m(0, 1) = Complex(0.1, 0.05);
  m(1, 0) = std::conj(m(0, 1));
  const CoherenceVector q = rho_to_eta(DensityMatrix(m));
  EXPECT_NEAR(q[3], 0.2, 1e-16);
  EXPECT_NEAR(q[4], -0.1, 1e-16);
}

TEST(Eta, InverseExamples) {
  const DensityMatrix mixed = eta_to_rho(CoherenceVector{});
  EXPECT_LT((mixed.mat() - Matrix4::Identity() / 4.0).norm(), 1e-16);
  CoherenceVector half = rho_to_eta(DensityMatrix::pure(1));
  EXPECT_LT((eta_to_rho(half).mat() - DensityMatrix::pure(1).mat()).norm(), 1e-15);
  for (double& e : half) e *= 0.5;
  const auto es = eig_hermitian(eta_to_rho(half).mat());
  EXPECT_NEAR(es.eigenvalues(3), 5.0 / 8, 1e-15);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(es.eigenvalues(k), 1.0 / 8, 1e-15);
}

TEST(Eta, RandomRoundTrips) {
  std::mt19937_64 rng(100);
  for (int n = 0; n < 100; ++n) {
    const DensityMatrix rho(to::random_density(rng));
    const CoherenceVector eta = rho_to_eta(rho);
    EXPECT_LT((eta_to_rho(eta).mat() - rho.mat()).norm(), 1e-12);
    const CoherenceVector back = rho_to_eta(eta_to_rho(eta));
    for (int k = 0; k < 15; ++k) EXPECT_NEAR(back[k], eta[k], 1e-12);
  }
}

TEST(Evolution, PreservesSpectrumAndPurity) {
  std::mt19937_64 rng(8);
  const DensityMatrix rho0(to::random_density(rng));
  std::vector<Matrix4> us;
  for (int i = 0; i < 10; ++i) us.push_back(to::random_unitary(rng));
  const auto e0 = eig_hermitian(rho0.mat()).eigenvalues;
  for (const auto& r : evolve_density(us, rho0)) {
    EXPECT_NEAR(r.mat().trace().real(), 1.0, 1e-12);
    EXPECT_NEAR(purity(r), purity(rho0), 1e-12);
    EXPECT_LT((eig_hermitian(r.mat()).eigenvalues - e0).norm(), 1e-12);
  }
  const auto same = evolve_density({Matrix4::Identity()}, rho0);
  EXPECT_LT((same[0].mat() - rho0.mat()).norm(), 1e-16);
}

TEST(Damping, SpectrumOfDampedPureState) {
  std::mt19937_64 rng(12);
  const Matrix4 u = to::random_unitary(rng);
  const std::vector<double> t = {0.0, 0.5, 2.0, 7.0};
  const double gamma = 0.5;
  const auto undamped = evolve_density(std::vector<Matrix4>(t.size(), u), DensityMatrix::pure(2));
  const auto damped = apply_uniform_damping(undamped, t, gamma);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double f = std::exp(-gamma * t[i]);
    const auto ev = eig_hermitian(damped[i].mat()).eigenvalues;
    EXPECT_NEAR(ev(3), 0.25 + 0.75 * f, 1e-12);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(ev(k), 0.25 - 0.25 * f, 1e-12);
    for (int k = 0; k < 4; ++k) EXPECT_LE(std::abs(damped[i].mat()(k, k).real() - 0.25), f + 1e-15);
    // affine form
    EXPECT_LT((damped[i].mat() - (Matrix4::Identity() / 4.0 + f * (undamped[i].mat() - Matrix4::Identity() / 4.0))).norm(),
              1e-15);
  }
}

TEST(Damping, ZeroRateAndLongTimes) {
  const std::vector<DensityMatrix> rho = {DensityMatrix::pure(1), DensityMatrix::pure(4)};
  const auto same = apply_uniform_damping(rho, {0.0, 3.0}, 0.0);
  EXPECT_EQ(same[1].mat(), rho[1].mat());
  const auto late = apply_uniform_damping(rho, {0.0, 200.0}, 0.5);
  EXPECT_LT((late[1].mat() - Matrix4::Identity() / 4.0).norm(), 1e-15);
  EXPECT_THROW(apply_uniform_damping(rho, {0.0, 1.0}, -0.1), std::invalid_argument);
  EXPECT_THROW(apply_uniform_damping(rho, {0.0}, 0.1), std::invalid_argument);
}

TEST(Entropy, PureMixedAndIntermediate) {
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::pure(1)), 0.0, 1e-15);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix()), std::log(4.0), 1e-15);
  Matrix4 m = Matrix4::Zero();
  m.diagonal() << 0.5, 0.5, 0.0, 0.0;
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix(m)), std::log(2.0), 1e-15);
  std::mt19937_64 rng(6);
  const Matrix4 u = to::random_unitary(rng);
  m.diagonal() << 0.1, 0.2, 0.3, 0.4;
  const double s = -(0.1 * std::log(0.1) + 0.2 * std::log(0.2) + 0.3 * std::log(0.3) + 0.4 * std::log(0.4));
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix(Matrix4(u * m * u.adjoint()))), s, 1e-13);
}

TEST(Entropy, MonotoneUnderDampingOfPureState) {
  std::mt19937_64 rng(21);
  const Matrix4 u = to::random_unitary(rng);
  const DensityMatrix rho = evolve_density({u}, DensityMatrix::pure(1))[0];
  double prev = -1.0;
  for (int i = 0; i <= 400; ++i) {
    const double t = 0.1 * i;
    const double s = von_neumann_entropy(apply_uniform_damping({rho}, {t}, 0.5)[0]);
    EXPECT_GE(s, prev) << t;
    prev = s;
  }
  EXPECT_NEAR(prev, std::log(4.0), 1e-12);
}

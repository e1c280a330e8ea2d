#include <gtest/gtest.h>

#include <random>

#include "fourlevel/linalg.hpp"
#include "fourlevel/model.hpp"
#include "oracles.hpp"

using namespace fourlevel;
namespace to = testing_oracles;

TEST(Commutator, PauliRelations) {
  using namespace pauli;
  const Eigen::Matrix2cd c = commutator(x(), y());
  EXPECT_LT((c - 2.0 * kI * z()).norm(), 1e-15);
}

TEST(Commutator, ShapeMismatchThrows) {
  const ComplexMatrix a = ComplexMatrix::Identity(3, 3);
  const ComplexMatrix b = ComplexMatrix::Identity(4, 4);
  EXPECT_THROW(commutator(a, b), DimensionError);
  EXPECT_THROW(trace_inner(a, b), DimensionError);
}

TEST(Hermitian, DetectsAsymmetry) {
  Matrix4 h = Matrix4::Identity();
  EXPECT_TRUE(is_hermitian(h));
  h(0, 1) = kI;
  EXPECT_FALSE(is_hermitian(h));
  h(1, 0) = -kI;
  EXPECT_TRUE(is_hermitian(h));
}

TEST(Expm, ZeroAndDiagonal) {
  EXPECT_LT((expm(Matrix4(Matrix4::Zero())) - Matrix4::Identity()).norm(), 1e-15);
  Matrix4 d = Matrix4::Zero();
  d.diagonal() << 0.3, -1.2, Complex(0.0, 2.5), Complex(4.0, -7.0);
  const Matrix4 e = expm(d);
  for (int i = 0; i < 4; ++i) EXPECT_LT(std::abs(e(i, i) - std::exp(d(i, i))), 1e-13 * std::abs(std::exp(d(i, i))));
}

TEST(Expm, MatchesTaylorOracleAcrossNormRanges) {
  std::mt19937_64 rng(11);
  for (double scale : {1e-3, 0.05, 0.3, 1.0, 3.0, 20.0}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Matrix4 h = to::random_hermitian(rng, scale);
      std::normal_distribution<double> n(0.0, scale);
      Matrix4 g;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = Complex(n(rng), n(rng));
      for (const Matrix4& a : {Matrix4(-kI * h), g}) {
        const Eigen::MatrixXcd ref = to::taylor_expm(a);
        EXPECT_LT((expm(a) - ref).norm(), 1e-12 * std::max(1.0, ref.norm())) << "scale " << scale;
      }
    }
  }
}

TEST(Expm, NilpotentIsExactlyTwoTerms) {
  Matrix4 n = Matrix4::Zero();
  n(0, 3) = 2.5;
  EXPECT_LT((expm(n) - (Matrix4::Identity() + n)).norm(), 1e-15);
}

TEST(Expm, InverseAndUnitarityProperty) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix4 h = to::random_hermitian(rng, 4.0);
    const Matrix4 u = expm(Matrix4(-kI * h));
    EXPECT_LT(unitarity_defect(u), 1e-12);
    EXPECT_LT((u * expm(Matrix4(kI * h)) - Matrix4::Identity()).norm(), 1e-12);
  }
}

TEST(Expm, RejectsNonFiniteAndNonSquare) {
  Matrix4 a = Matrix4::Zero();
  a(1, 2) = std::nan("");
  EXPECT_THROW(expm(a), NumericalError);
  EXPECT_THROW(expm(ComplexMatrix(2, 3)), DimensionError);
}

TEST(EigHermitian, ReconstructsAndSortsRandomMatrices) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix4 h = to::random_hermitian(rng, 2.0);
    const auto es = eig_hermitian(h);
    const ComplexMatrix back = es.eigenvectors * es.eigenvalues.cast<Complex>().asDiagonal() *
                               es.eigenvectors.adjoint();
    EXPECT_LT((back - h).norm(), tol::eig_reconstruct);
    for (int k = 1; k < 4; ++k) EXPECT_LE(es.eigenvalues(k - 1), es.eigenvalues(k));
  }
}

TEST(EigHermitian, JosephsonEigenvaluesAreCharacteristicRoots) {
  JosephsonParams p;
  p.E00 = 0.8 + 3.925;
  p.E10 = 0.8 - 3.925;
  p.EJ1_amp = 13.4;
  p.EJ2_amp = 9.1;
  const Matrix4 h = josephson_hamiltonian(p, 0.0);
  const auto es = eig_hermitian(h);
  const auto poly = to::char_poly(h);
  const double scale = std::pow(h.norm(), 4);
  for (int k = 0; k < 4; ++k) EXPECT_LT(std::abs(to::poly_eval(poly, es.eigenvalues(k))), 1e-12 * scale);
  // spectrum symmetric about (E00 + E10)/2
  const double centre = 0.5 * (p.E00 + p.E10);
  for (int k = 0; k < 2; ++k)
    EXPECT_NEAR(es.eigenvalues(k) + es.eigenvalues(3 - k), 2.0 * centre, 1e-12);
}

TEST(EigHermitian, RejectsNonHermitian) {
  Matrix4 a = Matrix4::Zero();
  a(0, 1) = 1.0;
  EXPECT_THROW(eig_hermitian(a), NumericalError);
}

TEST(Kron, OrderingPutsFirstFactorOnOuterIndex) {
  using namespace pauli;
  const Matrix4 zx = kron(z(), x());
  EXPECT_EQ(zx(0, 1), Complex(1.0));
  EXPECT_EQ(zx(2, 3), Complex(-1.0));
  EXPECT_EQ(zx(0, 2), Complex(0.0));
}

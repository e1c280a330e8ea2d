#include <gtest/gtest.h>

#include <numbers>

#include "fourlevel/model.hpp"

using namespace fourlevel;

namespace {

JosephsonParams paper_params(double sum = 0.0) {
  JosephsonParams p;
  p.E00 = 0.5 * (sum + 7.85);
  p.E10 = 0.5 * (sum - 7.85);
  p.EJ1_amp = 13.4;
  p.EJ2_amp = 9.1;
  p.modulation = Modulation::Harmonic;
  return p;
}

}  // namespace

TEST(Josephson, HermitianWithExpectedEntries) {
  const JosephsonParams p = paper_params(1.0);
  const Matrix4 h = josephson_hamiltonian(p, 0.0);
  EXPECT_TRUE(is_hermitian(h));
  EXPECT_DOUBLE_EQ(h(0, 0).real(), p.E00);
  EXPECT_DOUBLE_EQ(h(1, 1).real(), p.E10);
  EXPECT_DOUBLE_EQ(h(0, 1).real(), -0.5 * 13.4);
  EXPECT_DOUBLE_EQ(h(0, 2).real(), -0.5 * 9.1);
  EXPECT_EQ(h(0, 3), Complex(0.0));
}

TEST(Josephson, HarmonicModulationWithPhase) {
  JosephsonParams p = paper_params();
  p.delta = std::numbers::pi / 4;
  const double t = 0.7;
  EXPECT_DOUBLE_EQ(p.EJ1(t), 13.4 * std::cos(t + std::numbers::pi / 4));
  EXPECT_DOUBLE_EQ(p.EJ2(t), 9.1 * std::cos(t));
  p.modulation = Modulation::Constant;
  EXPECT_DOUBLE_EQ(p.EJ1(t), 13.4);
}

TEST(Josephson, ValidateRejectsBadParams) {
  JosephsonParams p = paper_params();
  p.mod_omega = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = paper_params();
  p.E00 = std::nan("");
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Decompose, OperatorBasisCoefficients) {
  const OperatorBasis b = build_operator_basis();
  const JosephsonParams p = paper_params(0.6);
  const auto c = decompose_in_basis(josephson_hamiltonian(p, 0.0), b);
  EXPECT_NEAR(c[0].real(), 0.5 * (p.E00 + p.E10), 1e-14);
  EXPECT_NEAR(c[4].real(), -p.EJ2(0.0), 1e-14);
  EXPECT_NEAR(c[8].real(), -p.EJ1(0.0), 1e-14);
  EXPECT_NEAR(c[3].real(), 2.0 * (p.E00 - p.E10), 1e-13);
  for (int k : {1, 2, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15}) EXPECT_LT(std::abs(c[k]), 1e-14) << k + 1;
}

TEST(Decompose, ThreeFormsAgreeAtAllSampledTimes) {
  const OperatorBasis b = build_operator_basis();
  JosephsonParams p = paper_params(-0.4);
  p.delta = 1.1;
  const DriveFunctions d = drive_functions(p);
  for (double t = 0.0; t < 12.0; t += 0.37) {
    const Matrix4 h = josephson_hamiltonian(p, t);
    EXPECT_LT((reconstruct(decompose_in_basis(h, b), b) - h).norm(), 1e-12);
    EXPECT_LT((pseudo_spin_hamiltonian(d, t) - h).norm(), 1e-12);
  }
}

TEST(Drives, PaperValuesAtTimeZero) {
  const DriveFunctions d = drive_functions(paper_params());
  EXPECT_NEAR(d.omega_minus(0.0), 4.3, 1e-14);
  EXPECT_NEAR(d.omega_plus(0.0), -22.5, 1e-14);
  EXPECT_DOUBLE_EQ(d.K_plus, 3.925);
  EXPECT_DOUBLE_EQ(d.k_plus, -3.925);
  EXPECT_DOUBLE_EQ(d.Omega0_rate, 0.0);
}

TEST(NearestNeighbourModel, RealSymmetricTridiagonal) {
  const Matrix4 h = nearest_neighbor_hamiltonian(NearestNeighborParams::constant(1.0, 2.0, 3.0), 0.0);
  EXPECT_TRUE(is_hermitian(h));
  EXPECT_EQ(h(1, 2), Complex(2.0));
  EXPECT_EQ(h(0, 2), Complex(0.0));
  NearestNeighborParams bad = NearestNeighborParams::constant(1.0, 2.0, 3.0);
  bad.beta = [](double) { return std::nan(""); };
  EXPECT_THROW(nearest_neighbor_hamiltonian(bad, 0.0), std::invalid_argument);
}

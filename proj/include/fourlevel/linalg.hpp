// linalg.hpp - small dense complex matrix helpers (commutators, expm, Hermitian eigensystems)

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace fourlevel {

using Complex = std::complex<double>;

/// Generic n x n complex matrix (so(n) checks, closure bookkeeping).
using ComplexMatrix = Eigen::MatrixXcd;
/// Fixed 4 x 4 fast path used for everything two-qubit.
using Matrix4 = Eigen::Matrix4cd;

inline constexpr Complex kI{0.0, 1.0};

/// Numerical tolerances shared by every module.
namespace tol {
inline constexpr double hermitian = 1e-12;      // relative, ||A - A^+||_F <= tol * ||A||_F
inline constexpr double unitary = 1e-9;         // ||A^+ A - I||_F
inline constexpr double eig_reconstruct = 1e-10;
inline constexpr double span_rank = 1e-8;       // Gram-rank threshold for span comparisons
inline constexpr double coefficient_snap = 1e-9;
inline constexpr double expansion_residual = 1e-12;
}  // namespace tol

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename A, typename B>
void require_same_shape(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                        const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": operands must be square and of equal size");
  }
}

/// [a, b] = ab - ba.
template <typename A, typename B>
auto commutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  require_same_shape(a, b, "commutator");
  using Plain = typename A::PlainObject;
  Plain out = a * b;
  out.noalias() -= b * a;
  return out;
}

template <typename A>
double frobenius(const Eigen::MatrixBase<A>& a) {
  return a.norm();
}

/// Trace inner product <a, b> = Tr(a^+ b).
template <typename A, typename B>
Complex trace_inner(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  require_same_shape(a, b, "trace_inner");
  return (a.adjoint() * b).trace();
}

template <typename A>
bool is_hermitian(const Eigen::MatrixBase<A>& a, double rel_tol = tol::hermitian) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  return (a - a.adjoint()).norm() <= rel_tol * (scale > 0.0 ? scale : 1.0);
}

template <typename A>
double unitarity_defect(const Eigen::MatrixBase<A>& a) {
  using Plain = typename A::PlainObject;
  const Plain id = Plain::Identity(a.rows(), a.cols());
  return (a.adjoint() * a - id).norm();
}

template <typename A>
bool is_unitary(const Eigen::MatrixBase<A>& a, double abs_tol = tol::unitary) {
  return a.rows() == a.cols() && unitarity_defect(a) <= abs_tol;
}

namespace detail {

// Pade numerators for degrees 3, 5, 7, 9, 13 (scaling and squaring, Higham 2005).
inline constexpr double kPade3[] = {120.0, 60.0, 12.0, 1.0};
inline constexpr double kPade5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
inline constexpr double kPade7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                    25200.0,    1512.0,    56.0,      1.0};
inline constexpr double kPade9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                    30270240.0,    2162160.0,    110880.0,     3960.0,
                                    90.0,          1.0};
inline constexpr double kPade13[] = {64764752532480000.0, 32382376266240000.0,
                                     7771770303897600.0,  1187353796428800.0,
                                     129060195264000.0,   10559470521600.0,
                                     670442572800.0,      33522128640.0,
                                     1323241920.0,        40840800.0,
                                     960960.0,            16380.0,
                                     182.0,               1.0};

// Largest 1-norm for which each degree is accurate to unit roundoff.
inline constexpr double kTheta3 = 1.495585217958292e-2;
inline constexpr double kTheta5 = 2.539398330063230e-1;
inline constexpr double kTheta7 = 9.504178996162932e-1;
inline constexpr double kTheta9 = 2.097847961257068e0;
inline constexpr double kTheta13 = 5.371920351148152e0;

template <typename M, std::size_t N>
void pade_low(const M& a, const double (&b)[N], M& u, M& v) {
  const M id = M::Identity(a.rows(), a.cols());
  const M a2 = a * a;
  M even_u = b[1] * id;
  M even_v = b[0] * id;
  M power = id;
  for (std::size_t k = 1; 2 * k < N; ++k) {
    power = power * a2;
    even_u += b[2 * k + 1] * power;
    even_v += b[2 * k] * power;
  }
  u = a * even_u;
  v = even_v;
}

template <typename M>
void pade13(const M& a, M& u, M& v) {
  const auto& b = kPade13;
  const M id = M::Identity(a.rows(), a.cols());
  const M a2 = a * a;
  const M a4 = a2 * a2;
  const M a6 = a4 * a2;
  M tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
  M inner = a6 * tmp;
  inner += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  u = a * inner;
  tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v = a6 * tmp;
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace detail

/// Matrix exponential by scaling and squaring with a degree-adaptive Pade approximant.
template <typename A>
typename A::PlainObject expm(const Eigen::MatrixBase<A>& a_in) {
  using M = typename A::PlainObject;
  if (a_in.rows() != a_in.cols()) throw DimensionError("expm: matrix must be square");
  if (!a_in.allFinite()) throw NumericalError("expm: non-finite input");

  M a = a_in;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  M u, v;
  int squarings = 0;
  if (norm1 < detail::kTheta3) {
    detail::pade_low(a, detail::kPade3, u, v);
  } else if (norm1 < detail::kTheta5) {
    detail::pade_low(a, detail::kPade5, u, v);
  } else if (norm1 < detail::kTheta7) {
    detail::pade_low(a, detail::kPade7, u, v);
  } else if (norm1 < detail::kTheta9) {
    detail::pade_low(a, detail::kPade9, u, v);
  } else {
    if (norm1 > detail::kTheta13) {
      squarings = static_cast<int>(std::ceil(std::log2(norm1 / detail::kTheta13)));
      a *= std::ldexp(1.0, -squarings);
    }
    detail::pade13(a, u, v);
  }
  const M numer = v + u;
  const M denom = v - u;
  M result = denom.partialPivLu().solve(numer);
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
struct HermitianEigensystem {
  Eigen::VectorXd eigenvalues;
  ComplexMatrix eigenvectors;
};

template <typename A>
HermitianEigensystem eig_hermitian(const Eigen::MatrixBase<A>& a) {
  if (a.rows() != a.cols()) throw DimensionError("eig_hermitian: matrix must be square");
  if (!is_hermitian(a)) throw NumericalError("eig_hermitian: input is not Hermitian");
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("eig_hermitian: solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Kronecker product of two 2 x 2 factors, first factor acting on the first qubit.
inline Matrix4 kron(const Eigen::Matrix2cd& first, const Eigen::Matrix2cd& second) {
  Matrix4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = first(i, j) * second;
  return out;
}

namespace pauli {
inline Eigen::Matrix2cd id() { return Eigen::Matrix2cd::Identity(); }
inline Eigen::Matrix2cd x() {
  Eigen::Matrix2cd m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
inline Eigen::Matrix2cd y() {
  Eigen::Matrix2cd m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}
inline Eigen::Matrix2cd z() {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

}  // namespace fourlevel

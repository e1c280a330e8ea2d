// model.hpp - Josephson-junction and nearest-neighbour Hamiltonians, basis decomposition, drives
//
// Units: hbar = 1, energies are angular frequencies in rad/ns, time in ns.

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "fourlevel/algebra.hpp"
#include "fourlevel/linalg.hpp"

namespace fourlevel {

enum class Modulation { Constant, Harmonic };

/// Two coupled Josephson qubits. With harmonic modulation
/// E_J1(t) = EJ1_amp cos(w t + delta), E_J2(t) = EJ2_amp cos(w t); E00, E10 stay constant.
struct JosephsonParams {
  double E00 = 0.0;
  double E10 = 0.0;
  double EJ1_amp = 0.0;
  double EJ2_amp = 0.0;
  double mod_omega = 1.0;
  double delta = 0.0;
  Modulation modulation = Modulation::Constant;

  void validate() const {
    for (double v : {E00, E10, EJ1_amp, EJ2_amp, mod_omega, delta})
      if (!std::isfinite(v)) throw std::invalid_argument("JosephsonParams: non-finite value");
    if (modulation == Modulation::Harmonic && !(mod_omega > 0.0))
      throw std::invalid_argument("JosephsonParams: harmonic modulation needs mod_omega > 0");
  }

  double EJ1(double t) const {
    return modulation == Modulation::Harmonic ? EJ1_amp * std::cos(mod_omega * t + delta) : EJ1_amp;
  }
  double EJ2(double t) const {
    return modulation == Modulation::Harmonic ? EJ2_amp * std::cos(mod_omega * t) : EJ2_amp;
  }
};

/// The 4 x 4 two-junction Hamiltonian at time t.
inline Matrix4 josephson_hamiltonian(const JosephsonParams& p, double t) {
  const double j1 = -0.5 * p.EJ1(t);
  const double j2 = -0.5 * p.EJ2(t);
  Matrix4 h;
  h << p.E00, j1, j2, 0.0,  //
      j1, p.E10, 0.0, j2,   //
      j2, 0.0, p.E10, j1,   //
      0.0, j2, j1, p.E00;
  return h;
}

class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficients c_1..c_16 with h = sum c_i O_i.
inline std::array<Complex, OperatorBasis::kSize> decompose_in_basis(const Matrix4& h,
                                                                    const OperatorBasis& basis) {
  const auto c = basis_coefficients(h, basis);
  const double residual = (reconstruct(c, basis) - h).norm();
  if (residual > tol::expansion_residual * std::max(1.0, h.norm()))
    throw DecompositionError("decompose_in_basis: residual " + std::to_string(residual));
  return c;
}

/// Scalar drives of the pseudo-spin form
/// H = Omega0_rate I + (omega_+ S_z + omega_- s_z)/2 + (E00 - E10)(s_+ + s_- - S_+ - S_-)/4.
struct DriveFunctions {
  std::function<double(double)> omega_plus;
  std::function<double(double)> omega_minus;
  double k_plus = 0.0;
  double k_minus = 0.0;
  double K_plus = 0.0;
  double K_minus = 0.0;
  double Omega0_rate = 0.0;
};

/// omega_+- = -E_J2 -+ E_J1, k_+- = -(E00 - E10)/2, K_+- = (E00 - E10)/2.
inline DriveFunctions drive_functions(const JosephsonParams& p) {
  p.validate();
  DriveFunctions d;
  d.omega_plus = [p](double t) { return -p.EJ2(t) - p.EJ1(t); };
  d.omega_minus = [p](double t) { return -p.EJ2(t) + p.EJ1(t); };
  d.k_plus = d.k_minus = -0.5 * (p.E00 - p.E10);
  d.K_plus = d.K_minus = 0.5 * (p.E00 - p.E10);
  d.Omega0_rate = 0.5 * (p.E00 + p.E10);
  return d;
}

/// Rebuilds the Hamiltonian from its drives and the pseudo-spin operators.
inline Matrix4 pseudo_spin_hamiltonian(const DriveFunctions& d, double t) {
  const PseudoSpins ps = pseudo_spin_operators();
  // (E00 - E10)/4 = K/2 = -k/2
  return d.Omega0_rate * Matrix4::Identity() +
         0.5 * (d.omega_plus(t) * ps.S_z + d.omega_minus(t) * ps.s_z) +
         0.5 * d.K_plus * (ps.s_plus + ps.s_minus) + 0.5 * d.k_plus * (ps.S_plus + ps.S_minus);
}

/// H = alpha m12 + beta m23 + gamma m34, each coefficient possibly time dependent.
struct NearestNeighborParams {
  std::function<double(double)> alpha = [](double) { return 0.0; };
  std::function<double(double)> beta = [](double) { return 0.0; };
  std::function<double(double)> gamma = [](double) { return 0.0; };

  static NearestNeighborParams constant(double a, double b, double g) {
    return {[a](double) { return a; }, [b](double) { return b; }, [g](double) { return g; }};
  }
};

inline Matrix4 nearest_neighbor_hamiltonian(const NearestNeighborParams& p, double t) {
  const double a = p.alpha(t), b = p.beta(t), g = p.gamma(t);
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(g))
    throw std::invalid_argument("nearest_neighbor_hamiltonian: non-finite coupling");
  Matrix4 h = Matrix4::Zero();
  h(0, 1) = h(1, 0) = a;
  h(1, 2) = h(2, 1) = b;
  h(2, 3) = h(3, 2) = g;
  return h;
}

}  // namespace fourlevel

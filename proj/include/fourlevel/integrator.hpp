// integrator.hpp - unitary integration of two-qubit Hamiltonians with su(2)+su(2)(+u(1)) structure
//
// For one pseudo-spin set with J_z = s_z/2, J_+- = s_+-/2 and
//   H = omega(t) J_z + k_+ J_+ + k_- J_-,
// the ansatz U = exp(-i mu_+ J_+) exp(-i mu_- J_-) exp(-i mu_3 J_z) solves iU' = HU iff
//   mu_+' - k_- mu_+^2 + i omega mu_+ = k_+        (Riccati)
//   mu_3' - 2i k_- mu_+ = omega                    (quadrature)
//   mu_-' - i mu_- mu_3' = k_-                      (linear, solvable by quadrature)
// with all functions zero at the start of a segment.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fourlevel/algebra.hpp"
#include "fourlevel/linalg.hpp"
#include "fourlevel/model.hpp"
#include "fourlevel/ode.hpp"

namespace fourlevel {

/// Coefficients of one su(2) block: H = omega J_z + k_plus J_+ + k_minus J_-.
struct Su2Drive {
  double k_plus = 0.0;
  double k_minus = 0.0;
  std::function<double(double)> omega = [](double) { return 0.0; };
};

/// Riccati right-hand side k_+ + k_- mu^2 - i omega mu.
inline Complex riccati_rate(const Su2Drive& d, double t, Complex mu) {
  return d.k_plus + d.k_minus * mu * mu - kI * d.omega(t) * mu;
}

enum class RiccatiForm {
  Direct,  // mu_+ itself
  Theta,   // mu_+ = tan(theta + k (t - t0)), theta' = -(i/2) omega sin(2 (theta + k (t - t0)))
  Gamma    // mu_+ = -gamma' / (k gamma),      gamma'' + i omega gamma' + k^2 gamma = 0
};

inline constexpr double kBlowUpThreshold = 1e6;

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RiccatiSolution {
  std::vector<double> t;
  std::vector<Complex> mu_plus;
  /// Set when |mu_+| crossed the blow-up threshold (or the step underflowed); the samples
  /// stop at the last finite point before it.
  std::optional<double> singular_at;
};

/// Solves for mu_+ from mu_+(t0) = 0. Output samples are the solver steps unioned with
/// `outputs` (ascending, all >= t0).
inline RiccatiSolution solve_riccati(const Su2Drive& drive, double t0,
                                     std::span<const double> outputs, RiccatiForm form,
                                     double tol = 1e-10,
                                     double blow_up = kBlowUpThreshold) {
  if (form != RiccatiForm::Direct && drive.k_plus != drive.k_minus)
    throw std::invalid_argument("solve_riccati: Theta and Gamma forms need k_plus == k_minus");
  if (form == RiccatiForm::Gamma && drive.k_plus == 0.0)
    throw std::invalid_argument("solve_riccati: Gamma form needs k != 0");
  const double k = drive.k_plus;

  ode::State y;
  std::function<void(double, const ode::State&, ode::State&)> rhs;
  std::function<Complex(double, const ode::State&)> mu_of;
  switch (form) {
    case RiccatiForm::Direct:
      y = ode::State::Zero(2);
      rhs = [&drive](double t, const ode::State& s, ode::State& ds) {
        const Complex r = riccati_rate(drive, t, {s(0), s(1)});
        ds << r.real(), r.imag();
      };
      mu_of = [](double, const ode::State& s) { return Complex(s(0), s(1)); };
      break;
    case RiccatiForm::Theta:
      y = ode::State::Zero(2);
      rhs = [&drive, k, t0](double t, const ode::State& s, ode::State& ds) {
        const Complex phase = Complex(s(0), s(1)) + k * (t - t0);
        const Complex r = -0.5 * kI * drive.omega(t) * std::sin(2.0 * phase);
        ds << r.real(), r.imag();
      };
      mu_of = [k, t0](double t, const ode::State& s) {
        return std::tan(Complex(s(0), s(1)) + k * (t - t0));
      };
      break;
    case RiccatiForm::Gamma:
      y = ode::State::Zero(4);
      y(0) = 1.0;  // gamma(t0) = 1, gamma'(t0) = 0
      rhs = [&drive, k](double t, const ode::State& s, ode::State& ds) {
        const Complex g(s(0), s(1)), gd(s(2), s(3));
        const Complex gdd = -kI * drive.omega(t) * gd - k * k * g;
        ds << gd.real(), gd.imag(), gdd.real(), gdd.imag();
      };
      mu_of = [k](double, const ode::State& s) {
        return -Complex(s(2), s(3)) / (k * Complex(s(0), s(1)));
      };
      break;
  }

  RiccatiSolution sol;
  ode::Options opt;
  opt.rtol = opt.atol = tol;
  auto observer = [&](double t, const ode::State& s, bool) {
    const Complex mu = mu_of(t, s);
    if (!std::isfinite(std::abs(mu)) || std::abs(mu) > blow_up) {
      sol.singular_at = t;
      return false;
    }
    sol.t.push_back(t);
    sol.mu_plus.push_back(mu);
    return true;
  };
  try {
    ode::integrate(rhs, t0, y, outputs, opt, observer);
  } catch (const ode::StepUnderflow& e) {
    // only a singularity if mu_+ is actually running away
    if (sol.mu_plus.empty() || std::abs(sol.mu_plus.back()) < 1e3)
      throw SolverError(std::string("solve_riccati: ") + e.what() + " at t=" + std::to_string(e.time));
    sol.singular_at = e.time;
  }
  return sol;
}

struct QuadratureResult {
  std::vector<Complex> mu3;
  std::vector<Complex> mu_minus;
};

/// Integrates mu_3' = omega + 2i k_- mu_+ and mu_-' = k_- + i mu_- mu_3' along sampled mu_+.
/// Between samples mu_+ is the cubic Hermite interpolant built from the Riccati rate, and
/// each interval is crossed with `substeps` classical RK4 steps.
inline QuadratureResult integrate_quadratures(std::span<const double> t,
                                              std::span<const Complex> mu_plus,
                                              const Su2Drive& drive, int substeps = 8) {
  if (t.size() != mu_plus.size() || t.empty())
    throw std::invalid_argument("integrate_quadratures: grid and samples differ in size");
  QuadratureResult out;
  out.mu3.assign(t.size(), Complex{});
  out.mu_minus.assign(t.size(), Complex{});
  Complex mu3{}, mum{};
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double ta = t[i], tb = t[i + 1];
    const double h = tb - ta;
    if (!(h > 0.0)) throw std::invalid_argument("integrate_quadratures: grid not increasing");
    const Complex pa = mu_plus[i], pb = mu_plus[i + 1];
    const Complex da = riccati_rate(drive, ta, pa), db = riccati_rate(drive, tb, pb);
    auto mu_plus_at = [&](double tt) {
      const double s = (tt - ta) / h;
      const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
      const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
      return h00 * pa + h10 * h * da + h01 * pb + h11 * h * db;
    };
    auto rates = [&](double tt, Complex m3, Complex mm, Complex& d3, Complex& dm) {
      (void)m3;
      d3 = drive.omega(tt) + 2.0 * kI * drive.k_minus * mu_plus_at(tt);
      dm = drive.k_minus + kI * mm * d3;
    };
    const double dt = h / substeps;
    for (int s = 0; s < substeps; ++s) {
      const double tt = ta + s * dt;
      Complex a3, am, b3, bm, c3, cm, e3, em;
      rates(tt, mu3, mum, a3, am);
      rates(tt + 0.5 * dt, mu3 + 0.5 * dt * a3, mum + 0.5 * dt * am, b3, bm);
      rates(tt + 0.5 * dt, mu3 + 0.5 * dt * b3, mum + 0.5 * dt * bm, c3, cm);
      rates(tt + dt, mu3 + dt * c3, mum + dt * cm, e3, em);
      mu3 += dt / 6.0 * (a3 + 2.0 * b3 + 2.0 * c3 + e3);
      mum += dt / 6.0 * (am + 2.0 * bm + 2.0 * cm + em);
    }
    out.mu3[i + 1] = mu3;
    out.mu_minus[i + 1] = mum;
  }
  return out;
}

/// Sampled exponents of the product form on one segment; every sample is zero-based at
/// grid.front().
struct ClassicalFunctions {
  std::vector<double> grid;
  std::vector<double> Omega0;
  std::vector<Complex> mu_plus, mu_minus, mu3;  // s-spin set
  std::vector<Complex> nu_plus, nu_minus, nu3;  // S-spin set

  std::size_t size() const { return grid.size(); }
};

/// Instantaneous exponent values (one grid point of ClassicalFunctions).
struct ExponentValues {
  double Omega0 = 0.0;
  Complex mu_plus, mu_minus, mu3;
  Complex nu_plus, nu_minus, nu3;
};

/// exp(-i W0) exp(-i nu_+ S_+/2) exp(-i nu_- S_-/2) exp(-i nu_3 S_z/2)
///           exp(-i mu_+ s_+/2) exp(-i mu_- s_-/2) exp(-i mu_3 s_z/2)
inline Matrix4 assemble_product(const ExponentValues& v) {
  static const PseudoSpins ps = pseudo_spin_operators();
  const Matrix4 id = Matrix4::Identity();
  // S_+-, s_+- square to zero, so their exponentials are two-term.
  const Matrix4 u = std::exp(-kI * v.Omega0) *
                    (id - 0.5 * kI * v.nu_plus * ps.S_plus) *
                    (id - 0.5 * kI * v.nu_minus * ps.S_minus) *
                    expm(Matrix4(-0.5 * kI * v.nu3 * ps.S_z)) *
                    (id - 0.5 * kI * v.mu_plus * ps.s_plus) *
                    (id - 0.5 * kI * v.mu_minus * ps.s_minus) *
                    expm(Matrix4(-0.5 * kI * v.mu3 * ps.s_z));
  return u;
}

/// U(t) for a grid point of cf; t must be one of cf.grid exactly.
inline Matrix4 assemble_evolution(const ClassicalFunctions& cf, double t) {
  const auto it = std::lower_bound(cf.grid.begin(), cf.grid.end(), t);
  if (it == cf.grid.end() || *it != t)
    throw std::invalid_argument("assemble_evolution: t is not a grid point");
  const auto i = static_cast<std::size_t>(it - cf.grid.begin());
  return assemble_product({cf.Omega0[i], cf.mu_plus[i], cf.mu_minus[i], cf.mu3[i], cf.nu_plus[i],
                           cf.nu_minus[i], cf.nu3[i]});
}

/// The two su(2) blocks of a Josephson Hamiltonian. The s-spin block (mu) carries
/// omega_- and coupling (E00 - E10)/2 = K; the S-spin block (nu) carries omega_+ and k.
struct BlockDrives {
  Su2Drive s_block;
  Su2Drive S_block;
  double Omega0_rate = 0.0;
};

inline BlockDrives block_drives(const DriveFunctions& d) {
  return {Su2Drive{d.K_plus, d.K_minus, d.omega_minus}, Su2Drive{d.k_plus, d.k_minus, d.omega_plus},
          d.Omega0_rate};
}

struct EvolveOptions {
  double tol = 1e-11;
  /// Restart the product form once any of |mu_+-|, |nu_+-|, |Im mu_3|, |Im nu_3| exceeds this.
  double restart_threshold = 2.0;
  /// Also restart once |Re mu_3|, |Re nu_3| or |Omega0| exceeds this angle, so relative error
  /// control never acts on a large accumulated phase.
  double angle_restart = 2.0 * std::numbers::pi;
  double blow_up = kBlowUpThreshold;
};

struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;
  ClassicalFunctions functions;
  Matrix4 U_start = Matrix4::Identity();
};

struct SegmentedEvolution {
  std::vector<Segment> segments;
  std::vector<double> t;
  std::vector<Matrix4> U;
};

namespace detail {

// State layout: [Omega0, mu_+, mu_-, mu_3, nu_+, nu_-, nu_3] with complex entries split re/im.
inline constexpr int kJointSize = 13;

inline void su2_rates(const Su2Drive& d, double t, Complex p, Complex m, Complex& dp, Complex& dm,
                      Complex& d3) {
  dp = riccati_rate(d, t, p);
  d3 = d.omega(t) + 2.0 * kI * d.k_minus * p;
  dm = d.k_minus + kI * m * d3;
}

inline ExponentValues unpack(const ode::State& s) {
  auto c = [&s](int i) { return Complex(s(i), s(i + 1)); };
  return {s(0), c(1), c(3), c(5), c(7), c(9), c(11)};
}

inline void push_sample(ClassicalFunctions& cf, double t, const ExponentValues& v) {
  cf.grid.push_back(t);
  cf.Omega0.push_back(v.Omega0);
  cf.mu_plus.push_back(v.mu_plus);
  cf.mu_minus.push_back(v.mu_minus);
  cf.mu3.push_back(v.mu3);
  cf.nu_plus.push_back(v.nu_plus);
  cf.nu_minus.push_back(v.nu_minus);
  cf.nu3.push_back(v.nu3);
}

inline double conditioning(const ExponentValues& v) {
  return std::max({std::abs(v.mu_plus), std::abs(v.mu_minus), std::abs(v.nu_plus),
                   std::abs(v.nu_minus), std::abs(v.mu3.imag()), std::abs(v.nu3.imag())});
}

inline double accumulated_angle(const ExponentValues& v) {
  return std::max({std::abs(v.mu3.real()), std::abs(v.nu3.real()), std::abs(v.Omega0)});
}

}  // namespace detail

/// Integrates the joint classical system (both Riccati equations with their quadratures and
/// the phase) across `grid`, restarting the product form whenever it becomes ill-conditioned
/// and composing U(t) = U_segment(t) U(t_restart).
inline SegmentedEvolution evolve(const BlockDrives& drives, std::span<const double> grid,
                                 const EvolveOptions& options = {}) {
  if (grid.empty() || grid.front() != 0.0)
    throw std::invalid_argument("evolve: grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("evolve: grid must be strictly increasing");

  const auto rhs = [&drives](double t, const ode::State& s, ode::State& ds) {
    const ExponentValues v = detail::unpack(s);
    Complex mp, mm, m3, np, nm, n3;
    detail::su2_rates(drives.s_block, t, v.mu_plus, v.mu_minus, mp, mm, m3);
    detail::su2_rates(drives.S_block, t, v.nu_plus, v.nu_minus, np, nm, n3);
    ds << drives.Omega0_rate, mp.real(), mp.imag(), mm.real(), mm.imag(), m3.real(), m3.imag(),
        np.real(), np.imag(), nm.real(), nm.imag(), n3.real(), n3.imag();
  };

  SegmentedEvolution out;
  ode::Options opt;
  opt.rtol = opt.atol = options.tol;

  Matrix4 U_acc = Matrix4::Identity();
  double t_seg = 0.0;
  std::size_t next_grid = 0;
  while (next_grid < grid.size()) {
    Segment seg;
    seg.t_start = t_seg;
    seg.U_start = U_acc;
    ode::State y = ode::State::Zero(detail::kJointSize);
    detail::push_sample(seg.functions, t_seg, detail::unpack(y));
    if (grid[next_grid] == t_seg) {
      out.t.push_back(t_seg);
      out.U.push_back(U_acc);
      ++next_grid;
    }
    if (next_grid == grid.size()) {
      seg.t_end = t_seg;
      out.segments.push_back(std::move(seg));
      break;
    }

    bool restart = false;
    auto observer = [&](double t, const ode::State& s, bool is_output) {
      const ExponentValues v = detail::unpack(s);
      if (std::abs(v.mu_plus) > options.blow_up || std::abs(v.nu_plus) > options.blow_up ||
          !s.allFinite())
        throw SolverError("evolve: exponent blew up at t=" + std::to_string(t));
      detail::push_sample(seg.functions, t, v);
      if (is_output) {
        out.t.push_back(t);
        out.U.push_back(assemble_product(v) * U_acc);
        ++next_grid;
      }
      if (detail::conditioning(v) > options.restart_threshold ||
          detail::accumulated_angle(v) > options.angle_restart) {
        restart = true;
        return false;
      }
      return true;
    };
    double t_reached = 0.0;
    try {
      t_reached = ode::integrate(rhs, t_seg, y, grid.subspan(next_grid), opt, observer);
    } catch (const ode::StepUnderflow& e) {
      throw SolverError(std::string("evolve: ") + e.what() + " at t=" + std::to_string(e.time));
    }
    seg.t_end = t_reached;
    if (restart) {
      U_acc = assemble_product(detail::unpack(y)) * U_acc;
      t_seg = t_reached;
    }
    out.segments.push_back(std::move(seg));
    if (!restart) break;
  }
  return out;
}

inline SegmentedEvolution evolve(const JosephsonParams& p, std::span<const double> grid,
                                 const EvolveOptions& options = {}) {
  return evolve(block_drives(drive_functions(p)), grid, options);
}

}  // namespace fourlevel

// oracle.hpp - brute-force time-ordered propagator (exponential midpoint rule with step halving)

#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fourlevel/linalg.hpp"

namespace fourlevel {

using HamiltonianFn = std::function<Matrix4(double)>;

struct PropagatorSamples {
  std::vector<double> t;
  std::vector<Matrix4> U;
};

struct OracleOptions {
  double tol = 1e-8;
  double initial_step = 0.05;
  int max_levels = 16;
};

struct OracleResult {
  PropagatorSamples samples;
  double step = 0.0;     // largest substep of the accepted level
  double last_diff = 0.0;
  int levels = 0;
};

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// U(t + h) = expm(-i H(t + h/2) h) U(t), with `substeps[i]` equal steps across interval i.
inline PropagatorSamples propagate_midpoint(const HamiltonianFn& h, std::span<const double> grid,
                                            std::span<const long> substeps) {
  PropagatorSamples out;
  if (grid.empty()) return out;
  out.t.assign(grid.begin(), grid.end());
  out.U.reserve(grid.size());
  Matrix4 u = Matrix4::Identity();
  out.U.push_back(u);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double ta = grid[i];
    const long n = substeps[i];
    const double dt = (grid[i + 1] - ta) / static_cast<double>(n);
    for (long j = 0; j < n; ++j) {
      const double tm = ta + (static_cast<double>(j) + 0.5) * dt;
      const Matrix4 step = expm(Matrix4(-kI * dt * h(tm)));
      u = step * u;
    }
    out.U.push_back(u);
  }
  return out;
}

struct PropagatorDeviation {
  double max_dev = 0.0;
  double argmax_t = 0.0;
};

/// Max over the grid of ||U_a - U_b||_F. Global phases count.
inline PropagatorDeviation compare_propagators(const PropagatorSamples& a,
                                               const PropagatorSamples& b) {
  if (a.t != b.t || a.U.size() != b.U.size() || a.U.size() != a.t.size())
    throw std::invalid_argument("compare_propagators: grids differ");
  PropagatorDeviation d;
  if (!a.t.empty()) d.argmax_t = a.t.front();
  for (std::size_t i = 0; i < a.U.size(); ++i) {
    const double dev = (a.U[i] - b.U[i]).norm();
    if (dev > d.max_dev) {
      d.max_dev = dev;
      d.argmax_t = a.t[i];
    }
  }
  return d;
}

/// Halves the midpoint step until two successive levels agree to `tol` at every grid point.
inline OracleResult propagate_direct(const HamiltonianFn& h, std::span<const double> grid,
                                     const OracleOptions& opt = {}) {
  if (grid.empty() || grid.front() != 0.0)
    throw std::invalid_argument("propagate_direct: grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("propagate_direct: grid must increase");
  for (double t : grid)
    if (!is_hermitian(h(t))) throw OracleError("propagate_direct: H(" + std::to_string(t) + ") is not Hermitian");

  std::vector<long> n(grid.size() > 0 ? grid.size() - 1 : 0);
  for (std::size_t i = 0; i < n.size(); ++i)
    n[i] = std::max(1L, static_cast<long>(std::ceil((grid[i + 1] - grid[i]) / opt.initial_step)));

  auto largest_step = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) s = std::max(s, (grid[i + 1] - grid[i]) / n[i]);
    return s;
  };

  OracleResult res;
  PropagatorSamples coarse = propagate_midpoint(h, grid, n);
  for (int level = 1; level <= opt.max_levels; ++level) {
    for (auto& v : n) v *= 2;
    PropagatorSamples fine = propagate_midpoint(h, grid, n);
    const double diff = compare_propagators(coarse, fine).max_dev;
    res.levels = level;
    res.last_diff = diff;
    if (diff < opt.tol) {
      res.samples = std::move(fine);
      res.step = largest_step();
      return res;
    }
    coarse = std::move(fine);
  }
  throw OracleError("propagate_direct: no convergence to " + std::to_string(opt.tol) + " after " +
                    std::to_string(opt.max_levels) + " halvings (last difference " +
                    std::to_string(res.last_diff) + ")");
}

}  // namespace fourlevel

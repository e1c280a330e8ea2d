// verify.hpp - the algebraic verification suite run by `fourlevel verify`

#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fourlevel/algebra.hpp"
#include "fourlevel/model.hpp"

namespace fourlevel {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  std::vector<TableMismatch> table_mismatches;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
  }
};

namespace detail {

inline std::string describe(const TableEntry& e) {
  if (e.is_zero()) return "0";
  std::ostringstream s;
  s << "(" << e.coefficient.real() << "," << e.coefficient.imag() << ")*O_" << e.index;
  return s.str();
}

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline std::vector<ComplexMatrix> ops(const OperatorBasis& b, std::initializer_list<int> idx) {
  std::vector<ComplexMatrix> v;
  for (int i : idx) v.emplace_back(b.op(i));
  return v;
}

inline std::vector<ComplexMatrix> transformed(const std::vector<ComplexMatrix>& v) {
  std::vector<ComplexMatrix> out;
  for (const auto& m : v) out.emplace_back(bell_similarity_transform(Matrix4(m)));
  return out;
}

}  // namespace detail

/// Runs every algebraic check. `reference` replaces the built-in reference table.
inline VerifyReport run_verify(const std::optional<CommutatorTable>& reference = std::nullopt) {
  VerifyReport rep;
  const auto add = [&rep](std::string name, bool ok, std::string detail = {}) {
    rep.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  const OperatorBasis basis = build_operator_basis();

  // basis
  {
    bool ok = true;
    for (int i = 1; i <= 16; ++i) {
      const Matrix4& a = basis.op(i);
      ok = ok && is_hermitian(a);
      if (i > 1) ok = ok && std::abs(a.trace()) < 1e-14;
      for (int j = 1; j < i; ++j) ok = ok && std::abs(trace_inner(a, basis.op(j))) < 1e-14;
    }
    add("basis: Hermitian, traceless (O_2..O_16), trace-orthogonal", ok);
  }

  // commutator table
  const CommutatorTable computed = compute_commutator_table(basis);
  {
    const TableReport tr = reference ? verify_reference_table(computed, *reference)
                                     : verify_reference_table(computed);
    rep.table_mismatches = tr.mismatches;
    std::string detail = std::to_string(tr.mismatches.size()) + " of 225 cells differ";
    for (const auto& m : tr.mismatches)
      detail += "; (" + std::to_string(m.i) + "," + std::to_string(m.j) + ") expected " +
                detail::describe(m.expected) + " got " + detail::describe(m.actual);
    add("table: computed equals reference", tr.passed(), detail);
  }
  add("table: computed is antisymmetric", antisymmetry_violations(computed).empty());
  {
    const auto bad = antisymmetry_violations(printed_commutator_table());
    const bool ok = bad.size() == kPrintedTableErrata.size() &&
                    std::equal(bad.begin(), bad.end(), kPrintedTableErrata.begin());
    add("table: printed antisymmetry violations are exactly the documented errata", ok,
        std::to_string(bad.size()) + " violations");
  }

  // su(2) + su(2) sets
  const auto su2_pair = [&](const std::string& name, std::initializer_list<int> a,
                            std::initializer_list<int> b) {
    const auto va = detail::ops(basis, a), vb = detail::ops(basis, b);
    std::vector<int> all(a);
    all.insert(all.end(), b.begin(), b.end());
    const bool ok = is_su2_triplet(va[0], va[1], va[2]) && is_su2_triplet(vb[0], vb[1], vb[2]) &&
                    mutually_commuting(va, vb) && is_closed_subalgebra(basis_subset(basis, all, name)).closed;
    add("subalgebra: " + name + " is two commuting su(2) triplets", ok);
  };
  su2_pair("(O2,O5,O6;O3,O9,O10)", {2, 5, 6}, {3, 9, 10});
  su2_pair("(O9,O8,O14;O6,O11,O13)", {9, 8, 14}, {6, 11, 13});

  {
    const std::vector<int> six = {9, 8, 14, 6, 11, 13};
    std::string detail;
    bool ok = true;
    for (int k = 2; k <= 16; ++k) {
      if (std::find(six.begin(), six.end(), k) != six.end()) continue;
      std::vector<int> v = six;
      v.push_back(k);
      const auto dim = is_closed_subalgebra(basis_subset(basis, v, "adjoin")).closure.size();
      ok = ok && dim == 15;
      detail += (detail.empty() ? "" : " ") + std::to_string(k) + ":" + std::to_string(dim);
    }
    add("subalgebra: adjoining any outside O_k to (O9,O8,O14,O6,O11,O13) generates su(4)", ok, detail);
  }

  // zero-pattern sets
  for (int i = CommutatorTable::kFirst; i <= CommutatorTable::kLast; ++i) {
    const std::vector<int> cols = computed.zero_columns(i);
    std::string members;
    for (int c : cols) members += (members.empty() ? "" : ",") + std::to_string(c);
    const bool ok = cols.size() == 7 &&
                    is_closed_subalgebra(basis_subset(basis, cols, "zero pattern")).closed;
    add("zero-pattern set of row O_" + std::to_string(i) + " {" + members + "} is closed", ok);
  }

  // Bell transform
  {
    double worst = 0.0;
    for (int i = 2; i <= 16; ++i)
      for (int j = 2; j <= 16; ++j) {
        const Matrix4 lhs = bell_similarity_transform(commutator(basis.op(i), basis.op(j)));
        const Matrix4 rhs = commutator(bell_similarity_transform(basis.op(i)),
                                       bell_similarity_transform(basis.op(j)));
        worst = std::max(worst, (lhs - rhs).norm());
      }
    add("bell: transform preserves all commutators", worst < 1e-12, "max residual " + detail::sci(worst));
  }
  {
    const auto local = detail::ops(basis, {2, 5, 6, 3, 9, 10});
    const auto bell = detail::ops(basis, {9, 8, 14, 6, 11, 13});
    const double d = subspace_distance(detail::transformed(local), bell);
    add("bell: maps span(O2,O5,O6,O3,O9,O10) onto span(O9,O8,O14,O6,O11,O13)", d <= 1e-10,
        "subspace distance " + detail::sci(d));
  }
  {
    const double ds = subspace_distance(detail::transformed(detail::ops(basis, {2, 5, 6})),
                                        detail::ops(basis, {6, 11, 13}));
    const double dt = subspace_distance(detail::transformed(detail::ops(basis, {3, 9, 10})),
                                        detail::ops(basis, {9, 8, 14}));
    add("bell: (O2,O5,O6) -> span(O6,O11,O13) and (O3,O9,O10) -> span(O9,O8,O14)",
        ds <= 1e-10 && dt <= 1e-10,
        "subspace distances " + detail::sci(ds) + ", " + detail::sci(dt));
  }

  // pseudo-spins
  {
    const PseudoSpins p = pseudo_spin_operators();
    const Matrix4 I = Matrix4::Identity();
    const Matrix4 sxtx = 4.0 * basis.op(13);
    const auto near = [](const Matrix4& a, const Matrix4& b) { return (a - b).norm() < 1e-12; };
    bool ok = true;
    for (const auto& [z, plus, minus] : {std::tuple{p.S_z, p.S_plus, p.S_minus},
                                         std::tuple{p.s_z, p.s_plus, p.s_minus}}) {
      ok = ok && near(commutator(z, plus), 2.0 * plus) && near(commutator(z, minus), -2.0 * minus) &&
           near(commutator(plus, minus), 4.0 * z) && near(plus * plus, Matrix4::Zero()) &&
           near(plus.adjoint(), minus) && is_hermitian(z);
    }
    const std::vector<ComplexMatrix> big = {p.S_z, p.S_plus, p.S_minus};
    const std::vector<ComplexMatrix> small = {p.s_z, p.s_plus, p.s_minus};
    ok = ok && mutually_commuting(big, small);
    ok = ok && near(p.S_z * p.S_z, 0.5 * (I + sxtx)) && near(p.s_z * p.s_z, 0.5 * (I - sxtx));
    add("pseudo-spin: su(2) relations, nilpotent raising operators, mutual commutation, squares", ok);
  }

  // so(n)
  {
    bool ok = true;
    std::string detail;
    for (int n = 3; n <= 8; ++n) {
      SubalgebraSpec s{"so(" + std::to_string(n) + ")", {}, {}};
      for (int j = 1; j < n; ++j) s.generators.push_back(nearest_neighbor_generator(n, j, j + 1));
      const auto dim = is_closed_subalgebra(s).closure.size();
      ok = ok && dim == static_cast<std::size_t>(n * (n - 1) / 2);
      detail += (detail.empty() ? "" : " ") + std::to_string(n) + ":" + std::to_string(dim);
    }
    add("so(n): nearest-neighbour generators close at n(n-1)/2 for n = 3..8", ok, detail);
  }
  try {
    const So4Triplets t = so4_commuting_triplets(basis);
    add("so(4): unique commuting triplet split matches (O9,O8,O14;O11,O6,O13)", true,
        "signs (+," + std::string(t.signs[1] > 0 ? "+" : "-") + "," + (t.signs[2] > 0 ? "+" : "-") + ")");
  } catch (const NumericalError& e) {
    add("so(4): unique commuting triplet split matches (O9,O8,O14;O11,O6,O13)", false, e.what());
  }

  // Hamiltonian forms
  {
    JosephsonParams p;
    p.E00 = 0.3 + 3.925;
    p.E10 = 0.3 - 3.925;
    p.EJ1_amp = 13.4;
    p.EJ2_amp = 9.1;
    p.delta = 0.7;
    p.modulation = Modulation::Harmonic;
    const DriveFunctions d = drive_functions(p);
    double worst = 0.0;
    for (double t : {0.0, 0.37, 1.9, 4.2}) {
      worst = std::max(worst, (josephson_hamiltonian(p, t) - pseudo_spin_hamiltonian(d, t)).norm());
      worst = std::max(worst, (reconstruct(decompose_in_basis(josephson_hamiltonian(p, t), basis), basis) -
                               josephson_hamiltonian(p, t)).norm());
    }
    add("model: matrix, operator-basis and pseudo-spin Hamiltonians agree", worst < 1e-12,
        "max residual " + detail::sci(worst));
  }
  return rep;
}

inline nlohmann::json verify_json(const VerifyReport& rep) {
  nlohmann::json j;
  j["passed"] = rep.passed();
  j["failures"] = rep.failures();
  for (const auto& c : rep.checks) j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["table_mismatches"] = nlohmann::json::array();
  for (const auto& m : rep.table_mismatches)
    j["table_mismatches"].push_back({{"i", m.i}, {"j", m.j}, {"expected", detail::describe(m.expected)},
                                     {"actual", detail::describe(m.actual)}});
  return j;
}

}  // namespace fourlevel

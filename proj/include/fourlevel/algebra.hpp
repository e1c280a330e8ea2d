// algebra.hpp - the 16-operator two-qubit basis, its commutator table, and su(4) sub-algebra tools

#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fourlevel/linalg.hpp"

namespace fourlevel {

/// The operators O_1..O_16: identity, halved single-qubit Paulis and quartered products.
/// sigma acts on the first qubit, tau on the second; state order is
/// |uu>, |ud>, |du>, |dd>.
struct OperatorBasis {
  static constexpr int kSize = 16;

  std::array<Matrix4, kSize> ops;
  std::array<std::string, kSize> labels;

  /// 1-based access matching the published table.
  const Matrix4& op(int index) const { return ops.at(static_cast<std::size_t>(index - 1)); }
  const std::string& label(int index) const { return labels.at(static_cast<std::size_t>(index - 1)); }
};

inline OperatorBasis build_operator_basis() {
  using namespace pauli;
  OperatorBasis b;
  struct Def {
    Eigen::Matrix2cd first, second;
    double scale;
    const char* label;
  };
  const Def defs[OperatorBasis::kSize] = {
      {id(), id(), 1.0, "I"},        {z(), id(), 0.5, "sz/2"},      {id(), z(), 0.5, "tz/2"},
      {z(), z(), 0.25, "sz*tz/4"},   {x(), id(), 0.5, "sx/2"},      {y(), id(), 0.5, "sy/2"},
      {x(), z(), 0.25, "sx*tz/4"},   {y(), z(), 0.25, "sy*tz/4"},   {id(), x(), 0.5, "tx/2"},
      {id(), y(), 0.5, "ty/2"},      {z(), x(), 0.25, "sz*tx/4"},   {z(), y(), 0.25, "sz*ty/4"},
      {x(), x(), 0.25, "sx*tx/4"},   {y(), y(), 0.25, "sy*ty/4"},   {x(), y(), 0.25, "sx*ty/4"},
      {y(), x(), 0.25, "sy*tx/4"},
  };
  for (int i = 0; i < OperatorBasis::kSize; ++i) {
    b.ops[i] = defs[i].scale * kron(defs[i].first, defs[i].second);
    b.labels[i] = defs[i].label;
  }
  return b;
}

// ---------------------------------------------------------------------------
// Commutator table

/// One cell of the table: [O_i, O_j] = coefficient * O_index, or zero (index 0).
struct TableEntry {
  Complex coefficient{0.0, 0.0};
  int index = 0;

  bool is_zero() const { return index == 0; }
  friend bool operator==(const TableEntry& a, const TableEntry& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.index == b.index && a.coefficient == b.coefficient;
  }
  TableEntry negated() const { return is_zero() ? *this : TableEntry{-coefficient, index}; }
};

/// Structure constants of the 15 traceless operators, indices 2..16.
class CommutatorTable {
 public:
  static constexpr int kFirst = 2;
  static constexpr int kLast = 16;
  static constexpr int kCount = kLast - kFirst + 1;

  const TableEntry& entry(int i, int j) const { return cells_.at(slot(i, j)); }
  TableEntry& entry(int i, int j) { return cells_.at(slot(i, j)); }

  std::vector<int> zero_columns(int row) const {
    std::vector<int> cols;
    for (int j = kFirst; j <= kLast; ++j)
      if (entry(row, j).is_zero()) cols.push_back(j);
    return cols;
  }

  friend bool operator==(const CommutatorTable&, const CommutatorTable&) = default;

 private:
  static std::size_t slot(int i, int j) {
    if (i < kFirst || i > kLast || j < kFirst || j > kLast)
      throw std::out_of_range("CommutatorTable: index outside 2..16");
    return static_cast<std::size_t>((i - kFirst) * kCount + (j - kFirst));
  }
  std::array<TableEntry, kCount * kCount> cells_{};
};

class TableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expansion coefficients c_k = Tr(m O_k) / Tr(O_k^2) of a 4 x 4 matrix in the basis.
inline std::array<Complex, OperatorBasis::kSize> basis_coefficients(const Matrix4& m,
                                                                    const OperatorBasis& basis) {
  std::array<Complex, OperatorBasis::kSize> c{};
  for (int k = 1; k <= OperatorBasis::kSize; ++k) {
    const Matrix4& o = basis.op(k);
    c[k - 1] = (m * o).trace() / (o * o).trace().real();
  }
  return c;
}

inline Matrix4 reconstruct(const std::array<Complex, OperatorBasis::kSize>& c,
                           const OperatorBasis& basis) {
  Matrix4 m = Matrix4::Zero();
  for (int k = 1; k <= OperatorBasis::kSize; ++k) m += c[k - 1] * basis.op(k);
  return m;
}

namespace detail {
inline double snap_component(double x) {
  for (double exact : {0.0, 1.0, -1.0, 0.25, -0.25})
    if (std::abs(x - exact) <= tol::coefficient_snap) return exact;
  return std::nan("");
}
}  // namespace detail

inline CommutatorTable compute_commutator_table(const OperatorBasis& basis) {
  CommutatorTable table;
  for (int i = CommutatorTable::kFirst; i <= CommutatorTable::kLast; ++i) {
    for (int j = CommutatorTable::kFirst; j <= CommutatorTable::kLast; ++j) {
      const Matrix4 comm = commutator(basis.op(i), basis.op(j));
      const auto c = basis_coefficients(comm, basis);
      const double residual = (reconstruct(c, basis) - comm).norm();
      if (residual > tol::expansion_residual)
        throw TableError("commutator expansion residual too large at (" + std::to_string(i) +
                         "," + std::to_string(j) + ")");
      TableEntry e;
      for (int k = 1; k <= OperatorBasis::kSize; ++k) {
        if (std::abs(c[k - 1]) <= tol::coefficient_snap) continue;
        const double re = detail::snap_component(c[k - 1].real());
        const double im = detail::snap_component(c[k - 1].imag());
        if (std::isnan(re) || std::isnan(im) || re != 0.0)
          throw TableError("commutator coefficient outside {+-i, +-i/4} at (" + std::to_string(i) +
                           "," + std::to_string(j) + ")");
        if (!e.is_zero())
          throw TableError("commutator is not a single basis element at (" + std::to_string(i) +
                           "," + std::to_string(j) + ")");
        e = TableEntry{Complex(0.0, im), k};
      }
      table.entry(i, j) = e;
    }
  }
  return table;
}

namespace detail {

// Cell encoding: {q, k} means (i * q / 4) * O_k; {0, 0} is zero.
struct RefCell {
  int quarter_i;
  int index;
};

// Rows O_2..O_16, columns O_2..O_16, transcribed from the published table of commutators.
inline constexpr RefCell kPrintedTable[15][15] = {
    /* O2  */ {{0, 0}, {0, 0}, {0, 0}, {4, 6}, {-4, 5}, {4, 8}, {-4, 7}, {0, 0}, {0, 0}, {0, 0},
               {0, 0}, {4, 16}, {-4, 15}, {4, 14}, {-4, 13}},
    /* O3  */ {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {4, 10}, {-4, 9}, {4, 12},
               {-4, 11}, {4, 15}, {-4, 16}, {-4, 13}, {4, 14}},
    /* O4  */ {{0, 0}, {0, 0}, {0, 0}, {4, 8}, {-4, 7}, {1, 6}, {-1, 5}, {4, 12}, {-4, 11},
               {1, 10}, {-1, 9}, {0, 0}, {0, 0}, {0, 0}, {0, 0}},
    /* O5  */ {{-4, 6}, {0, 0}, {-4, 8}, {0, 0}, {4, 2}, {0, 0}, {4, 4}, {0, 0}, {0, 0},
               {-4, 16}, {-4, 14}, {0, 0}, {4, 12}, {0, 0}, {4, 11}},
    /* O6  */ {{4, 5}, {0, 0}, {4, 7}, {-4, 2}, {0, 0}, {0, 0}, {-4, 4}, {0, 0}, {0, 0}, {0, 0},
               {4, 15}, {-4, 11}, {0, 0}, {-4, 12}, {0, 0}},
    /* O7  */ {{-4, 8}, {0, 0}, {-1, 6}, {0, 0}, {4, 4}, {0, 0}, {1, 2}, {4, 15}, {-4, 13},
               {0, 0}, {0, 0}, {1, 10}, {0, 0}, {-1, 9}, {0, 0}},
    /* O8  */ {{4, 7}, {0, 0}, {1, 5}, {-4, 4}, {0, 0}, {-1, 2}, {0, 0}, {4, 14}, {-4, 16},
               {0, 0}, {0, 0}, {0, 0}, {-1, 9}, {0, 0}, {1, 10}},
    /* O9  */ {{0, 0}, {-4, 10}, {-4, 12}, {0, 0}, {0, 0}, {-4, 15}, {-4, 14}, {0, 0}, {4, 3},
               {0, 0}, {4, 4}, {0, 0}, {4, 8}, {4, 7}, {0, 0}},
    /* O10 */ {{0, 0}, {4, 9}, {4, 11}, {0, 0}, {0, 0}, {4, 13}, {4, 16}, {-4, 3}, {0, 0},
               {-4, 4}, {0, 0}, {-4, 7}, {0, 0}, {0, 0}, {-4, 8}},
    /* O11 */ {{0, 0}, {-4, 12}, {-1, 10}, {4, 16}, {-4, 13}, {0, 0}, {0, 0}, {0, 0}, {4, 4},
               {0, 0}, {1, 3}, {1, 6}, {0, 0}, {0, 0}, {-1, 5}},
    /* O12 */ {{0, 0}, {4, 11}, {1, 9}, {4, 14}, {-4, 15}, {0, 0}, {0, 0}, {-4, 4}, {0, 0},
               {-1, 3}, {0, 0}, {0, 0}, {-1, 5}, {1, 6}, {0, 0}},
    /* O13 */ {{-4, 16}, {-4, 15}, {0, 0}, {0, 0}, {4, 11}, {-1, 10}, {0, 0}, {0, 0}, {4, 7},
               {-1, 6}, {0, 0}, {0, 0}, {0, 0}, {1, 3}, {1, 2}},
    /* O14 */ {{4, 15}, {4, 16}, {0, 0}, {-4, 12}, {0, 0}, {0, 0}, {1, 9}, {-4, 8}, {0, 0},
               {0, 0}, {1, 5}, {0, 0}, {0, 0}, {-1, 2}, {-1, 3}},
    /* O15 */ {{-4, 14}, {4, 13}, {0, 0}, {0, 0}, {4, 12}, {1, 9}, {0, 0}, {-4, 7}, {0, 0},
               {0, 0}, {-1, 6}, {-1, 3}, {1, 2}, {0, 0}, {0, 0}},
    /* O16 */ {{4, 13}, {-4, 14}, {0, 0}, {-4, 11}, {0, 0}, {0, 0}, {-1, 10}, {0, 0}, {4, 8},
               {1, 5}, {0, 0}, {-1, 2}, {1, 3}, {0, 0}, {0, 0}},
};

}  // namespace detail

/// The published table exactly as printed.
inline CommutatorTable printed_commutator_table() {
  CommutatorTable table;
  for (int r = 0; r < CommutatorTable::kCount; ++r) {
    for (int c = 0; c < CommutatorTable::kCount; ++c) {
      const detail::RefCell cell = detail::kPrintedTable[r][c];
      TableEntry e;
      if (cell.index != 0) e = TableEntry{Complex(0.0, cell.quarter_i / 4.0), cell.index};
      table.entry(r + CommutatorTable::kFirst, c + CommutatorTable::kFirst) = e;
    }
  }
  return table;
}

/// Cells of the printed table that contradict their own antisymmetric partner. The printed
/// row O_6 has eight zeros and disagrees with column O_6 (rows O_7, O_8, O_11); those cells
/// are restored as -entry(j, i).
inline constexpr std::array<std::pair<int, int>, 3> kPrintedTableErrata = {{{6, 7}, {6, 8}, {6, 11}}};

/// Reference data: the printed table with the row O_6 errata restored from antisymmetry.
inline CommutatorTable reference_commutator_table() {
  CommutatorTable table = printed_commutator_table();
  for (const auto& [i, j] : kPrintedTableErrata) table.entry(i, j) = table.entry(j, i).negated();
  return table;
}

/// Cells (i < j) where entry(i, j) != -entry(j, i).
inline std::vector<std::pair<int, int>> antisymmetry_violations(const CommutatorTable& table) {
  std::vector<std::pair<int, int>> bad;
  for (int i = CommutatorTable::kFirst; i <= CommutatorTable::kLast; ++i)
    for (int j = i; j <= CommutatorTable::kLast; ++j)
      if (!(table.entry(i, j) == table.entry(j, i).negated())) bad.emplace_back(i, j);
  return bad;
}

struct TableMismatch {
  int i;
  int j;
  TableEntry expected;
  TableEntry actual;
};

struct TableReport {
  std::vector<TableMismatch> mismatches;
  bool passed() const { return mismatches.empty(); }
};

inline TableReport verify_reference_table(const CommutatorTable& computed,
                                          const CommutatorTable& reference) {
  TableReport report;
  for (int i = CommutatorTable::kFirst; i <= CommutatorTable::kLast; ++i)
    for (int j = CommutatorTable::kFirst; j <= CommutatorTable::kLast; ++j)
      if (!(computed.entry(i, j) == reference.entry(i, j)))
        report.mismatches.push_back({i, j, reference.entry(i, j), computed.entry(i, j)});
  return report;
}

inline TableReport verify_reference_table(const CommutatorTable& computed) {
  return verify_reference_table(computed, reference_commutator_table());
}

/// CSV with header "i,j,coeff_re,coeff_im,k"; zero cells carry k = 0.
inline void write_table_csv(std::ostream& out, const CommutatorTable& table) {
  out << "i,j,coeff_re,coeff_im,k\n";
  out << std::setprecision(17);
  for (int i = CommutatorTable::kFirst; i <= CommutatorTable::kLast; ++i)
    for (int j = CommutatorTable::kFirst; j <= CommutatorTable::kLast; ++j) {
      const TableEntry& e = table.entry(i, j);
      out << i << ',' << j << ',' << e.coefficient.real() << ',' << e.coefficient.imag() << ','
          << e.index << '\n';
    }
}

inline CommutatorTable read_table_csv(std::istream& in) {
  CommutatorTable table;
  std::string line;
  if (!std::getline(in, line)) throw TableError("table csv: empty input");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tok[5];
    for (auto& t : tok)
      if (!std::getline(fields, t, ',')) throw TableError("table csv: malformed row: " + line);
    try {
      const int i = std::stoi(tok[0]);
      const int j = std::stoi(tok[1]);
      const Complex coeff(std::stod(tok[2]), std::stod(tok[3]));
      const int k = std::stoi(tok[4]);
      table.entry(i, j) = k == 0 ? TableEntry{} : TableEntry{coeff, k};
    } catch (const std::logic_error&) {
      throw TableError("table csv: malformed row: " + line);
    }
    ++rows;
  }
  if (rows != CommutatorTable::kCount * CommutatorTable::kCount)
    throw TableError("table csv: expected 225 rows, got " + std::to_string(rows));
  return table;
}

// ---------------------------------------------------------------------------
// Spans and closure

/// Rank of the trace-inner-product Gram matrix, relative threshold tol::span_rank.
inline int gram_rank(const std::vector<ComplexMatrix>& mats) {
  if (mats.empty()) return 0;
  const auto n = static_cast<Eigen::Index>(mats.size());
  ComplexMatrix gram(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) gram(a, b) = trace_inner(mats[a], mats[b]);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (es.eigenvalues()(k) > tol::span_rank * top) ++rank;
  return rank;
}

inline bool same_span(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b) {
  std::vector<ComplexMatrix> both = a;
  both.insert(both.end(), b.begin(), b.end());
  const int ra = gram_rank(a);
  return ra == gram_rank(b) && ra == gram_rank(both);
}

namespace detail {
// Orthonormal basis (trace inner product) of the span of mats, as columns of flattened matrices.
inline ComplexMatrix orthonormal_frame(const std::vector<ComplexMatrix>& mats) {
  if (mats.empty()) return ComplexMatrix(0, 0);
  const Eigen::Index len = mats.front().size();
  ComplexMatrix cols(len, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t c = 0; c < mats.size(); ++c)
    cols.col(static_cast<Eigen::Index>(c)) = mats[c].reshaped();
  Eigen::JacobiSVD<ComplexMatrix> svd(cols, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > std::sqrt(tol::span_rank) * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}
}  // namespace detail

/// Frobenius distance between the orthogonal projectors onto the two spans.
inline double subspace_distance(const std::vector<ComplexMatrix>& a,
                                const std::vector<ComplexMatrix>& b) {
  const ComplexMatrix qa = detail::orthonormal_frame(a);
  const ComplexMatrix qb = detail::orthonormal_frame(b);
  return (qa * qa.adjoint() - qb * qb.adjoint()).norm();
}

struct SubalgebraSpec {
  std::string name;
  std::vector<ComplexMatrix> generators;
  std::vector<int> basis_indices;  // empty when generators are not basis elements
};

inline bool generators_independent(const SubalgebraSpec& spec) {
  return gram_rank(spec.generators) == static_cast<int>(spec.generators.size());
}

struct ClosureResult {
  bool closed = false;
  std::vector<ComplexMatrix> closure;  // orthonormal spanning set of the generated algebra
};

/// Adjoin commutators until the span stops growing.
inline ClosureResult is_closed_subalgebra(const SubalgebraSpec& spec) {
  if (!generators_independent(spec))
    throw std::invalid_argument("is_closed_subalgebra: generators of '" + spec.name +
                                "' are linearly dependent");
  std::vector<ComplexMatrix> frame;
  auto try_adjoin = [&frame](ComplexMatrix m) {
    const double scale = m.norm();
    if (scale == 0.0) return false;
    for (const auto& f : frame) m -= trace_inner(f, m) * f;
    // second pass for numerical orthogonality
    for (const auto& f : frame) m -= trace_inner(f, m) * f;
    const double rest = m.norm();
    if (rest <= std::sqrt(tol::span_rank) * scale) return false;
    frame.push_back(m / rest);
    return true;
  };
  for (const auto& g : spec.generators) try_adjoin(g);

  const std::size_t max_dim = static_cast<std::size_t>(spec.generators.front().size());
  bool grew = true;
  while (grew && frame.size() < max_dim) {
    grew = false;
    const std::size_t n = frame.size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (try_adjoin(commutator(frame[a], frame[b]))) grew = true;
  }
  ClosureResult r;
  r.closed = frame.size() == spec.generators.size();
  r.closure = std::move(frame);
  return r;
}

inline bool mutually_commuting(const std::vector<ComplexMatrix>& a,
                               const std::vector<ComplexMatrix>& b, double abs_tol = 1e-12) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (commutator(x, y).norm() > abs_tol) return false;
  return true;
}

/// True when the three (normalised) elements obey [a,b] = i k c cyclically with one real k != 0.
inline bool is_su2_triplet(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                           double abs_tol = 1e-10) {
  const std::array<ComplexMatrix, 3> e = {a / std::sqrt(trace_inner(a, a).real()),
                                          b / std::sqrt(trace_inner(b, b).real()),
                                          c / std::sqrt(trace_inner(c, c).real())};
  double k_ref = 0.0;
  for (int s = 0; s < 3; ++s) {
    const auto& x = e[s];
    const auto& y = e[(s + 1) % 3];
    const auto& z = e[(s + 2) % 3];
    const ComplexMatrix comm = commutator(x, y);
    const Complex proj = trace_inner(z, comm);  // = i k
    if ((comm - proj * z).norm() > abs_tol) return false;
    if (std::abs(proj.real()) > abs_tol) return false;
    const double k = proj.imag();
    if (std::abs(k) <= abs_tol) return false;
    if (s == 0)
      k_ref = k;
    else if (std::abs(k - k_ref) > abs_tol * std::max(1.0, std::abs(k_ref)))
      return false;
  }
  return true;
}

inline SubalgebraSpec basis_subset(const OperatorBasis& basis, const std::vector<int>& indices,
                                   std::string name) {
  SubalgebraSpec spec;
  spec.name = std::move(name);
  spec.basis_indices = indices;
  for (int i : indices) spec.generators.emplace_back(basis.op(i));
  return spec;
}

/// For each row i, the seven operators whose commutator with O_i vanishes (O_i included).
inline std::vector<SubalgebraSpec> enumerate_zero_pattern_subalgebras(
    const CommutatorTable& table, const OperatorBasis& basis) {
  std::vector<SubalgebraSpec> sets;
  for (int i = CommutatorTable::kFirst; i <= CommutatorTable::kLast; ++i) {
    SubalgebraSpec spec = basis_subset(basis, table.zero_columns(i), "commutant of O_" + std::to_string(i));
    if (spec.generators.size() != 7)
      throw TableError(spec.name + " has " + std::to_string(spec.generators.size()) +
                       " elements, expected 7");
    if (!is_closed_subalgebra(spec).closed) throw TableError(spec.name + " is not closed");
    sets.push_back(std::move(spec));
  }
  return sets;
}

// ---------------------------------------------------------------------------
// Bell similarity transform

inline Matrix4 bell_matrix() {
  Matrix4 w;
  w << 1, 0, 0, 1,  //
      0, 1, 1, 0,   //
      0, 1, -1, 0,  //
      1, 0, 0, -1;
  return w / std::sqrt(2.0);
}

/// x -> W x W^+ with W the Bell-basis unitary.
inline Matrix4 bell_similarity_transform(const Matrix4& x) {
  static const Matrix4 w = [] {
    const Matrix4 m = bell_matrix();
    if (!is_unitary(m)) throw NumericalError("Bell matrix is not unitary");
    return m;
  }();
  return w * x * w.adjoint();
}

// ---------------------------------------------------------------------------
// Pseudo-spins (x representation)

struct PseudoSpins {
  Matrix4 S_z, S_plus, S_minus;
  Matrix4 s_z, s_plus, s_minus;
};

/// S_z = (sx + tx)/2, s_z = (sx - tx)/2,
/// S_+- = (sy +- i sz)(ty +- i tz)/2, s_+- = (sy +- i sz)(ty -+ i tz)/2.
inline PseudoSpins pseudo_spin_operators() {
  using namespace pauli;
  const Matrix4 sx = kron(x(), id()), sy = kron(y(), id()), sz = kron(z(), id());
  const Matrix4 tx = kron(id(), x()), ty = kron(id(), y()), tz = kron(id(), z());
  PseudoSpins p;
  p.S_z = 0.5 * (sx + tx);
  p.s_z = 0.5 * (sx - tx);
  p.S_plus = 0.5 * (sy + kI * sz) * (ty + kI * tz);
  p.S_minus = 0.5 * (sy - kI * sz) * (ty - kI * tz);
  p.s_plus = 0.5 * (sy + kI * sz) * (ty - kI * tz);
  p.s_minus = 0.5 * (sy - kI * sz) * (ty + kI * tz);
  return p;
}

// ---------------------------------------------------------------------------
// Nearest-neighbour so(n) generators

/// m_jk for 1 <= j < k <= n: (m_jk)_pq = (-i)^(|j-k|-1) [d_jp d_kq + (-1)^(k-j-1) d_jq d_kp].
inline ComplexMatrix nearest_neighbor_generator(int n, int j, int k) {
  if (j < 1 || k > n || j >= k) throw std::invalid_argument("nearest_neighbor_generator: need 1 <= j < k <= n");
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  const int gap = k - j;
  const Complex phase = std::pow(Complex(0.0, -1.0), gap - 1);
  m(j - 1, k - 1) = phase;
  m(k - 1, j - 1) = phase * ((gap - 1) % 2 == 0 ? 1.0 : -1.0);
  return m;
}

inline std::vector<ComplexMatrix> nearest_neighbor_generators(int n) {
  if (n < 3 || n > 10) throw std::invalid_argument("nearest_neighbor_generators: n must be in [3, 10]");
  std::vector<ComplexMatrix> gens;
  for (int j = 1; j <= n; ++j)
    for (int k = j + 1; k <= n; ++k) gens.push_back(nearest_neighbor_generator(n, j, k));
  return gens;
}

struct So4Triplets {
  std::array<ComplexMatrix, 3> first;
  std::array<ComplexMatrix, 3> second;
  std::array<int, 3> signs;  // first = (m12 + s0 m34, m13 + s1 m24, m23 + s2 m14)
};

/// Splits so(4) = span{m_jk} into two commuting su(2) triplets by searching the sign
/// patterns of (m12 +- m34, m13 +- m24, m23 +- m14), and checks the result against the
/// basis sets (O_9, O_8, O_14) and (O_11, O_6, O_13).
inline So4Triplets so4_commuting_triplets(const OperatorBasis& basis) {
  const auto m = [](int j, int k) { return nearest_neighbor_generator(4, j, k); };
  const ComplexMatrix m12 = m(1, 2), m13 = m(1, 3), m14 = m(1, 4);
  const ComplexMatrix m23 = m(2, 3), m24 = m(2, 4), m34 = m(3, 4);

  std::vector<So4Triplets> found;
  // the first sign is fixed to +1: flipping all three just swaps the two triplets
  for (int s1 : {1, -1})
    for (int s2 : {1, -1}) {
      So4Triplets t;
      t.signs = {1, s1, s2};
      t.first = {m12 + m34, m13 + double(s1) * m24, m23 + double(s2) * m14};
      t.second = {m12 - m34, m13 - double(s1) * m24, m23 - double(s2) * m14};
      const std::vector<ComplexMatrix> a(t.first.begin(), t.first.end());
      const std::vector<ComplexMatrix> b(t.second.begin(), t.second.end());
      if (mutually_commuting(a, b) && is_su2_triplet(a[0], a[1], a[2]) &&
          is_su2_triplet(b[0], b[1], b[2]))
        found.push_back(t);
    }
  if (found.size() != 1) throw NumericalError("so4_commuting_triplets: no unique sign pattern");

  const So4Triplets& t = found.front();
  const auto ops = [&basis](std::initializer_list<int> idx) {
    std::vector<ComplexMatrix> v;
    for (int i : idx) v.emplace_back(basis.op(i));
    return v;
  };
  const std::vector<ComplexMatrix> a(t.first.begin(), t.first.end());
  const std::vector<ComplexMatrix> b(t.second.begin(), t.second.end());
  if (!same_span(a, ops({9, 8, 14})) || !same_span(b, ops({11, 6, 13})))
    throw NumericalError("so4_commuting_triplets: triplets do not match (O9,O8,O14; O11,O6,O13)");
  return t;
}

}  // namespace fourlevel

#pragma once

#include <optional>
#include <vector>

#include "torusdiv/numeric.hpp"

namespace torusdiv {

/// Dense matrix of arbitrary-precision integers. Row-generator convention
/// throughout: rows of a matrix are the lattice generators.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(long rows, long cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  IntMatrix(long rows, long cols, std::vector<Int> entries);

  static IntMatrix identity(long n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

  long rows() const { return rows_; }
  long cols() const { return cols_; }
  Int& at(long i, long j) { return a_[i * cols_ + j]; }
  const Int& at(long i, long j) const { return a_[i * cols_ + j]; }

  std::vector<Int> row(long i) const;
  IntMatrix transpose() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

 private:
  long rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

struct HnfResult {
  IntMatrix h;  // row Hermite normal form, U * A = H
  IntMatrix u;  // unimodular
  long rank = 0;
};

/// Row HNF with leftmost pivot order, positive pivots, entries above a pivot
/// reduced into [0, pivot). Zero rows sink to the bottom.
HnfResult hnf(const IntMatrix& a);

struct SnfResult {
  IntMatrix d;  // diagonal, d1 | d2 | ..., nonnegative; U * A * V = D
  IntMatrix u;
  IntMatrix v;
};

SnfResult snf(const IntMatrix& a);

/// Solves x * A = b over the integers; nullopt when no integral solution
/// exists.
std::optional<std::vector<Int>> solve_integral(const IntMatrix& a, const std::vector<Int>& b);

/// Solves x * A = b over the rationals, assuming the rows of A are linearly
/// independent (so the solution, if any, is unique).
std::optional<std::vector<Rat>> solve_rational(const IntMatrix& a, const std::vector<Rat>& b);

/// Basis (rows) of { x : x * A = 0 }.
IntMatrix left_kernel(const IntMatrix& a);

struct LatticeInvariants {
  long rank = 0;
  std::vector<Int> invariant_factors;  // nontrivial torsion of Z^cols / row-lattice
};

LatticeInvariants lattice_invariants(const IntMatrix& a);

/// Exact determinant (Bareiss); square input required.
Int det(const IntMatrix& a);

/// Inverse of a unimodular matrix (|det| = 1).
IntMatrix unimodular_inverse(const IntMatrix& a);

}  // namespace torusdiv

#pragma once

// Exact integer linear algebra: Smith normal form with unimodular transforms,
// integer kernels and exact solving, and first homology mod torsion of finite
// 2-complexes, producing the projection nu : Z_1 -> G.

#include <optional>
#include <string>
#include <vector>

#include "cyclepoly/grpring.hpp"

namespace cyclepoly {

class IntMatrix {
public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, Int(0)) {}

  static IntMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Int& at(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const Int& at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix operator+(const IntMatrix& o) const;
  bool operator==(const IntMatrix& o) const = default;
  bool is_zero() const;

  IntMatrix transpose() const;
  IntMatrix submatrix_rows(int from, int to) const;
  IntMatrix submatrix_cols(int from, int to) const;

  // Exact determinant (square), fraction-free Bareiss elimination.
  Int det() const;

  std::string to_string() const;

private:
  int rows_, cols_;
  std::vector<Int> a_;
};

// U*M*V = S with S diagonal, d_i | d_{i+1}, U and V unimodular.  The inverses
// are tracked so callers can change bases exactly.
struct SmithForm {
  IntMatrix U, S, V;
  IntMatrix Uinv, Vinv;
  int rank = 0;
};
SmithForm smith_normal_form(const IntMatrix& M);

// Basis of the integer kernel of M as matrix columns (may have 0 columns).
IntMatrix kernel_basis(const IntMatrix& M);

// Exact solve A*X = B over the integers; error if no integral solution.
IntMatrix solve_exact(const IntMatrix& A, const IntMatrix& B);

// The projection nu: chains on 1-cells -> Z^k = H_1/torsion.  P is defined on
// all of C_1, vanishes on boundaries and is surjective on cycles.  When a
// fibration class rho is supplied, the basis is arranged so the last
// generator s satisfies rho(s) = 1 and the others span ker rho.
struct HomologyProjection {
  int k = 0;
  IntMatrix P;  // k x n1
  std::string basis_note;

  std::vector<long> project(const std::vector<Int>& chain) const;
};

HomologyProjection homology_projection(const IntMatrix& d2, const IntMatrix& d1,
                                       const std::optional<std::vector<Int>>& rho = std::nullopt);

}  // namespace cyclepoly

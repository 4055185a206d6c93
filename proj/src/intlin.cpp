#include "cyclepoly/intlin.hpp"

#include <algorithm>
#include <sstream>

namespace cyclepoly {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) fail("ShapeMismatch", "matrix product shape");
  IntMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int l = 0; l < cols_; ++l) {
      const Int& x = at(i, l);
      if (x == 0) continue;
      for (int j = 0; j < o.cols_; ++j) r.at(i, j) += x * o.at(l, j);
    }
  return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail("ShapeMismatch", "matrix sum shape");
  IntMatrix r(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j) + o.at(i, j);
  return r;
}

bool IntMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Int& x) { return x == 0; });
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

IntMatrix IntMatrix::submatrix_rows(int from, int to) const {
  IntMatrix r(to - from, cols_);
  for (int i = from; i < to; ++i)
    for (int j = 0; j < cols_; ++j) r.at(i - from, j) = at(i, j);
  return r;
}

IntMatrix IntMatrix::submatrix_cols(int from, int to) const {
  IntMatrix r(rows_, to - from);
  for (int i = 0; i < rows_; ++i)
    for (int j = from; j < to; ++j) r.at(i, j - from) = at(i, j);
  return r;
}

Int IntMatrix::det() const {
  if (rows_ != cols_) fail("ShapeMismatch", "determinant of nonsquare matrix");
  int n = rows_;
  if (n == 0) return 1;
  IntMatrix m = *this;
  Int prev = 1;
  int sign = 1;
  for (int t = 0; t < n - 1; ++t) {
    if (m.at(t, t) == 0) {
      int p = -1;
      for (int i = t + 1; i < n; ++i)
        if (m.at(i, t) != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(m.at(t, j), m.at(p, j));
      sign = -sign;
    }
    for (int i = t + 1; i < n; ++i)
      for (int j = t + 1; j < n; ++j) {
        Int v = m.at(i, j) * m.at(t, t) - m.at(i, t) * m.at(t, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m.at(i, j) = v;
      }
    prev = m.at(t, t);
  }
  return sign * m.at(n - 1, n - 1);
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  for (int i = 0; i < rows_; ++i) {
    os << "[";
    for (int j = 0; j < cols_; ++j) {
      if (j) os << " ";
      os << at(i, j).get_str();
    }
    os << "]";
    if (i + 1 < rows_) os << "\n";
  }
  return os.str();
}

// ----- Smith normal form ------------------------------------------------------

namespace {

struct SnfWorker {
  IntMatrix M, U, V, Uinv, Vinv;

  explicit SnfWorker(const IntMatrix& m)
      : M(m),
        U(IntMatrix::identity(m.rows())),
        V(IntMatrix::identity(m.cols())),
        Uinv(IntMatrix::identity(m.rows())),
        Vinv(IntMatrix::identity(m.cols())) {}

  void row_swap(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < M.cols(); ++j) std::swap(M.at(a, j), M.at(b, j));
    for (int j = 0; j < U.cols(); ++j) std::swap(U.at(a, j), U.at(b, j));
    for (int i = 0; i < Uinv.rows(); ++i) std::swap(Uinv.at(i, a), Uinv.at(i, b));
  }
  void col_swap(int a, int b) {
    if (a == b) return;
    for (int i = 0; i < M.rows(); ++i) std::swap(M.at(i, a), M.at(i, b));
    for (int i = 0; i < V.rows(); ++i) std::swap(V.at(i, a), V.at(i, b));
    for (int j = 0; j < Vinv.cols(); ++j) std::swap(Vinv.at(a, j), Vinv.at(b, j));
  }
  // row a += c * row b
  void row_add(int a, int b, const Int& c) {
    for (int j = 0; j < M.cols(); ++j) M.at(a, j) += c * M.at(b, j);
    for (int j = 0; j < U.cols(); ++j) U.at(a, j) += c * U.at(b, j);
    for (int i = 0; i < Uinv.rows(); ++i) Uinv.at(i, b) -= c * Uinv.at(i, a);
  }
  // col a += c * col b
  void col_add(int a, int b, const Int& c) {
    for (int i = 0; i < M.rows(); ++i) M.at(i, a) += c * M.at(i, b);
    for (int i = 0; i < V.rows(); ++i) V.at(i, a) += c * V.at(i, b);
    for (int j = 0; j < Vinv.cols(); ++j) Vinv.at(b, j) -= c * Vinv.at(a, j);
  }
  void row_negate(int a) {
    for (int j = 0; j < M.cols(); ++j) M.at(a, j) = -M.at(a, j);
    for (int j = 0; j < U.cols(); ++j) U.at(a, j) = -U.at(a, j);
    for (int i = 0; i < Uinv.rows(); ++i) Uinv.at(i, a) = -Uinv.at(i, a);
  }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& Min) {
  SnfWorker w(Min);
  int n = std::min(Min.rows(), Min.cols());
  int t = 0;
  while (t < n) {
    // Smallest nonzero |entry| in the trailing submatrix as pivot.
    int pi = -1, pj = -1;
    Int best;
    for (int i = t; i < w.M.rows(); ++i)
      for (int j = t; j < w.M.cols(); ++j) {
        if (w.M.at(i, j) == 0) continue;
        Int a = abs(w.M.at(i, j));
        if (pi < 0 || a < best) {
          best = a;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    w.row_swap(t, pi);
    w.col_swap(t, pj);

    bool dirty = false;
    for (int i = t + 1; i < w.M.rows(); ++i) {
      if (w.M.at(i, t) == 0) continue;
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), w.M.at(i, t).get_mpz_t(), w.M.at(t, t).get_mpz_t());
      w.row_add(i, t, -q);
      if (w.M.at(i, t) != 0) dirty = true;
    }
    for (int j = t + 1; j < w.M.cols(); ++j) {
      if (w.M.at(t, j) == 0) continue;
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), w.M.at(t, j).get_mpz_t(), w.M.at(t, t).get_mpz_t());
      w.col_add(j, t, -q);
      if (w.M.at(t, j) != 0) dirty = true;
    }
    if (dirty) continue;  // pivot shrank; pick again

    // Enforce divisibility of the trailing block by the pivot.
    bool fixed = false;
    for (int i = t + 1; i < w.M.rows() && !fixed; ++i)
      for (int j = t + 1; j < w.M.cols() && !fixed; ++j) {
        if (w.M.at(i, j) % w.M.at(t, t) != 0) {
          w.row_add(t, i, 1);
          fixed = true;
        }
      }
    if (fixed) continue;

    if (w.M.at(t, t) < 0) w.row_negate(t);
    ++t;
  }
  SmithForm out;
  out.U = w.U;
  out.S = w.M;
  out.V = w.V;
  out.Uinv = w.Uinv;
  out.Vinv = w.Vinv;
  out.rank = t;
  return out;
}

IntMatrix kernel_basis(const IntMatrix& M) {
  SmithForm f = smith_normal_form(M);
  return f.V.submatrix_cols(f.rank, M.cols());
}

IntMatrix solve_exact(const IntMatrix& A, const IntMatrix& B) {
  if (A.rows() != B.rows()) fail("ShapeMismatch", "solve_exact shapes");
  SmithForm f = smith_normal_form(A);
  IntMatrix UB = f.U * B;
  IntMatrix Y(A.cols(), B.cols());
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < B.cols(); ++j) {
      if (i < f.rank) {
        Int r = UB.at(i, j) % f.S.at(i, i);
        if (r != 0) fail("NoIntegerSolution", "system has no integral solution");
        Y.at(i, j) = UB.at(i, j) / f.S.at(i, i);
      } else if (UB.at(i, j) != 0) {
        fail("NoIntegerSolution", "inconsistent system");
      }
    }
  }
  return f.V * Y;
}

// ----- homology ---------------------------------------------------------------

std::vector<long> HomologyProjection::project(const std::vector<Int>& chain) const {
  if (static_cast<int>(chain.size()) != P.cols()) fail("ShapeMismatch", "chain length");
  std::vector<long> out(k, 0);
  for (int i = 0; i < k; ++i) {
    Int s = 0;
    for (int j = 0; j < P.cols(); ++j) s += P.at(i, j) * chain[j];
    if (!s.fits_slong_p()) fail("Overflow", "homology class out of range");
    out[i] = s.get_si();
  }
  return out;
}

namespace {

// Exact inverse of a unimodular integer matrix.
IntMatrix unimodular_inverse(const IntMatrix& T) {
  SmithForm f = smith_normal_form(T);
  if (f.rank != T.rows()) fail("NotUnimodular", "matrix not invertible");
  for (int i = 0; i < f.rank; ++i)
    if (f.S.at(i, i) != 1) fail("NotUnimodular", "matrix not unimodular");
  // T = Uinv * Vinv  (S = I), so T^{-1} = V * U.
  return f.V * f.U;
}

}  // namespace

HomologyProjection homology_projection(const IntMatrix& d2, const IntMatrix& d1,
                                       const std::optional<std::vector<Int>>& rho) {
  if (d1.cols() != d2.rows()) fail("ShapeMismatch", "chain complex shapes");
  if (!(d1 * d2).is_zero()) fail("NotAChainComplex", "d1*d2 != 0");
  int n1 = d1.cols();

  SmithForm f1 = smith_normal_form(d1);
  int z = n1 - f1.rank;
  IntMatrix K = f1.V.submatrix_cols(f1.rank, n1);        // n1 x z, basis of Z_1
  IntMatrix W = f1.Vinv.submatrix_rows(f1.rank, n1);     // z x n1, W*K = I

  IntMatrix X = solve_exact(K, d2);  // boundaries in Z_1 coordinates
  SmithForm fX = smith_normal_form(X);
  int k = z - fX.rank;

  IntMatrix Q = fX.U.submatrix_rows(fX.rank, z);  // k x z
  IntMatrix P = Q * W;                            // k x n1

  HomologyProjection hp;
  hp.k = k;
  hp.P = P;

  int fixed_rows = k;  // rows not subject to sign normalization
  if (rho.has_value() && k > 0) {
    if (static_cast<int>(rho->size()) != n1) fail("ShapeMismatch", "rho length");
    // rho must be a cocycle.
    IntMatrix R(1, n1);
    for (int j = 0; j < n1; ++j) R.at(0, j) = (*rho)[j];
    if (!(R * d2).is_zero()) fail("NotACocycle", "rho does not vanish on boundaries");
    IntMatrix rhoZ = R * K;            // 1 x z
    IntMatrix wfull = rhoZ * fX.Uinv;  // 1 x z
    for (int i = 0; i < fX.rank; ++i)
      if (wfull.at(0, i) != 0) fail("Internal", "rho fails to descend");
    IntMatrix rhoH = wfull.submatrix_cols(fX.rank, z);  // 1 x k

    bool nonzero = !rhoH.is_zero();
    if (nonzero) {
      SmithForm fr = smith_normal_form(rhoH);
      if (fr.S.at(0, 0) != 1)
        fail("NotSurjective", "fibration class is not primitive on homology");
      // rhoH * V_r = (+-1, 0, ..., 0); build T with rhoH * T = (0,...,0,1).
      IntMatrix Vr = fr.V;
      IntMatrix first = rhoH * Vr;
      int sgn = first.at(0, 0) < 0 ? -1 : 1;
      IntMatrix T(k, k);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j + 1 < k; ++j) T.at(i, j) = Vr.at(i, j + 1);
        T.at(i, k - 1) = sgn * Vr.at(i, 0);
      }
      IntMatrix Tinv = unimodular_inverse(T);
      hp.P = Tinv * hp.P;
      fixed_rows = k - 1;
      hp.basis_note = "last generator is the vertical generator s";
    }
  }

  // Deterministic signs: first nonzero entry of each free row positive.
  for (int i = 0; i < fixed_rows; ++i) {
    for (int j = 0; j < hp.P.cols(); ++j) {
      if (hp.P.at(i, j) == 0) continue;
      if (hp.P.at(i, j) < 0)
        for (int l = 0; l < hp.P.cols(); ++l) hp.P.at(i, l) = -hp.P.at(i, l);
      break;
    }
  }
  return hp;
}

}  // namespace cyclepoly

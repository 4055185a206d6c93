#include "cyclepoly/linprog.hpp"

#include <cstddef>

namespace cyclepoly {

namespace {

// Dense simplex tableau with Bland's rule.  Constraints G z <= h with h >= 0,
// slack variables start in the basis.
class Simplex {
public:
  Simplex(const std::vector<std::vector<Rat>>& G, const std::vector<Rat>& h,
          const std::vector<Rat>& c)
      : m_(G.size()), n_(c.size()) {
    rows_.assign(m_ + 1, std::vector<Rat>(n_ + m_ + 1, Rat(0)));
    basis_.resize(m_);
    for (size_t i = 0; i < m_; ++i) {
      for (size_t j = 0; j < n_; ++j) rows_[i][j] = G[i][j];
      rows_[i][n_ + i] = 1;
      rows_[i].back() = h[i];
      basis_[i] = n_ + i;
    }
    for (size_t j = 0; j < n_; ++j) rows_[m_][j] = -c[j];
  }

  LpSolution solve() {
    for (;;) {
      size_t pivot_col = n_ + m_;
      for (size_t j = 0; j < n_ + m_; ++j) {
        if (rows_[m_][j] < 0) {
          pivot_col = j;
          break;
        }
      }
      if (pivot_col == n_ + m_) break;
      size_t pivot_row = m_;
      Rat best;
      for (size_t i = 0; i < m_; ++i) {
        if (rows_[i][pivot_col] <= 0) continue;
        Rat ratio = rows_[i].back() / rows_[i][pivot_col];
        if (pivot_row == m_ || ratio < best ||
            (ratio == best && basis_[i] < basis_[pivot_row])) {
          best = ratio;
          pivot_row = i;
        }
      }
      if (pivot_row == m_) fail("Unbounded", "LP unbounded; missing box constraint");
      pivot(pivot_row, pivot_col);
    }
    LpSolution s;
    s.value = rows_[m_].back();
    s.z.assign(n_, Rat(0));
    for (size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) s.z[basis_[i]] = rows_[i].back();
    return s;
  }

private:
  void pivot(size_t pr, size_t pc) {
    Rat pv = rows_[pr][pc];
    for (auto& x : rows_[pr]) x /= pv;
    for (size_t i = 0; i <= m_; ++i) {
      if (i == pr) continue;
      Rat f = rows_[i][pc];
      if (f == 0) continue;
      for (size_t j = 0; j < rows_[i].size(); ++j) rows_[i][j] -= f * rows_[pr][j];
    }
    basis_[pr] = pc;
  }

  size_t m_, n_;
  std::vector<std::vector<Rat>> rows_;
  std::vector<size_t> basis_;
};

}  // namespace

LpSolution lp_max_origin(const std::vector<std::vector<Rat>>& G, const std::vector<Rat>& h,
                         const std::vector<Rat>& c) {
  for (const Rat& x : h)
    if (x < 0) fail("BadLp", "lp_max_origin needs h >= 0");
  return Simplex(G, h, c).solve();
}

// Encode free x as u - w with u, w in [0,1]^k, and maximize the margin eps
// with rows[i].x >= eps.  Strict feasibility is eps* > 0 by homogeneity.
static LpSolution margin_lp(const std::vector<std::vector<Rat>>& rows,
                            const std::vector<Rat>* extra_nonpos, size_t k) {
  size_t nv = 2 * k + 1;  // u, w, eps
  std::vector<std::vector<Rat>> G;
  std::vector<Rat> h;
  for (const auto& r : rows) {
    // -r.u + r.w + eps <= 0
    std::vector<Rat> g(nv, Rat(0));
    for (size_t j = 0; j < k; ++j) {
      g[j] = -r[j];
      g[k + j] = r[j];
    }
    g[2 * k] = 1;
    G.push_back(std::move(g));
    h.emplace_back(0);
  }
  if (extra_nonpos) {
    std::vector<Rat> g(nv, Rat(0));
    for (size_t j = 0; j < k; ++j) {
      g[j] = (*extra_nonpos)[j];
      g[k + j] = -(*extra_nonpos)[j];
    }
    G.push_back(std::move(g));
    h.emplace_back(0);
  }
  for (size_t j = 0; j < nv; ++j) {
    std::vector<Rat> g(nv, Rat(0));
    g[j] = 1;
    G.push_back(std::move(g));
    h.emplace_back(1);
  }
  std::vector<Rat> c(nv, Rat(0));
  c[2 * k] = 1;
  return lp_max_origin(G, h, c);
}

std::optional<std::vector<Rat>> strict_positive_solution(
    const std::vector<std::vector<Rat>>& rows) {
  if (rows.empty()) return std::vector<Rat>();
  size_t k = rows[0].size();
  LpSolution s = margin_lp(rows, nullptr, k);
  if (s.value <= 0) return std::nullopt;
  std::vector<Rat> x(k);
  for (size_t j = 0; j < k; ++j) x[j] = s.z[j] - s.z[k + j];
  return x;
}

bool strict_feasible_with_nonpositive(const std::vector<std::vector<Rat>>& rows,
                                      const std::vector<Rat>& extra) {
  size_t k = extra.size();
  LpSolution s = margin_lp(rows, &extra, k);
  return s.value > 0;
}

bool in_convex_hull(const std::vector<Rat>& p, const std::vector<std::vector<Rat>>& pts) {
  if (pts.empty()) return false;
  // p lies outside conv(pts) iff a linear functional strictly separates it:
  // y.(p - s) > 0 for all s.
  std::vector<std::vector<Rat>> rows;
  bool equals_some = false;
  for (const auto& s : pts) {
    std::vector<Rat> r(p.size());
    bool all_zero = true;
    for (size_t j = 0; j < p.size(); ++j) {
      r[j] = p[j] - s[j];
      if (r[j] != 0) all_zero = false;
    }
    if (all_zero) {
      equals_some = true;
      continue;
    }
    rows.push_back(std::move(r));
  }
  if (equals_some) return true;
  return !strict_positive_solution(rows).has_value();
}

}  // namespace cyclepoly

#ifndef HILOK_LINALG_HPP
#define HILOK_LINALG_HPP

#include <vector>

#include "hilok/error.hpp"

namespace hilok::linalg {

using Vec = std::vector<int>;
using Mat = std::vector<Vec>;

inline int mod(long a, int p) {
  long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

inline int inv_mod(int a, int p) {
  for (int x = 1; x < p; ++x)
    if ((a * x) % p == 1) return x;
  fail(ErrorKind::DivisionByZero, "linalg", "zero pivot");
}

/// Reduced row echelon form over Z/p with zero rows removed.
inline Mat rref(Mat m, int p) {
  if (m.empty()) return m;
  std::size_t cols = m[0].size();
  for (auto& row : m) {
    if (row.size() != cols) fail(ErrorKind::DimensionMismatch, "linalg", "ragged matrix");
    for (auto& x : row) x = mod(x, p);
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[r], m[piv]);
    int iv = inv_mod(m[r][c], p);
    for (auto& x : m[r]) x = (x * iv) % p;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (k == r || m[k][c] == 0) continue;
      int f = m[k][c];
      for (std::size_t j = 0; j < cols; ++j) m[k][j] = mod(m[k][j] - f * m[r][j], p);
    }
    ++r;
  }
  m.resize(r);
  return m;
}

inline int rank(const Mat& m, int p) { return static_cast<int>(rref(m, p).size()); }

/// Basis of {x : sum_j f_j x_j = 0 for every row f of m}.
inline Mat nullspace(const Mat& m, int p, std::size_t cols) {
  Mat R = rref(m, p);
  std::vector<int> pivot_col(R.size());
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t r = 0; r < R.size(); ++r) {
    std::size_t c = 0;
    while (R[r][c] == 0) ++c;
    pivot_col[r] = static_cast<int>(c);
    is_pivot[c] = true;
  }
  Mat out;
  for (std::size_t fcol = 0; fcol < cols; ++fcol) {
    if (is_pivot[fcol]) continue;
    Vec v(cols, 0);
    v[fcol] = 1;
    for (std::size_t r = 0; r < R.size(); ++r) v[pivot_col[r]] = mod(-R[r][fcol], p);
    out.push_back(v);
  }
  return out;
}

inline bool same_span(const Mat& a, const Mat& b, int p) { return rref(a, p) == rref(b, p); }

inline bool all_zero(const Mat& m) {
  for (const auto& row : m)
    for (int x : row)
      if (x) return false;
  return true;
}

}  // namespace hilok::linalg

#endif  // HILOK_LINALG_HPP

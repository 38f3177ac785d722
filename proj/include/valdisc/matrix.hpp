#pragma once

#include <cstddef>
#include <vector>

namespace valdisc {

/// Row-major dense matrix over a ring R (see Poly for the R hooks).
template <class R>
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, const R& zero)
      : rows_(rows), cols_(cols), a_(rows * cols, zero_like(zero)), zero_(zero_like(zero)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  R& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const R& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  const R& zero() const { return zero_; }

 private:
  std::size_t rows_, cols_;
  std::vector<R> a_;
  R zero_;
};

/// Characteristic polynomial det(X*I - A) by Berkowitz's division-free algorithm.
/// Returns coefficients highest degree first: result[0] = 1, result[n] = (-1)^n det A.
template <class R>
std::vector<R> charpoly_berkowitz(const Matrix<R>& A) {
  const std::size_t n = A.rows();
  const R zero = A.zero();
  const R one = one_like(zero);
  if (n == 0) return {one};
  std::vector<R> vect{one, -A(0, 0)};
  for (std::size_t r = 1; r < n; ++r) {
    // Leading r x r block M, column C = A[0..r-1][r], row Rw = A[r][0..r-1].
    std::vector<R> col(r, zero);
    for (std::size_t i = 0; i < r; ++i) col[i] = A(i, r);
    // Toeplitz first column: 1, -a_rr, -R C, -R M C, ..., -R M^{r-1} C
    std::vector<R> t(r + 2, zero);
    t[0] = one;
    t[1] = -A(r, r);
    std::vector<R> mc = col;  // M^k C
    for (std::size_t k = 0; k < r; ++k) {
      R acc = zero;
      for (std::size_t j = 0; j < r; ++j) acc = acc + A(r, j) * mc[j];
      t[k + 2] = -acc;
      if (k + 1 < r) {
        std::vector<R> next(r, zero);
        for (std::size_t i = 0; i < r; ++i) {
          R s = zero;
          for (std::size_t j = 0; j < r; ++j) s = s + A(i, j) * mc[j];
          next[i] = s;
        }
        mc = std::move(next);
      }
    }
    std::vector<R> nv(r + 2, zero);
    for (std::size_t i = 0; i < r + 2; ++i) {
      R s = zero;
      for (std::size_t j = 0; j <= r && j <= i; ++j) s = s + t[i - j] * vect[j];
      nv[i] = s;
    }
    vect = std::move(nv);
  }
  return vect;
}

template <class R>
R determinant(const Matrix<R>& A) {
  auto cp = charpoly_berkowitz(A);
  R d = cp.back();
  return (A.rows() % 2 == 0) ? d : -d;
}

}  // namespace valdisc

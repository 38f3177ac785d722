#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "valdisc/errors.hpp"
#include "valdisc/fq.hpp"
#include "valdisc/matrix.hpp"

namespace valdisc {

/// Dense univariate polynomial, coefficients low-to-high.
///
/// R is any coefficient type providing +, -, *, unary -, and the ADL hooks
/// zero_like / one_like / zero_state (and inverse for the Euclidean routines).
/// A sample zero is stored so the zero polynomial still knows its coefficient
/// domain.
template <class R>
class Poly {
 public:
  static constexpr int kZeroDegree = -1;

  explicit Poly(R zero) : zero_(zero_like(zero)) {}
  Poly(R zero, std::vector<R> coeffs) : zero_(zero_like(zero)), c_(std::move(coeffs)) { trim(); }

  static Poly monomial(const R& coeff, std::size_t degree) {
    std::vector<R> c(degree + 1, zero_like(coeff));
    c[degree] = coeff;
    return Poly(coeff, std::move(c));
  }

  /// Degree, or kZeroDegree for the zero polynomial. Throws PrecisionExhausted
  /// if the top stored coefficient cannot be decided zero or nonzero.
  int degree() const {
    if (!c_.empty() && zero_state(c_.back()) == ZeroState::Unknown)
      throw PrecisionExhausted("polynomial degree undetermined: leading coefficient hidden by truncation");
    return static_cast<int>(c_.size()) - 1;
  }
  bool is_zero() const { return c_.empty(); }
  const std::vector<R>& coeffs() const { return c_; }
  const R& zero() const { return zero_; }
  R coeff(std::size_t i) const { return i < c_.size() ? c_[i] : zero_; }
  const R& leading() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
    return c_.back();
  }

  R eval(const R& x) const {
    R acc = zero_;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<R> c(std::max(a.c_.size(), b.c_.size()), a.zero_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return Poly(a.zero_, std::move(c));
  }
  friend Poly operator-(const Poly& a) {
    std::vector<R> c;
    c.reserve(a.c_.size());
    for (const R& x : a.c_) c.push_back(-x);
    return Poly(a.zero_, std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.c_.empty() || b.c_.empty()) return Poly(a.zero_);
    std::vector<R> c(a.c_.size() + b.c_.size() - 1, a.zero_);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
    return Poly(a.zero_, std::move(c));
  }
  Poly scaled(const R& k) const {
    std::vector<R> c;
    for (const R& x : c_) c.push_back(x * k);
    return Poly(zero_, std::move(c));
  }

 private:
  void trim() {
    while (!c_.empty() && zero_state(c_.back()) == ZeroState::Zero) c_.pop_back();
  }

  R zero_;
  std::vector<R> c_;
};

/// Quotient and remainder over a field of coefficients.
template <class R>
std::pair<Poly<R>, Poly<R>> divrem(const Poly<R>& a, const Poly<R>& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  const int db = b.degree();
  R inv_lc = inverse(b.leading());
  std::vector<R> rem = a.coeffs();
  std::vector<R> quo(a.degree() >= db ? a.degree() - db + 1 : 0, a.zero());
  for (int d = a.degree(); d >= db; --d) {
    R c = rem[d];
    if (zero_state(c) == ZeroState::Zero) continue;
    R f = c * inv_lc;
    quo[d - db] = f;
    for (int i = 0; i <= db; ++i) rem[d - db + i] = rem[d - db + i] - f * b.coeffs()[i];
    rem[d] = a.zero();
  }
  rem.resize(std::min<std::size_t>(rem.size(), static_cast<std::size_t>(db)), a.zero());
  return {Poly<R>(a.zero(), std::move(quo)), Poly<R>(a.zero(), std::move(rem))};
}

template <class R>
R pow_elem(R base, unsigned long e) {
  R r = one_like(base);
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

/// Resultant through the Euclidean remainder sequence over a coefficient field.
///
/// Convention: Res(P, Q) = lc(P)^{deg Q} * prod_{P(r)=0} Q(r).
template <class R>
R resultant(const Poly<R>& P, const Poly<R>& Q) {
  if (P.is_zero() || Q.is_zero()) throw InvalidInput("resultant of the zero polynomial");
  const long m = P.degree(), n = Q.degree();
  if (m < n) {
    R r = resultant(Q, P);
    return ((m * n) % 2 == 0) ? r : -r;
  }
  if (n == 0) return pow_elem(Q.leading(), static_cast<unsigned long>(m));
  auto rem = divrem(P, Q).second;
  if (rem.is_zero()) return zero_like(P.leading());
  const long r = rem.degree();
  // Res(P,Q) = (-1)^{mn} Res(Q,P) and Res(Q,P) = lc(Q)^{m-r} Res(Q, P mod Q).
  R res = pow_elem(Q.leading(), static_cast<unsigned long>(m - r)) * resultant(Q, rem);
  return ((m * n) % 2 == 0) ? res : -res;
}

/// Sylvester matrix of (P, Q): deg Q shifted rows of P, then deg P shifted rows of Q,
/// coefficients highest degree first.
template <class R>
Matrix<R> sylvester_matrix(const Poly<R>& P, const Poly<R>& Q) {
  const int m = P.degree(), n = Q.degree();
  const int size = m + n;
  Matrix<R> S(size, size, P.zero());
  for (int row = 0; row < n; ++row)
    for (int i = 0; i <= m; ++i) S(row, row + i) = P.coeffs()[m - i];
  for (int row = 0; row < m; ++row)
    for (int i = 0; i <= n; ++i) S(n + row, row + i) = Q.coeffs()[n - i];
  return S;
}

/// Division-free resultant: Berkowitz determinant of the Sylvester matrix.
template <class R>
R resultant_sylvester(const Poly<R>& P, const Poly<R>& Q) {
  if (P.is_zero() || Q.is_zero()) throw InvalidInput("resultant of the zero polynomial");
  if (P.degree() == 0 && Q.degree() == 0) return one_like(P.leading());
  return determinant(sylvester_matrix(P, Q));
}

/// Monic gcd over a coefficient field.
template <class R>
Poly<R> gcd(Poly<R> a, Poly<R> b) {
  while (!b.is_zero()) {
    auto r = divrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.scaled(inverse(a.leading()));
}

template <class R>
Poly<R> mulmod(const Poly<R>& a, const Poly<R>& b, const Poly<R>& m) {
  return divrem(a * b, m).second;
}

template <class R>
Poly<R> powmod(Poly<R> base, unsigned long long e, const Poly<R>& m) {
  Poly<R> result(m.zero(), {one_like(m.zero())});
  base = divrem(base, m).second;
  while (e > 0) {
    if (e & 1ULL) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return result;
}

/// Smallest degree of an irreducible factor of a nonconstant f over F_q
/// (distinct-degree test: gcd(f, X^{q^d} - X) != 1).
int min_irreducible_factor_degree(const Poly<FqElem>& f);

}  // namespace valdisc

#pragma once

#include <map>
#include <string>
#include <vector>

#include "valdisc/fq.hpp"
#include "valdisc/rat.hpp"

namespace valdisc {

using ExpVec = std::vector<Rat>;

/// Sparse multivariate Laurent polynomial over F_q with rational exponents.
/// The number of variables is fixed per polynomial; zero coefficients are
/// never stored.
class LaurentPoly {
 public:
  LaurentPoly(const FqField* f, std::size_t nvars) : f_(f), nvars_(nvars) {}

  static LaurentPoly constant(const FqField* f, std::size_t nvars, const FqElem& c);
  static LaurentPoly monomial(const FqField* f, const ExpVec& e, const FqElem& c);

  const FqField* field() const { return f_; }
  std::size_t nvars() const { return nvars_; }
  const std::map<ExpVec, FqElem>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_monomial() const { return t_.size() == 1; }
  bool is_constant() const;

  /// Minimum of sum_v w_v e_v over the support; throws on the zero polynomial.
  Rat weighted_degree(const std::vector<Rat>& weights) const;
  /// Terms attaining the weighted degree.
  LaurentPoly initial_form(const std::vector<Rat>& weights) const;

  LaurentPoly shifted(const ExpVec& by) const;
  LaurentPoly scaled(const FqElem& c) const;
  /// Termwise p-th power (exponents times p, coefficients to the p).
  LaurentPoly frobenius() const;
  LaurentPoly pow(unsigned long n) const;
  /// Inverse of a monomial.
  LaurentPoly monomial_inverse() const;

  std::string str(const std::vector<std::string>& names) const;

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator-(const LaurentPoly& a);
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.f_ == b.f_ && a.nvars_ == b.nvars_ && a.t_ == b.t_;
  }

  void add_term(const ExpVec& e, const FqElem& c);

 private:
  const FqField* f_;
  std::size_t nvars_;
  std::map<ExpVec, FqElem> t_;
};

Rat dot(const std::vector<Rat>& w, const ExpVec& e);

}  // namespace valdisc

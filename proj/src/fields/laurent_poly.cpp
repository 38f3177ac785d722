#include "valdisc/laurent_poly.hpp"

#include <sstream>

#include "valdisc/errors.hpp"

namespace valdisc {

Rat dot(const std::vector<Rat>& w, const ExpVec& e) {
  Rat s(0);
  for (std::size_t i = 0; i < e.size(); ++i) s += w[i] * e[i];
  return s;
}

LaurentPoly LaurentPoly::constant(const FqField* f, std::size_t nvars, const FqElem& c) {
  LaurentPoly r(f, nvars);
  r.add_term(ExpVec(nvars, Rat(0)), c);
  return r;
}

LaurentPoly LaurentPoly::monomial(const FqField* f, const ExpVec& e, const FqElem& c) {
  LaurentPoly r(f, e.size());
  r.add_term(e, c);
  return r;
}

void LaurentPoly::add_term(const ExpVec& e, const FqElem& c) {
  if (e.size() != nvars_) throw InvalidInput("monomial has the wrong number of variables");
  if (c.is_zero()) return;
  auto [it, inserted] = t_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

bool LaurentPoly::is_constant() const {
  if (t_.empty()) return true;
  if (t_.size() != 1) return false;
  for (const Rat& x : t_.begin()->first)
    if (!x.is_zero()) return false;
  return true;
}

Rat LaurentPoly::weighted_degree(const std::vector<Rat>& weights) const {
  if (t_.empty()) throw std::domain_error("weighted degree of the zero polynomial");
  bool first = true;
  Rat best(0);
  for (const auto& [e, c] : t_) {
    Rat d = dot(weights, e);
    if (first || d < best) best = d;
    first = false;
  }
  return best;
}

LaurentPoly LaurentPoly::initial_form(const std::vector<Rat>& weights) const {
  LaurentPoly r(f_, nvars_);
  if (t_.empty()) return r;
  Rat d = weighted_degree(weights);
  for (const auto& [e, c] : t_)
    if (dot(weights, e) == d) r.add_term(e, c);
  return r;
}

LaurentPoly LaurentPoly::shifted(const ExpVec& by) const {
  LaurentPoly r(f_, nvars_);
  for (const auto& [e, c] : t_) {
    ExpVec n = e;
    for (std::size_t i = 0; i < nvars_; ++i) n[i] += by[i];
    r.add_term(n, c);
  }
  return r;
}

LaurentPoly LaurentPoly::scaled(const FqElem& c) const {
  LaurentPoly r(f_, nvars_);
  for (const auto& [e, x] : t_) r.add_term(e, x * c);
  return r;
}

LaurentPoly LaurentPoly::frobenius() const {
  LaurentPoly r(f_, nvars_);
  const Rat p(f_->p());
  for (const auto& [e, c] : t_) {
    ExpVec n = e;
    for (auto& x : n) x *= p;
    r.add_term(n, c.frobenius());
  }
  return r;
}

LaurentPoly LaurentPoly::pow(unsigned long n) const {
  const auto p = static_cast<unsigned long>(f_->p());
  LaurentPoly result = constant(f_, nvars_, FqElem::one(f_));
  LaurentPoly fp = *this;
  while (n > 0) {
    for (unsigned long i = 0; i < n % p; ++i) result = result * fp;
    n /= p;
    if (n > 0) fp = fp.frobenius();
  }
  return result;
}

LaurentPoly LaurentPoly::monomial_inverse() const {
  if (!is_monomial()) throw std::domain_error("monomial_inverse: not a monomial");
  ExpVec e = t_.begin()->first;
  for (auto& x : e) x = -x;
  return monomial(f_, e, t_.begin()->second.inverse());
}

std::string LaurentPoly::str(const std::vector<std::string>& names) const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : t_) {
    if (!first) os << " + ";
    first = false;
    bool any = false;
    std::ostringstream mono;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i].is_zero()) continue;
      if (any) mono << "*";
      any = true;
      mono << names[i];
      if (e[i] != Rat(1)) {
        if (e[i].is_integer() && e[i].sign() > 0)
          mono << "^" << e[i].str();
        else
          mono << "^(" << e[i].str() << ")";
      }
    }
    if (!any) {
      os << c.str();
    } else if (c.is_one()) {
      os << mono.str();
    } else {
      os << c.str() << "*" << mono.str();
    }
  }
  return os.str();
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.f_ != b.f_ || a.nvars_ != b.nvars_) throw InvalidInput("Laurent polynomials from different rings");
  LaurentPoly r = a;
  for (const auto& [e, c] : b.t_) r.add_term(e, c);
  return r;
}

LaurentPoly operator-(const LaurentPoly& a) {
  LaurentPoly r(a.f_, a.nvars_);
  for (const auto& [e, c] : a.t_) r.t_.emplace(e, -c);
  return r;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.f_ != b.f_ || a.nvars_ != b.nvars_) throw InvalidInput("Laurent polynomials from different rings");
  LaurentPoly r(a.f_, a.nvars_);
  for (const auto& [ea, ca] : a.t_) {
    for (const auto& [eb, cb] : b.t_) {
      ExpVec e = ea;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

}  // namespace valdisc

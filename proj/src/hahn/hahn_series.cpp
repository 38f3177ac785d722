#include "valdisc/hahn_series.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "valdisc/errors.hpp"

namespace valdisc {

namespace {

void check_same(const HahnSeries& a, const HahnSeries& b) {
  if (a.field() != b.field()) throw InvalidInput("Hahn series over different coefficient fields");
}

std::optional<Rat> min_prec(const std::optional<Rat>& a, const std::optional<Rat>& b) {
  if (!a) return b;
  if (!b) return a;
  return min(*a, *b);
}

// Lowest exponent that may carry a nonzero term: the leading exponent, or the
// precision for an empty truncated series.
Rat low_exponent(const HahnSeries& a) { return a.terms().empty() ? *a.precision() : a.terms().front().exp; }

}  // namespace

HahnSeries::HahnSeries(const FqField* f, std::vector<HahnTerm> terms, std::optional<Rat> precision)
    : f_(f), terms_(std::move(terms)), prec_(std::move(precision)) {
  normalize();
}

void HahnSeries::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const HahnTerm& a, const HahnTerm& b) { return a.exp < b.exp; });
  std::vector<HahnTerm> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (t.coeff.field() != f_) throw InvalidInput("Hahn term coefficient from a different field");
    if (!out.empty() && out.back().exp == t.exp) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(std::move(t));
    }
  }
  terms_.clear();
  for (auto& t : out) {
    if (t.coeff.is_zero()) continue;
    if (prec_ && t.exp >= *prec_) continue;
    terms_.push_back(std::move(t));
  }
}

HahnSeries HahnSeries::monomial(const FqField* f, const Rat& exp, const FqElem& coeff) {
  return HahnSeries(f, {HahnTerm{exp, coeff}});
}

Val HahnSeries::valuation() const {
  if (!terms_.empty()) return Val::exact(terms_.front().exp);
  if (prec_) return Val::at_least(*prec_);
  return Val::infinity();
}

std::optional<FqElem> HahnSeries::coefficient(const Rat& exp) const {
  if (prec_ && exp >= *prec_) return std::nullopt;
  for (const auto& t : terms_) {
    if (t.exp == exp) return t.coeff;
    if (t.exp > exp) break;
  }
  return FqElem::zero(f_);
}

HahnSeries HahnSeries::truncated(const Rat& cutoff) const {
  return HahnSeries(f_, terms_, min_prec(prec_, cutoff));
}

HahnSeries HahnSeries::scaled(const FqElem& c) const {
  if (c.is_zero()) return HahnSeries(f_);
  std::vector<HahnTerm> t = terms_;
  for (auto& x : t) x.coeff *= c;
  return HahnSeries(f_, std::move(t), prec_);
}

HahnSeries HahnSeries::shifted(const Rat& by) const {
  std::vector<HahnTerm> t = terms_;
  for (auto& x : t) x.exp += by;
  std::optional<Rat> p = prec_;
  if (p) *p += by;
  return HahnSeries(f_, std::move(t), p);
}

std::string HahnSeries::str(const std::string& var) const {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    bool unit = t.coeff.is_one();
    if (!unit || t.exp.is_zero()) os << t.coeff.str();
    if (!t.exp.is_zero()) {
      if (!unit) os << "*";
      os << var;
      if (t.exp != Rat(1)) os << "^" << (t.exp.is_integer() && t.exp.sign() > 0 ? t.exp.str() : "(" + t.exp.str() + ")");
    }
  }
  if (prec_) {
    if (!first) os << " + ";
    os << "O(" << var << "^" << (prec_->is_integer() && prec_->sign() > 0 ? prec_->str() : "(" + prec_->str() + ")") << ")";
  } else if (first) {
    os << "0";
  }
  return os.str();
}

HahnSeries operator+(const HahnSeries& a, const HahnSeries& b) {
  check_same(a, b);
  std::vector<HahnTerm> t;
  t.reserve(a.terms().size() + b.terms().size());
  t.insert(t.end(), a.terms().begin(), a.terms().end());
  t.insert(t.end(), b.terms().begin(), b.terms().end());
  return HahnSeries(a.field(), std::move(t), min_prec(a.precision(), b.precision()));
}

HahnSeries operator-(const HahnSeries& a) {
  std::vector<HahnTerm> t = a.terms();
  for (auto& x : t) x.coeff = -x.coeff;
  return HahnSeries(a.field(), std::move(t), a.precision());
}

HahnSeries operator*(const HahnSeries& a, const HahnSeries& b) {
  check_same(a, b);
  if (a.is_exact_zero() || b.is_exact_zero()) return HahnSeries(a.field());
  // (a0 + O(x^pa)) (b0 + O(x^pb)) = a0 b0 + O(x^{min(pa + v(b), pb + v(a))})
  std::optional<Rat> prec;
  if (a.precision()) prec = min_prec(prec, *a.precision() + low_exponent(b));
  if (b.precision()) prec = min_prec(prec, *b.precision() + low_exponent(a));
  std::map<Rat, FqElem> acc;
  for (const auto& x : a.terms()) {
    for (const auto& y : b.terms()) {
      Rat e = x.exp + y.exp;
      if (prec && e >= *prec) break;
      auto [it, inserted] = acc.try_emplace(e, x.coeff * y.coeff);
      if (!inserted) it->second += x.coeff * y.coeff;
    }
  }
  std::vector<HahnTerm> t;
  t.reserve(acc.size());
  for (auto& [e, c] : acc) t.push_back(HahnTerm{e, c});
  return HahnSeries(a.field(), std::move(t), prec);
}

HahnSeries invert(const HahnSeries& a, const Rat& cutoff) {
  const FqField* f = a.field();
  if (a.is_exact_zero()) throw std::domain_error("Hahn series: inverse of zero");
  if (a.terms().empty()) throw PrecisionExhausted("invert: valuation is " + a.valuation().str() + ", not exact");
  const Rat e = a.terms().front().exp;
  const FqElem c_inv = a.terms().front().coeff.inverse();
  if (a.is_monomial()) return HahnSeries::monomial(f, -e, c_inv);

  // a = c x^e (1 + h) with v(h) > 0; 1/a = c^{-1} x^{-e} sum_k (-h)^k.
  HahnSeries unit = a.shifted(-e).scaled(c_inv);
  HahnSeries one = HahnSeries::constant(FqElem::one(f));
  Rat rel = cutoff + e;
  if (unit.precision()) rel = min(rel, *unit.precision());
  HahnSeries minus_h = (one - unit).truncated(rel);
  HahnSeries sum = one.truncated(rel);
  HahnSeries term = one.truncated(rel);
  while (true) {
    term = (term * minus_h).truncated(rel);
    if (term.terms().empty()) break;
    sum = sum + term;
  }
  HahnSeries result(f, sum.terms(), rel);
  return result.shifted(-e).scaled(c_inv);
}

HahnSeries pth_root(const HahnSeries& a) {
  const int p = a.field()->p();
  std::vector<HahnTerm> t;
  t.reserve(a.terms().size());
  for (const auto& x : a.terms()) t.push_back(HahnTerm{x.exp / Rat(p), x.coeff.pth_root()});
  std::optional<Rat> prec = a.precision();
  if (prec) *prec /= Rat(p);
  return HahnSeries(a.field(), std::move(t), prec);
}

HahnSeries frobenius(const HahnSeries& a) {
  const int p = a.field()->p();
  std::vector<HahnTerm> t;
  t.reserve(a.terms().size());
  for (const auto& x : a.terms()) t.push_back(HahnTerm{x.exp * Rat(p), x.coeff.frobenius()});
  std::optional<Rat> prec = a.precision();
  if (prec) *prec *= Rat(p);
  return HahnSeries(a.field(), std::move(t), prec);
}

HahnSeries pow(const HahnSeries& a, unsigned long n) {
  const auto p = static_cast<unsigned long>(a.field()->p());
  HahnSeries result = HahnSeries::constant(FqElem::one(a.field()));
  HahnSeries fp = a;
  while (n > 0) {
    unsigned long d = n % p;
    for (unsigned long i = 0; i < d; ++i) result = result * fp;
    n /= p;
    if (n > 0) fp = frobenius(fp);
  }
  return result;
}

ZeroState zero_state(const HahnSeries& a) {
  if (!a.terms().empty()) return ZeroState::NonZero;
  return a.is_exact() ? ZeroState::Zero : ZeroState::Unknown;
}

HahnSeries inverse(const HahnSeries& a) {
  Val v = a.valuation();
  return invert(a, -v.value() + Rat(8));
}

DefectSeries build_defect_series(int p, const std::vector<long>& gaps, const Rat& pi) {
  if (pi.sign() <= 0) throw InvalidInput("defect series: precision must be positive");
  if (gaps.empty()) throw InvalidInput("defect series: at least one gap exponent is required");
  if (gaps[0] < 1) throw InvalidInput("defect series: gap exponents must be positive");
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
    // 1-based: e_{i+1} >= e_i + i
    if (gaps[i + 1] < gaps[i] + static_cast<long>(i + 1))
      throw InvalidInput("defect series: gaps violate e_{i+1} >= e_i + i at i = " + std::to_string(i + 1));
  }
  const FqField* f = FqField::prime(p);
  DefectSeries out{HahnSeries(f), {}, false};
  auto below_cutoff = [&](long e) { return Rat(1) / pow(Rat(p), e) > pi; };
  std::vector<HahnTerm> terms;
  for (long e : gaps) {
    out.used_gaps.push_back(e);
    if (below_cutoff(e)) terms.push_back(HahnTerm{-(Rat(1) / pow(Rat(p), e)), FqElem::one(f)});
  }
  // Continue minimally while the next admissible term could still land below -pi.
  while (true) {
    const long i = static_cast<long>(out.used_gaps.size());
    const long next = out.used_gaps.back() + i;
    if (!below_cutoff(next)) break;
    out.used_gaps.push_back(next);
    out.extended = true;
    terms.push_back(HahnTerm{-(Rat(1) / pow(Rat(p), next)), FqElem::one(f)});
  }
  out.series = HahnSeries(f, std::move(terms), -pi);
  return out;
}

}  // namespace valdisc

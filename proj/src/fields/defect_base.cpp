#include <algorithm>

#include "valdisc/errors.hpp"
#include "valdisc/field.hpp"

namespace valdisc {

namespace {

constexpr std::size_t kCachedPowers = 9;

long rng_range(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

bool is_one(const LaurentPoly& f) {
  return f.is_constant() && !f.is_zero() && f.terms().begin()->second.is_one();
}

// Only pure x-powers are moved out of the denominator; y stays polynomial.
Fraction normalized(LaurentPoly num, LaurentPoly den) {
  if (den.is_zero()) throw std::domain_error("fraction with zero denominator");
  if (den.is_monomial() && den.terms().begin()->first[1].is_zero()) {
    LaurentPoly inv = den.monomial_inverse();
    return Fraction{num * inv, LaurentPoly::constant(num.field(), 2, FqElem::one(num.field()))};
  }
  return Fraction{std::move(num), std::move(den)};
}

}  // namespace

DefectBaseField::DefectBaseField(std::string id, const FqField* fq, PrecisionConfig cfg, std::vector<long> gaps)
    : Field(std::move(id), fq, nullptr, std::move(cfg)), gaps_(std::move(gaps)), y_{HahnSeries(fq), {}, false} {
  DefectSeries prime = build_defect_series(fq->p(), gaps_, precision().resolution);
  std::vector<HahnTerm> terms;
  for (const auto& t : prime.series.terms()) terms.push_back(HahnTerm{t.exp, FqElem::one(fq)});
  y_ = DefectSeries{HahnSeries(fq, terms, prime.series.precision()), prime.used_gaps, prime.extended};
  y_powers_.push_back(HahnSeries::constant(FqElem::one(fq)));
  for (std::size_t k = 1; k < kCachedPowers; ++k) y_powers_.push_back(pow(y_.series, k));
  if (y_.extended) {
    std::string g;
    for (long e : y_.used_gaps) g += (g.empty() ? "" : ",") + std::to_string(e);
    add_note("gap sequence extended by e_{i+1} = e_i + i to resolve the precision window: " + g);
  }
}

FieldPtr DefectBaseField::make(std::string id, const FqField* fq, std::vector<long> gaps, PrecisionConfig cfg) {
  return std::make_shared<DefectBaseField>(std::move(id), fq, std::move(cfg), std::move(gaps));
}

std::string DefectBaseField::describe() const {
  std::string g;
  for (long e : gaps_) g += (g.empty() ? "" : ",") + std::to_string(e);
  return fq()->describe() + "(x,y), y = sum_i x^(-p^(-e_i)), gaps (" + g + "), y known below " +
         y_.series.precision()->str();
}

FieldElement DefectBaseField::x_power(long m) const {
  return from_fraction(LaurentPoly::monomial(fq(), {Rat(m), Rat(0)}, FqElem::one(fq())),
                       LaurentPoly::constant(fq(), 2, FqElem::one(fq())));
}

FieldElement DefectBaseField::y() const {
  return from_fraction(LaurentPoly::monomial(fq(), {Rat(0), Rat(1)}, FqElem::one(fq())),
                       LaurentPoly::constant(fq(), 2, FqElem::one(fq())));
}

FieldElement DefectBaseField::from_fraction(LaurentPoly num, LaurentPoly den) const {
  for (const auto* f : {&num, &den}) {
    if (f->field() != fq() || f->nvars() != 2) throw InvalidInput("polynomial from the wrong ring for '" + id() + "'");
    for (const auto& [e, c] : f->terms())
      if (!e[0].is_integer() || !e[1].is_integer() || e[1].sign() < 0)
        throw InvalidInput("elements of '" + id() + "' are polynomials in x^{+-1} and y");
  }
  return FieldElement(self(), normalized(std::move(num), std::move(den)));
}

HahnSeries DefectBaseField::poly_image(const LaurentPoly& f) const {
  HahnSeries s(fq());
  for (const auto& [e, c] : f.terms()) {
    const auto k = static_cast<std::size_t>(e[1].to_long());
    HahnSeries yk = k < y_powers_.size() ? y_powers_[k] : pow(y_.series, k);
    s = s + yk.shifted(e[0]).scaled(c);
  }
  return s;
}

FieldElement DefectBaseField::zero() const {
  return FieldElement(self(), Fraction{LaurentPoly(fq(), 2), LaurentPoly::constant(fq(), 2, FqElem::one(fq()))});
}

FieldElement DefectBaseField::constant(const FqElem& c) const {
  return FieldElement(self(), Fraction{LaurentPoly::constant(fq(), 2, c),
                                       LaurentPoly::constant(fq(), 2, FqElem::one(fq()))});
}

FieldElement DefectBaseField::add(const FieldElement& a, const FieldElement& b) const {
  check_owner(a);
  check_owner(b);
  const Fraction& x = a.fraction();
  const Fraction& y = b.fraction();
  if (x.den == y.den) return FieldElement(self(), Fraction{x.num + y.num, x.den});
  return FieldElement(self(), normalized(x.num * y.den + y.num * x.den, x.den * y.den));
}

FieldElement DefectBaseField::neg(const FieldElement& a) const {
  check_owner(a);
  return FieldElement(self(), Fraction{-a.fraction().num, a.fraction().den});
}

FieldElement DefectBaseField::mul(const FieldElement& a, const FieldElement& b) const {
  check_owner(a);
  check_owner(b);
  const Fraction& x = a.fraction();
  const Fraction& y = b.fraction();
  if (is_one(x.den) && is_one(y.den)) return FieldElement(self(), Fraction{x.num * y.num, x.den});
  return FieldElement(self(), normalized(x.num * y.num, x.den * y.den));
}

FieldElement DefectBaseField::inv(const FieldElement& a) const {
  check_owner(a);
  const Fraction& x = a.fraction();
  if (x.num.is_zero()) throw std::domain_error("inverse of zero in '" + id() + "'");
  return FieldElement(self(), normalized(x.den, x.num));
}

Val DefectBaseField::valuation(const FieldElement& a) const {
  check_owner(a);
  const Fraction& x = a.fraction();
  if (x.num.is_zero()) return Val::infinity();
  Val vd = poly_image(x.den).valuation();
  if (!vd.is_exact()) throw PrecisionExhausted("denominator valuation is " + vd.str());
  Val vn = poly_image(x.num).valuation();
  return vn - vd.value();
}

ZeroState DefectBaseField::zero_state(const FieldElement& a) const {
  check_owner(a);
  // y is transcendental over k(x), so a nonzero polynomial is a nonzero element.
  return a.fraction().num.is_zero() ? ZeroState::Zero : ZeroState::NonZero;
}

std::string DefectBaseField::str(const FieldElement& a) const {
  static const std::vector<std::string> names{"x", "y"};
  const Fraction& x = a.fraction();
  if (is_one(x.den)) return x.num.str(names);
  return "(" + x.num.str(names) + ")/(" + x.den.str(names) + ")";
}

std::optional<HahnSeries> DefectBaseField::image(const FieldElement& a) const {
  check_owner(a);
  const Fraction& x = a.fraction();
  HahnSeries ni = poly_image(x.num);
  if (is_one(x.den)) return ni;
  HahnSeries di = poly_image(x.den);
  Rat dv = di.valuation().value();
  Rat cutoff = -dv + precision().horizon;
  if (ni.precision()) {
    if (ni.terms().empty()) return HahnSeries::unknown_above(fq(), *ni.precision() - dv);
    cutoff = *ni.precision() - dv - ni.terms().front().exp;
  }
  return ni * invert(di, cutoff);
}

std::optional<FieldElement> DefectBaseField::symbol(const std::string& name, const Rat& exponent) const {
  if (name != "x" && name != "y") return std::nullopt;
  if (!exponent.is_integer()) throw InvalidInput(name + " takes integer exponents in '" + id() + "'");
  long k = exponent.to_long();
  if (name == "x") return x_power(k);
  return y().pow(k);
}

FieldElement DefectBaseField::random_element(std::mt19937_64& rng, int spread) const {
  LaurentPoly f(fq(), 2);
  const long n = rng_range(rng, 1, 3);
  for (long t = 0; t < n; ++t) {
    auto c = static_cast<std::uint32_t>(rng_range(rng, 1, static_cast<long>(fq()->q()) - 1));
    f.add_term({Rat(rng_range(rng, -spread, spread)), Rat(rng_range(rng, 0, 2))}, FqElem(fq(), c));
  }
  return from_fraction(f, LaurentPoly::constant(fq(), 2, FqElem::one(fq())));
}

}  // namespace valdisc

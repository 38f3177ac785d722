#include "valdisc/errors.hpp"
#include "valdisc/field.hpp"

namespace valdisc {

namespace {

long rng_range(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

SeriesField::SeriesField(std::string id, const FqField* fq, FieldPtr parent, PrecisionConfig cfg)
    : Field(std::move(id), fq, std::move(parent), std::move(cfg)) {}

FieldPtr SeriesField::laurent(std::string id, const FqField* fq, std::string var, PrecisionConfig cfg) {
  auto f = std::make_shared<SeriesField>(std::move(id), fq, nullptr, std::move(cfg));
  f->var_ = std::move(var);
  return f;
}

FieldPtr SeriesField::radical(std::string id, const FieldPtr& parent, const FqElem& c, const Rat& a,
                              std::string generator) {
  auto* par = dynamic_cast<const SeriesField*>(parent.get());
  if (!par) throw InvalidInput("radical lattice step needs a series parent");
  if (c.is_zero()) throw InvalidInput("radical of zero");
  if (!par->in_lattice(a)) throw InvalidInput("radicand exponent outside the parent lattice");
  const Rat root_exp = a / Rat(par->p());
  if (par->in_lattice(root_exp)) throw InvalidInput("reducible: z^p - u has the root " + root_exp.str() + " in the parent");
  auto f = std::make_shared<SeriesField>(std::move(id), par->fq(), parent, par->precision());
  f->var_ = par->var_;
  f->gen_ = std::move(generator);
  f->step_ = par->step_ / Rat(par->p());
  f->gen_coeff_ = c.pth_root();
  f->gen_exp_ = root_exp;
  return f;
}

std::string SeriesField::describe() const {
  std::string k = fq()->describe();
  if (!parent()) return k + "((" + var_ + "))";
  return parent()->id() + "(" + gen_ + "), " + gen_ + " = " + var_ + "^(" + gen_exp_.str() + ")" +
         (gen_coeff_.is_one() ? "" : " * " + gen_coeff_.str());
}

bool SeriesField::in_lattice(const Rat& e) const { return (e / step_).is_integer(); }

FieldElement SeriesField::from_series(HahnSeries s) const {
  if (s.field() != fq()) throw InvalidInput("series over the wrong coefficient field for '" + id() + "'");
  for (const auto& t : s.terms())
    if (!in_lattice(t.exp))
      throw InvalidInput("exponent " + t.exp.str() + " is outside the lattice of '" + id() + "'");
  return FieldElement(self(), std::move(s));
}

FieldElement SeriesField::generator() const {
  if (!parent()) throw std::logic_error("base series field has no generator");
  return FieldElement(self(), HahnSeries::monomial(fq(), gen_exp_, gen_coeff_));
}

FieldElement SeriesField::zero() const { return FieldElement(self(), HahnSeries(fq())); }

FieldElement SeriesField::constant(const FqElem& c) const {
  if (c.is_zero()) return zero();
  return FieldElement(self(), HahnSeries::constant(c));
}

FieldElement SeriesField::add(const FieldElement& a, const FieldElement& b) const {
  check_owner(a);
  check_owner(b);
  return FieldElement(self(), a.series() + b.series());
}

FieldElement SeriesField::neg(const FieldElement& a) const {
  check_owner(a);
  return FieldElement(self(), -a.series());
}

FieldElement SeriesField::mul(const FieldElement& a, const FieldElement& b) const {
  check_owner(a);
  check_owner(b);
  return FieldElement(self(), a.series() * b.series());
}

FieldElement SeriesField::inv(const FieldElement& a) const {
  check_owner(a);
  const HahnSeries& s = a.series();
  if (s.is_exact_zero()) throw std::domain_error("inverse of zero in '" + id() + "'");
  Rat v = s.valuation().value();
  return FieldElement(self(), invert(s, -v + precision().horizon));
}

Val SeriesField::valuation(const FieldElement& a) const {
  check_owner(a);
  return a.series().valuation();
}

ZeroState SeriesField::zero_state(const FieldElement& a) const {
  check_owner(a);
  return valdisc::zero_state(a.series());
}

std::string SeriesField::str(const FieldElement& a) const { return a.series().str(var_); }

std::optional<HahnSeries> SeriesField::image(const FieldElement& a) const {
  check_owner(a);
  return a.series();
}

FieldElement SeriesField::step_basis(int i) const {
  if (i < 0 || i >= step_degree()) throw std::out_of_range("step_basis index");
  return FieldElement(self(), HahnSeries::monomial(fq(), step_ * Rat(i)));
}

std::vector<FieldElement> SeriesField::step_coords(const FieldElement& a) const {
  check_owner(a);
  if (!parent()) throw std::logic_error("'" + id() + "' has no parent");
  const long p = this->p();
  std::vector<std::vector<HahnTerm>> parts(static_cast<std::size_t>(p));
  for (const auto& t : a.series().terms()) {
    long k = (t.exp / step_).to_long();
    long i = ((k % p) + p) % p;
    parts[static_cast<std::size_t>(i)].push_back(HahnTerm{t.exp - step_ * Rat(i), t.coeff});
  }
  auto* par = static_cast<const SeriesField*>(parent().get());
  std::vector<FieldElement> out;
  for (long i = 0; i < p; ++i) {
    std::optional<Rat> prec = a.series().precision();
    if (prec) *prec -= step_ * Rat(i);
    out.push_back(par->from_series(HahnSeries(fq(), parts[static_cast<std::size_t>(i)], prec)));
  }
  return out;
}

FieldElement SeriesField::from_step_coords(const std::vector<FieldElement>& c) const {
  if (!parent()) throw std::logic_error("'" + id() + "' has no parent");
  if (static_cast<int>(c.size()) != step_degree()) throw InvalidInput("wrong number of coordinates");
  HahnSeries s(fq());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (&c[i].field() != parent().get()) throw InvalidInput("coordinate from the wrong field");
    s = s + c[i].series().shifted(step_ * Rat(static_cast<long>(i)));
  }
  return FieldElement(self(), s);
}

FieldElement SeriesField::lift_from_parent(const FieldElement& a) const {
  if (&a.field() != parent().get()) throw InvalidInput("lift_from_parent: element is not from the parent");
  return FieldElement(self(), a.series());
}

std::optional<FieldElement> SeriesField::symbol(const std::string& name, const Rat& exponent) const {
  if (name == var_) {
    if (!in_lattice(exponent))
      throw InvalidInput(var_ + "^(" + exponent.str() + ") is not in '" + id() + "'");
    return FieldElement(self(), HahnSeries::monomial(fq(), exponent));
  }
  if (!gen_.empty() && name == gen_) {
    if (!exponent.is_integer()) throw InvalidInput("generator powers must be integers");
    return generator().pow(exponent.to_long());
  }
  if (parent()) {
    auto s = parent()->symbol(name, exponent);
    if (s) return lift(*s, *this);
  }
  return std::nullopt;
}

FieldElement SeriesField::random_element(std::mt19937_64& rng, int spread) const {
  std::vector<HahnTerm> t;
  const long n = rng_range(rng, 1, 4);
  const long per_unit = (Rat(1) / step_).to_long();
  for (long i = 0; i < n; ++i) {
    long k = rng_range(rng, -spread * per_unit, 2 * spread * per_unit);
    auto c = static_cast<std::uint32_t>(rng_range(rng, 1, static_cast<long>(fq()->q()) - 1));
    t.push_back(HahnTerm{step_ * Rat(k), FqElem(fq(), c)});
  }
  return FieldElement(self(), HahnSeries(fq(), t));
}

}  // namespace valdisc

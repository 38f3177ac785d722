#include "valdisc/errors.hpp"
#include "valdisc/field.hpp"

namespace valdisc {

namespace {

long rng_range(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

ExpVec axpy(const ExpVec& x, long k, const ExpVec& g) {
  ExpVec r = x;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += Rat(k) * g[i];
  return r;
}

// Moves a monomial denominator into the numerator.
Fraction normalized(LaurentPoly num, LaurentPoly den) {
  if (den.is_zero()) throw std::domain_error("fraction with zero denominator");
  if (den.is_monomial()) {
    LaurentPoly inv = den.monomial_inverse();
    return Fraction{num * inv, LaurentPoly::constant(num.field(), num.nvars(), FqElem::one(num.field()))};
  }
  return Fraction{std::move(num), std::move(den)};
}

bool is_one(const LaurentPoly& f) {
  return f.is_constant() && !f.is_zero() && f.terms().begin()->second.is_one();
}

}  // namespace

MonomialField::MonomialField(std::string id, const FqField* fq, FieldPtr parent, PrecisionConfig cfg)
    : Field(std::move(id), fq, std::move(parent), std::move(cfg)) {}

FieldPtr MonomialField::base(std::string id, const FqField* fq, std::vector<std::string> names,
                             std::vector<Rat> weights, std::vector<long> denominators, PrecisionConfig cfg) {
  if (names.empty()) throw InvalidInput("monomial field needs at least one variable");
  if (weights.size() != names.size()) throw InvalidInput("one weight per variable is required");
  if (denominators.empty()) denominators.assign(names.size(), 1);
  if (denominators.size() != names.size()) throw InvalidInput("one lattice denominator per variable is required");
  for (long d : denominators)
    if (d <= 0) throw InvalidInput("lattice denominators must be positive");
  auto f = std::make_shared<MonomialField>(std::move(id), fq, nullptr, std::move(cfg));
  f->names_ = std::move(names);
  f->weights_ = std::move(weights);
  f->dens_ = std::move(denominators);
  return f;
}

FieldPtr MonomialField::refine(std::string id, const FieldPtr& parent, const FqElem& c, const ExpVec& a,
                               std::string generator) {
  auto* par = dynamic_cast<const MonomialField*>(parent.get());
  if (!par) throw InvalidInput("monomial refinement needs a monomial parent");
  if (c.is_zero()) throw InvalidInput("radical of zero");
  if (a.size() != par->names_.size()) throw InvalidInput("radicand exponent has the wrong length");
  if (!par->in_lattice(a)) throw InvalidInput("radicand exponent outside the parent lattice");
  ExpVec g = a;
  for (auto& x : g) x /= Rat(par->p());
  if (par->in_lattice(g)) throw InvalidInput("reducible: the radicand is a p-th power in '" + par->id() + "'");
  auto f = std::make_shared<MonomialField>(std::move(id), par->fq(), parent, par->precision());
  f->names_ = par->names_;
  f->weights_ = par->weights_;
  f->dens_ = par->dens_;
  f->gens_ = par->gens_;
  f->gens_.push_back(std::move(g));
  f->gen_ = std::move(generator);
  f->gen_coeff_ = c.pth_root();
  return f;
}

std::string MonomialField::describe() const {
  std::string s = fq()->describe() + "(";
  for (std::size_t i = 0; i < names_.size(); ++i) s += (i ? "," : "") + names_[i];
  s += ") weights (";
  for (std::size_t i = 0; i < weights_.size(); ++i) s += (i ? "," : "") + weights_[i].str();
  s += ")";
  if (!gens_.empty()) {
    LaurentPoly m = LaurentPoly::monomial(fq(), gens_.back(), gen_coeff_);
    s += ", " + parent()->id() + "(" + gen_ + "), " + gen_ + " = " + m.str(names_);
  }
  return s;
}

bool MonomialField::in_level(const ExpVec& e, std::size_t level) const { return coset_at(e, level).has_value(); }

std::optional<std::vector<int>> MonomialField::coset_at(const ExpVec& e, std::size_t level) const {
  if (e.size() != names_.size()) return std::nullopt;
  if (level == 0) {
    for (std::size_t i = 0; i < e.size(); ++i)
      if (!(e[i] * Rat(dens_[i])).is_integer()) return std::nullopt;
    return std::vector<int>{};
  }
  for (int c = 0; c < p(); ++c) {
    auto r = coset_at(axpy(e, -c, gens_[level - 1]), level - 1);
    if (r) {
      r->push_back(c);
      return r;
    }
  }
  return std::nullopt;
}

bool MonomialField::in_lattice(const ExpVec& e) const { return in_level(e, gens_.size()); }

std::optional<std::vector<int>> MonomialField::coset(const ExpVec& e) const { return coset_at(e, gens_.size()); }

FieldElement MonomialField::from_fraction(LaurentPoly num, LaurentPoly den) const {
  for (const auto* f : {&num, &den}) {
    if (f->field() != fq() || f->nvars() != names_.size())
      throw InvalidInput("polynomial from the wrong ring for '" + id() + "'");
    for (const auto& [e, c] : f->terms())
      if (!in_lattice(e)) throw InvalidInput("monomial outside the lattice of '" + id() + "'");
  }
  return FieldElement(self(), normalized(std::move(num), std::move(den)));
}

FieldElement MonomialField::from_poly(LaurentPoly num) const {
  LaurentPoly one = LaurentPoly::constant(fq(), names_.size(), FqElem::one(fq()));
  return from_fraction(std::move(num), std::move(one));
}

Fraction MonomialField::ground_denominator(const FieldElement& a) const {
  check_owner(a);
  Fraction f = a.fraction();
  auto in_ground = [&](const LaurentPoly& d) {
    for (const auto& [e, c] : d.terms())
      if (!in_level(e, 0)) return false;
    return true;
  };
  if (in_ground(f.den)) return f;
  unsigned long q = static_cast<unsigned long>(p());
  while (!in_ground(f.den.pow(q))) q *= static_cast<unsigned long>(p());
  return Fraction{f.num * f.den.pow(q - 1), f.den.pow(q)};
}

FieldElement MonomialField::generator() const {
  if (gens_.empty()) throw std::logic_error("base monomial field has no generator");
  return from_poly(LaurentPoly::monomial(fq(), gens_.back(), gen_coeff_));
}

FieldElement MonomialField::zero() const { return from_poly(LaurentPoly(fq(), names_.size())); }

FieldElement MonomialField::constant(const FqElem& c) const {
  return from_poly(LaurentPoly::constant(fq(), names_.size(), c));
}

FieldElement MonomialField::add(const FieldElement& a, const FieldElement& b) const {
  check_owner(a);
  check_owner(b);
  const Fraction& x = a.fraction();
  const Fraction& y = b.fraction();
  if (x.den == y.den) return FieldElement(self(), Fraction{x.num + y.num, x.den});
  return FieldElement(self(), normalized(x.num * y.den + y.num * x.den, x.den * y.den));
}

FieldElement MonomialField::neg(const FieldElement& a) const {
  check_owner(a);
  return FieldElement(self(), Fraction{-a.fraction().num, a.fraction().den});
}

FieldElement MonomialField::mul(const FieldElement& a, const FieldElement& b) const {
  check_owner(a);
  check_owner(b);
  const Fraction& x = a.fraction();
  const Fraction& y = b.fraction();
  if (is_one(x.den) && is_one(y.den)) return FieldElement(self(), Fraction{x.num * y.num, x.den});
  return FieldElement(self(), normalized(x.num * y.num, x.den * y.den));
}

FieldElement MonomialField::inv(const FieldElement& a) const {
  check_owner(a);
  const Fraction& x = a.fraction();
  if (x.num.is_zero()) throw std::domain_error("inverse of zero in '" + id() + "'");
  return FieldElement(self(), normalized(x.den, x.num));
}

Val MonomialField::valuation(const FieldElement& a) const {
  check_owner(a);
  const Fraction& x = a.fraction();
  if (x.num.is_zero()) return Val::infinity();
  return Val::exact(x.num.weighted_degree(weights_) - x.den.weighted_degree(weights_));
}

ZeroState MonomialField::zero_state(const FieldElement& a) const {
  check_owner(a);
  return a.fraction().num.is_zero() ? ZeroState::Zero : ZeroState::NonZero;
}

std::string MonomialField::str(const FieldElement& a) const {
  const Fraction& x = a.fraction();
  if (is_one(x.den)) return x.num.str(names_);
  return "(" + x.num.str(names_) + ")/(" + x.den.str(names_) + ")";
}

FieldElement MonomialField::step_basis(int i) const {
  if (i < 0 || i >= step_degree()) throw std::out_of_range("step_basis index");
  if (gens_.empty()) return one();
  ExpVec e(names_.size(), Rat(0));
  return from_poly(LaurentPoly::monomial(fq(), axpy(e, i, gens_.back()), FqElem::one(fq())));
}

std::vector<FieldElement> MonomialField::step_coords(const FieldElement& a) const {
  check_owner(a);
  if (!parent()) throw std::logic_error("'" + id() + "' has no parent");
  auto* par = static_cast<const MonomialField*>(parent().get());
  Fraction f = a.fraction();
  bool den_in_parent = true;
  for (const auto& [e, c] : f.den.terms()) den_in_parent = den_in_parent && par->in_lattice(e);
  if (!den_in_parent) {
    // den^p lies in the parent for any radical step.
    LaurentPoly m = f.den.pow(static_cast<unsigned long>(p() - 1));
    f = Fraction{f.num * m, f.den * m};
  }
  const std::size_t level = gens_.size();
  std::vector<LaurentPoly> parts(static_cast<std::size_t>(p()), LaurentPoly(fq(), names_.size()));
  for (const auto& [e, c] : f.num.terms()) {
    auto cs = coset(e);
    if (!cs) throw std::logic_error("monomial outside the lattice");
    int i = (*cs)[level - 1];
    parts[static_cast<std::size_t>(i)].add_term(axpy(e, -i, gens_.back()), c);
  }
  std::vector<FieldElement> out;
  for (auto& part : parts) out.push_back(par->from_fraction(part, f.den));
  return out;
}

FieldElement MonomialField::from_step_coords(const std::vector<FieldElement>& c) const {
  if (!parent()) throw std::logic_error("'" + id() + "' has no parent");
  if (static_cast<int>(c.size()) != step_degree()) throw InvalidInput("wrong number of coordinates");
  FieldElement s = zero();
  for (std::size_t i = 0; i < c.size(); ++i) s = s + lift_from_parent(c[i]) * step_basis(static_cast<int>(i));
  return s;
}

FieldElement MonomialField::lift_from_parent(const FieldElement& a) const {
  if (&a.field() != parent().get()) throw InvalidInput("lift_from_parent: element is not from the parent");
  return FieldElement(self(), a.fraction());
}

ValueGroup MonomialField::value_group_bound() const {
  Rat g(0);
  for (std::size_t i = 0; i < weights_.size(); ++i) g = rat_gcd(g, weights_[i] / Rat(dens_[i]));
  for (const auto& e : gens_) g = rat_gcd(g, dot(weights_, e));
  return ValueGroup::cyclic(g);
}

std::optional<FieldElement> MonomialField::symbol(const std::string& name, const Rat& exponent) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] != name) continue;
    ExpVec e(names_.size(), Rat(0));
    e[i] = exponent;
    if (!in_lattice(e)) throw InvalidInput(name + "^(" + exponent.str() + ") is not in '" + id() + "'");
    return from_poly(LaurentPoly::monomial(fq(), e, FqElem::one(fq())));
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

FieldElement MonomialField::random_element(std::mt19937_64& rng, int spread) const {
  LaurentPoly f(fq(), names_.size());
  const long n = rng_range(rng, 1, 4);
  for (long t = 0; t < n; ++t) {
    ExpVec e(names_.size(), Rat(0));
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = Rat(rng_range(rng, -spread, 2 * spread), dens_[i]);
    for (const auto& g : gens_) e = axpy(e, rng_range(rng, 0, p() - 1), g);
    auto c = static_cast<std::uint32_t>(rng_range(rng, 1, static_cast<long>(fq()->q()) - 1));
    f.add_term(e, FqElem(fq(), c));
  }
  return from_poly(f);
}

}  // namespace valdisc

#include "valdisc/errors.hpp"
#include "valdisc/field.hpp"
#include "valdisc/matrix.hpp"

namespace valdisc {

namespace {

long rng_range(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Val divided(const Val& v, long n) {
  if (v.is_infinite()) return v;
  Rat q = v.bound() / Rat(n);
  return v.is_exact() ? Val::exact(q) : Val::at_least(q);
}

bool certainly_zero(const FieldElement& a) { return a.zero_state() == ZeroState::Zero; }

}  // namespace

std::string ext_kind_name(ExtKind k) {
  switch (k) {
    case ExtKind::Radical:
      return "radical";
    case ExtKind::ArtinSchreier:
      return "artin_schreier";
    case ExtKind::General:
      break;
  }
  return "general";
}

ExtKind parse_ext_kind(const std::string& s) {
  if (s == "radical") return ExtKind::Radical;
  if (s == "artin_schreier") return ExtKind::ArtinSchreier;
  if (s == "general") return ExtKind::General;
  throw InvalidInput("unknown extension kind '" + s + "'");
}

ExtensionField::ExtensionField(std::string id, FieldPtr parent, std::vector<FieldElement> poly, ExtKind kind,
                               std::string generator)
    : Field(std::move(id), parent->fq(), parent, parent->precision()),
      poly_(std::move(poly)),
      n_(static_cast<int>(poly_.size()) - 1),
      ext_kind_(kind),
      gen_(std::move(generator)) {
  if (n_ < 2) throw InvalidInput("extension polynomial must have degree >= 2");
  for (const auto& c : poly_)
    if (&c.field() != this->parent().get()) throw InvalidInput("polynomial coefficient from the wrong field");
  if (!certainly_zero(poly_.back() - this->parent()->one())) throw InvalidInput("extension polynomial must be monic");
}

std::string ExtensionField::describe() const {
  std::string s;
  for (int i = n_; i >= 0; --i) {
    const auto& c = poly_[static_cast<std::size_t>(i)];
    if (certainly_zero(c)) continue;
    std::string mono = i == 0 ? "" : (i == 1 ? gen_ : gen_ + "^" + std::to_string(i));
    std::string coef = c.str();
    if (!s.empty()) s += " + ";
    if (i == 0)
      s += "(" + coef + ")";
    else if (certainly_zero(c - parent()->one()))
      s += mono;
    else
      s += "(" + coef + ")*" + mono;
  }
  return parent()->id() + "[" + gen_ + "]/(" + s + "), " + ext_kind_name(ext_kind_);
}

FieldElement ExtensionField::make(std::vector<FieldElement> c) const { return FieldElement(self(), Coords{std::move(c)}); }

FieldElement ExtensionField::generator() const {
  std::vector<FieldElement> c(static_cast<std::size_t>(n_), parent()->zero());
  c[1] = parent()->one();
  return make(std::move(c));
}

FieldElement ExtensionField::zero() const {
  return make(std::vector<FieldElement>(static_cast<std::size_t>(n_), parent()->zero()));
}

FieldElement ExtensionField::constant(const FqElem& c) const {
  std::vector<FieldElement> v(static_cast<std::size_t>(n_), parent()->zero());
  v[0] = parent()->constant(c);
  return make(std::move(v));
}

FieldElement ExtensionField::add(const FieldElement& a, const FieldElement& b) const {
  check_owner(a);
  check_owner(b);
  std::vector<FieldElement> c;
  c.reserve(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) c.push_back(a.coords()[static_cast<std::size_t>(i)] + b.coords()[static_cast<std::size_t>(i)]);
  return make(std::move(c));
}

FieldElement ExtensionField::neg(const FieldElement& a) const {
  check_owner(a);
  std::vector<FieldElement> c;
  for (const auto& x : a.coords()) c.push_back(-x);
  return make(std::move(c));
}

FieldElement ExtensionField::mul(const FieldElement& a, const FieldElement& b) const {
  check_owner(a);
  check_owner(b);
  const auto n = static_cast<std::size_t>(n_);
  const auto& x = a.coords();
  const auto& y = b.coords();
  std::vector<FieldElement> prod(2 * n - 1, parent()->zero());
  for (std::size_t i = 0; i < n; ++i) {
    if (certainly_zero(x[i])) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (certainly_zero(y[j])) continue;
      prod[i + j] = prod[i + j] + x[i] * y[j];
    }
  }
  for (std::size_t d = 2 * n - 2; d >= n; --d) {
    FieldElement top = prod[d];
    if (certainly_zero(top)) continue;
    for (std::size_t k = 0; k < n; ++k) {
      if (certainly_zero(poly_[k])) continue;
      prod[d - n + k] = prod[d - n + k] - top * poly_[k];
    }
  }
  prod.resize(n, parent()->zero());
  return make(std::move(prod));
}

namespace {

Matrix<FieldElement> multiplication_matrix(const ExtensionField& E, const FieldElement& a) {
  const auto n = static_cast<std::size_t>(E.step_degree());
  Matrix<FieldElement> M(n, n, E.parent()->zero());
  FieldElement col = a;
  FieldElement z = E.generator();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) M(i, j) = col.coords()[i];
    if (j + 1 < n) col = col * z;
  }
  return M;
}

}  // namespace

std::vector<FieldElement> ExtensionField::charpoly(const FieldElement& a) const {
  check_owner(a);
  return charpoly_berkowitz(multiplication_matrix(*this, a));
}

FieldElement ExtensionField::norm(const FieldElement& a) const {
  check_owner(a);
  return determinant(multiplication_matrix(*this, a));
}

FieldElement ExtensionField::inv(const FieldElement& a) const {
  check_owner(a);
  if (zero_state(a) == ZeroState::Zero) throw std::domain_error("inverse of zero in '" + id() + "'");
  // Cayley-Hamilton: a^n + c1 a^{n-1} + ... + cn = 0.
  auto cp = charpoly(a);
  FieldElement acc = one();
  for (int k = 1; k < n_; ++k) acc = acc * a + lift_from_parent(cp[static_cast<std::size_t>(k)]);
  FieldElement cn = cp[static_cast<std::size_t>(n_)];
  return acc * lift_from_parent(-cn.inverse());
}

Val ExtensionField::valuation(const FieldElement& a) const {
  check_owner(a);
  if (zero_state(a) == ZeroState::Zero) return Val::infinity();
  Val vn = norm(a).valuation();
  if (vn.is_infinite()) throw ConsistencyError("norm of a nonzero element vanished in '" + id() + "'");
  return divided(vn, n_);
}

ZeroState ExtensionField::zero_state(const FieldElement& a) const {
  check_owner(a);
  bool unknown = false;
  for (const auto& c : a.coords()) {
    ZeroState s = c.zero_state();
    if (s == ZeroState::NonZero) return ZeroState::NonZero;
    if (s == ZeroState::Unknown) unknown = true;
  }
  return unknown ? ZeroState::Unknown : ZeroState::Zero;
}

std::string ExtensionField::str(const FieldElement& a) const {
  std::string s;
  for (int i = 0; i < n_; ++i) {
    const auto& c = a.coords()[static_cast<std::size_t>(i)];
    if (certainly_zero(c)) continue;
    if (!s.empty()) s += " + ";
    std::string mono = i == 1 ? gen_ : gen_ + "^" + std::to_string(i);
    if (i == 0)
      s += "(" + c.str() + ")";
    else if (certainly_zero(c - parent()->one()))
      s += mono;
    else
      s += "(" + c.str() + ")*" + mono;
  }
  return s.empty() ? "0" : s;
}

std::optional<HahnSeries> ExtensionField::image(const FieldElement& a) const {
  check_owner(a);
  if (!root_) return std::nullopt;
  HahnSeries s(fq());
  for (int i = 0; i < n_; ++i) {
    const auto& c = a.coords()[static_cast<std::size_t>(i)];
    if (certainly_zero(c)) continue;
    auto ci = c.image();
    if (!ci) return std::nullopt;
    s = s + *ci * pow(*root_, static_cast<unsigned long>(i));
  }
  return s;
}

FieldElement ExtensionField::step_basis(int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("step_basis index");
  std::vector<FieldElement> c(static_cast<std::size_t>(n_), parent()->zero());
  c[static_cast<std::size_t>(i)] = parent()->one();
  return make(std::move(c));
}

std::vector<FieldElement> ExtensionField::step_coords(const FieldElement& a) const {
  check_owner(a);
  return a.coords();
}

FieldElement ExtensionField::from_step_coords(const std::vector<FieldElement>& c) const {
  if (static_cast<int>(c.size()) != n_) throw InvalidInput("wrong number of coordinates");
  for (const auto& x : c)
    if (&x.field() != parent().get()) throw InvalidInput("coordinate from the wrong field");
  return make(c);
}

FieldElement ExtensionField::lift_from_parent(const FieldElement& a) const {
  if (&a.field() != parent().get()) throw InvalidInput("lift_from_parent: element is not from the parent");
  std::vector<FieldElement> c(static_cast<std::size_t>(n_), parent()->zero());
  c[0] = a;
  return make(std::move(c));
}

ValueGroup ExtensionField::value_group_bound() const { return parent()->value_group_bound().divided(n_); }

std::optional<FieldElement> ExtensionField::symbol(const std::string& name, const Rat& exponent) const {
  if (name == gen_) {
    if (!exponent.is_integer()) throw InvalidInput("generator powers must be integers");
    return generator().pow(exponent.to_long());
  }
  auto s = parent()->symbol(name, exponent);
  if (s) return lift(*s, *this);
  return std::nullopt;
}

FieldElement ExtensionField::random_element(std::mt19937_64& rng, int spread) const {
  std::vector<FieldElement> c;
  for (int i = 0; i < n_; ++i) {
    if (rng_range(rng, 0, 3) == 0)
      c.push_back(parent()->zero());
    else
      c.push_back(parent()->random_element(rng, spread));
  }
  return make(std::move(c));
}

// --------------------------------------------------------------- embeddings

HahnSeries artin_schreier_root(const HahnSeries& u, const PrecisionConfig& cfg) {
  const FqField* f = u.field();
  const int p = f->p();
  if (u.precision() && u.precision()->sign() <= 0)
    throw PrecisionExhausted("Artin-Schreier root: constant term of the radicand is hidden by truncation");
  std::vector<HahnTerm> neg, pos;
  FqElem c0 = FqElem::zero(f);
  for (const auto& t : u.terms()) {
    if (t.exp.sign() < 0)
      neg.push_back(t);
    else if (t.exp.sign() > 0)
      pos.push_back(t);
    else
      c0 = t.coeff;
  }
  HahnSeries r(f);
  if (!neg.empty()) {
    // sum_{k>=1} u_-^{p^-k}; the k-th term lies in [v(u)/p^k, 0)
    const Rat cut = -cfg.resolution;
    HahnSeries base(f, neg);
    HahnSeries acc = HahnSeries::unknown_above(f, cut);
    HahnSeries term = base;
    Rat lead = neg.front().exp;
    for (long k = 1;; ++k) {
      term = pth_root(term);
      lead /= Rat(p);
      if (lead >= cut) break;
      acc = acc + term.truncated(cut);
    }
    r = r + acc;
  }
  if (!c0.is_zero()) {
    std::optional<FqElem> root;
    for (std::uint32_t a = 0; a < f->q() && !root; ++a) {
      FqElem x(f, a);
      if (x.pow(static_cast<std::uint64_t>(p)) - x == c0) root = x;
    }
    if (!root) throw InvalidInput("X^p - X - " + c0.str() + " has no root in " + f->describe() + ": unramified step");
    r = r + HahnSeries::constant(*root);
  }
  if (!pos.empty()) {
    // -sum_{k>=0} u_+^{p^k}
    HahnSeries base(f, pos, u.precision());
    Rat cut = pos.front().exp + cfg.horizon;
    if (u.precision()) cut = min(cut, *u.precision());
    HahnSeries acc = HahnSeries::unknown_above(f, cut);
    HahnSeries term = base;
    Rat lead = pos.front().exp;
    while (lead < cut) {
      acc = acc - term.truncated(cut);
      term = frobenius(term);
      lead *= Rat(p);
    }
    r = r + acc;
  }
  return r;
}

HahnSeries embed_root(const Field& node) {
  if (auto* s = dynamic_cast<const SeriesField*>(&node); s && s->parent()) return s->generator().series();
  if (auto* e = dynamic_cast<const ExtensionField*>(&node)) {
    if (e->root()) return *e->root();
    throw InvalidInput("'" + node.id() + "' has no series embedding (" + ext_kind_name(e->ext_kind()) + " step)");
  }
  throw InvalidInput("'" + node.id() + "' is not an embeddable extension step");
}

HahnSeries embed_residual(const Field& node) {
  if (auto* s = dynamic_cast<const SeriesField*>(&node); s && s->parent()) {
    // z^p - c t^a vanishes identically on the generator monomial.
    HahnSeries z = s->generator().series();
    return frobenius(z) - pow(z, static_cast<unsigned long>(s->p()));
  }
  auto* e = dynamic_cast<const ExtensionField*>(&node);
  if (!e) throw InvalidInput("'" + node.id() + "' is not an embeddable extension step");
  HahnSeries r = embed_root(node);
  HahnSeries acc(node.fq());
  for (std::size_t i = 0; i < e->poly().size(); ++i) {
    const auto& c = e->poly()[i];
    if (certainly_zero(c)) continue;
    auto ci = c.image();
    if (!ci) throw InvalidInput("parent of '" + node.id() + "' has no series image");
    acc = acc + *ci * pow(r, i);
  }
  return acc;
}

// ---------------------------------------------------------- make_extension

namespace {

std::optional<FqElem> constant_root(const std::vector<FieldElement>& poly) {
  const Field& par = poly.front().field();
  const FqField* f = par.fq();
  for (std::uint32_t a = 0; a < f->q(); ++a) {
    FieldElement x = par.constant(FqElem(f, a));
    FieldElement acc = par.zero();
    for (std::size_t i = poly.size(); i-- > 0;) acc = acc * x + poly[i];
    if (acc.zero_state() == ZeroState::Zero) return FqElem(f, a);
  }
  return std::nullopt;
}

// First exponent below the precision that is outside the lattice of `s`.
std::optional<Rat> first_off_lattice(const HahnSeries& r, const SeriesField& s) {
  for (const auto& t : r.terms())
    if (!s.in_lattice(t.exp)) return t.exp;
  return std::nullopt;
}

std::shared_ptr<ExtensionField> coordinate_extension(std::string id, const FieldPtr& parent,
                                                     const std::vector<FieldElement>& poly, ExtKind kind,
                                                     std::string generator) {
  return std::make_shared<ExtensionField>(std::move(id), parent, poly, kind, std::move(generator));
}

}  // namespace

FieldPtr make_extension(std::string id, const FieldPtr& parent, const std::vector<FieldElement>& poly_in, ExtKind kind,
                        std::string generator, int degree_cap) {
  if (poly_in.size() < 3) throw InvalidInput("extension polynomial must have degree >= 2");
  std::vector<FieldElement> poly;
  for (const auto& c : poly_in) poly.push_back(lift(c, *parent));
  const int n = static_cast<int>(poly.size()) - 1;
  const int p = parent->p();
  if (!certainly_zero(poly.back() - parent->one())) throw InvalidInput("extension polynomial must be monic");
  for (const auto& c : poly)
    if (c.zero_state() == ZeroState::Unknown)
      throw PrecisionExhausted("extension polynomial has a coefficient hidden by truncation");

  if (kind == ExtKind::Radical || kind == ExtKind::ArtinSchreier) {
    if (n != p) throw InvalidInput(ext_kind_name(kind) + " steps have degree p = " + std::to_string(p));
    for (int i = 1; i < n; ++i) {
      const auto& c = poly[static_cast<std::size_t>(i)];
      bool ok = (kind == ExtKind::ArtinSchreier && i == 1) ? certainly_zero(c + parent->one()) : certainly_zero(c);
      if (!ok) throw InvalidInput("polynomial does not have the " + ext_kind_name(kind) + " shape");
    }
  }
  if (kind == ExtKind::General && n > degree_cap)
    throw InvalidInput("general extensions are capped at degree " + std::to_string(degree_cap));

  if (auto root = constant_root(poly))
    throw InvalidInput("reducible: the constant " + root->str() + " is a root");

  const FieldElement u = -poly[0];
  auto* series_parent = dynamic_cast<const SeriesField*>(parent.get());
  auto* monomial_parent = dynamic_cast<const MonomialField*>(parent.get());

  if (kind == ExtKind::Radical) {
    if (series_parent) {
      const HahnSeries& s = u.series();
      if (s.is_monomial()) return SeriesField::radical(std::move(id), parent, s.terms()[0].coeff, s.terms()[0].exp, std::move(generator));
      HahnSeries r = pth_root(s);
      if (!first_off_lattice(r, *series_parent)) {
        if (r.is_exact()) throw InvalidInput("reducible: the p-th root of the radicand lies in '" + parent->id() + "'");
        throw PrecisionExhausted("cannot decide whether the radicand is a p-th power at this precision");
      }
      auto e = coordinate_extension(std::move(id), parent, poly, kind, std::move(generator));
      e->set_root(r);
      e->note("irreducible: the p-th root of the radicand has an exponent outside the parent lattice");
      return e;
    }
    if (monomial_parent) {
      Fraction f = u.fraction();
      LaurentPoly test = f.num * f.den.pow(static_cast<unsigned long>(p - 1));
      bool is_power = true;
      for (const auto& [e, c] : test.terms()) {
        ExpVec g = e;
        for (auto& x : g) x /= Rat(p);
        is_power = is_power && monomial_parent->in_lattice(g);
      }
      if (is_power) throw InvalidInput("reducible: the radicand is a p-th power in '" + parent->id() + "'");
      if (f.num.is_monomial() && f.den.is_constant()) {
        const auto& [e, c] = *f.num.terms().begin();
        FqElem coef = c / f.den.terms().begin()->second;
        return MonomialField::refine(std::move(id), parent, coef, e, std::move(generator));
      }
      auto e = coordinate_extension(std::move(id), parent, poly, kind, std::move(generator));
      e->note("irreducible: the radicand is not a p-th power (some exponent is not p-divisible in the lattice)");
      return e;
    }
    auto e = coordinate_extension(std::move(id), parent, poly, kind, std::move(generator));
    Val vu = u.valuation();
    if (vu.is_exact() && !parent->value_group_bound().contains(vu.value() / Rat(p)))
      e->note("irreducible: v(u)/p = " + (vu.value() / Rat(p)).str() + " lies outside the value group of '" +
              parent->id() + "'");
    else
      e->note("irreducibility over '" + parent->id() + "' not certified beyond the constant-root search");
    if (parent->has_image()) {
      auto ui = u.image();
      if (ui) e->set_root(pth_root(*ui));
    }
    return e;
  }

  if (kind == ExtKind::ArtinSchreier) {
    auto e = coordinate_extension(std::move(id), parent, poly, kind, std::move(generator));
    std::optional<HahnSeries> root;
    if (parent->has_image()) {
      auto ui = u.image();
      if (ui) {
        try {
          root = artin_schreier_root(*ui, parent->precision());
        } catch (const InvalidInput&) {
          // constant term without an F_q-root: unramified, no series embedding
        }
      }
    }
    Val vu = u.valuation();
    bool certified = false;
    if (vu.is_exact() && vu.value().sign() < 0 && !parent->value_group_bound().contains(vu.value() / Rat(p))) {
      e->note("irreducible: v(u)/p = " + (vu.value() / Rat(p)).str() + " lies outside the value group of '" +
              parent->id() + "'");
      certified = true;
    } else if (series_parent) {
      // Complete base: a root exists in the parent iff the series root does.
      if (!root) {
        e->note("irreducible: the residue polynomial X^p - X - u(0) has no root in the residue field");
        certified = true;
      } else if (auto off = first_off_lattice(*root, *series_parent)) {
        e->note("irreducible: the series root has the exponent " + off->str() + " outside the parent lattice");
        certified = true;
      } else if (root->is_exact() || (vu.is_exact() && vu.value().sign() >= 0)) {
        throw InvalidInput("reducible: z^p - z - u has a root in '" + parent->id() + "'");
      } else {
        throw PrecisionExhausted("cannot decide irreducibility of the Artin-Schreier polynomial at this precision");
      }
    }
    if (!certified)
      e->note("irreducibility over '" + parent->id() +
              "' not certified beyond the constant-root search; the degree is taken as given");
    if (root) e->set_root(*root);
    return e;
  }

  auto e = coordinate_extension(std::move(id), parent, poly, kind, std::move(generator));
  e->note("general step: irreducibility not certified beyond the constant-root search; no series embedding");
  return e;
}

}  // namespace valdisc

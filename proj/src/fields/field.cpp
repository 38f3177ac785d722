#include "valdisc/field.hpp"

#include "valdisc/errors.hpp"

namespace valdisc {

namespace {

Rat strip_p(const Rat& q, int p) {
  mpz_class n = abs(q.num()), d = q.den();
  if (n == 0) return Rat(0);
  while (n % p == 0) n /= p;
  while (d % p == 0) d /= p;
  return Rat(mpq_class(n, d));
}

bool is_p_power(mpz_class n, int p) {
  while (n % p == 0) n /= p;
  return n == 1;
}

std::pair<FieldElement, FieldElement> coerce(const FieldElement& a, const FieldElement& b) {
  if (a.owner() == b.owner()) return {a, b};
  if (a.field().has_ancestor(b.field())) return {a, lift(b, a.field())};
  if (b.field().has_ancestor(a.field())) return {lift(a, b.field()), b};
  throw InvalidInput("elements of unrelated fields '" + a.field().id() + "' and '" + b.field().id() + "'");
}

}  // namespace

// ---------------------------------------------------------------- ValueGroup

ValueGroup ValueGroup::cyclic(const Rat& g) { return ValueGroup(g.sign() < 0 ? -g : g, 0); }

ValueGroup ValueGroup::p_divisible(const Rat& g, int p) { return ValueGroup(strip_p(g, p), p); }

bool ValueGroup::contains(const Rat& r) const {
  if (g_.is_zero()) return r.is_zero();
  Rat q = r / g_;
  if (p_ == 0) return q.is_integer();
  return is_p_power(q.den(), p_);
}

ValueGroup ValueGroup::joined(const Rat& r) const {
  Rat g = rat_gcd(g_, r);
  return p_ == 0 ? cyclic(g) : p_divisible(g, p_);
}

ValueGroup ValueGroup::divided(long e) const {
  if (e <= 0) throw std::invalid_argument("ValueGroup::divided: e must be positive");
  return p_ == 0 ? cyclic(g_ / Rat(e)) : p_divisible(g_ / Rat(e), p_);
}

long ValueGroup::index_over(const ValueGroup& sub) const {
  if (sub.p_ != p_) throw std::logic_error("ValueGroup::index_over: groups of different type");
  if (g_.is_zero()) return 1;
  if (sub.g_.is_zero()) throw std::logic_error("ValueGroup::index_over: infinite index");
  Rat q = p_ == 0 ? sub.g_ / g_ : strip_p(sub.g_ / g_, p_);
  if (!q.is_integer()) throw std::logic_error("ValueGroup::index_over: not a subgroup");
  return q.to_long();
}

std::string ValueGroup::str() const {
  if (p_ == 0) return g_.str() + "*Z";
  return g_.str() + "*Z[1/" + std::to_string(p_) + "]";
}

// -------------------------------------------------------------- FieldElement

FieldElement::FieldElement(FieldPtr owner, Repr repr) : owner_(std::move(owner)), repr_(std::move(repr)) {
  if (!owner_) throw std::logic_error("FieldElement without owner");
}

const HahnSeries& FieldElement::series() const {
  if (auto* s = std::get_if<HahnSeries>(&repr_)) return *s;
  throw std::logic_error("element of '" + owner_->id() + "' is not series-backed");
}

const Fraction& FieldElement::fraction() const {
  if (auto* f = std::get_if<Fraction>(&repr_)) return *f;
  throw std::logic_error("element of '" + owner_->id() + "' is not a fraction");
}

const std::vector<FieldElement>& FieldElement::coords() const {
  if (auto* c = std::get_if<Coords>(&repr_)) return c->c;
  throw std::logic_error("element of '" + owner_->id() + "' is not coordinate-backed");
}

Val FieldElement::valuation() const { return owner_->valuation(*this); }
ZeroState FieldElement::zero_state() const { return owner_->zero_state(*this); }
std::optional<HahnSeries> FieldElement::image() const { return owner_->image(*this); }
FieldElement FieldElement::inverse() const { return owner_->inv(*this); }
std::string FieldElement::str() const { return owner_->str(*this); }

FieldElement FieldElement::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  FieldElement result = owner_->one();
  FieldElement base = *this;
  auto e = static_cast<unsigned long>(n);
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  auto [x, y] = coerce(a, b);
  return x.field().add(x, y);
}

FieldElement operator-(const FieldElement& a) { return a.field().neg(a); }

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  auto [x, y] = coerce(a, b);
  return x.field().add(x, x.field().neg(y));
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  auto [x, y] = coerce(a, b);
  return x.field().mul(x, y);
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  auto [x, y] = coerce(a, b);
  return x.field().mul(x, x.field().inv(y));
}

bool equal(const FieldElement& a, const FieldElement& b) { return (a - b).zero_state() == ZeroState::Zero; }

// --------------------------------------------------------------------- Field

Field::Field(std::string id, const FqField* fq, FieldPtr parent, PrecisionConfig cfg)
    : id_(std::move(id)), fq_(fq), parent_(std::move(parent)), cfg_(std::move(cfg)) {
  if (cfg_.resolution.sign() <= 0) throw InvalidInput("precision resolution must be positive");
  if (cfg_.horizon.sign() <= 0) throw InvalidInput("precision horizon must be positive");
}

void Field::check_owner(const FieldElement& a) const {
  if (&a.field() != this) throw InvalidInput("element of '" + a.field().id() + "' used in '" + id_ + "'");
}

const Field& Field::ground() const {
  const Field* f = this;
  while (f->parent_) f = f->parent_.get();
  return *f;
}

bool Field::has_ancestor(const Field& a) const {
  for (const Field* f = this; f; f = f->parent_.get())
    if (f == &a) return true;
  return false;
}

long Field::degree_over(const Field& ancestor) const {
  long d = 1;
  for (const Field* f = this; f != &ancestor; f = f->parent_.get()) {
    if (!f->parent_) throw InvalidInput("'" + ancestor.id() + "' is not below '" + id_ + "'");
    d *= f->step_degree();
  }
  return d;
}

std::optional<HahnSeries> Field::image(const FieldElement& a) const {
  check_owner(a);
  return std::nullopt;
}

FieldElement Field::step_basis(int i) const {
  if (i == 0) return one();
  throw std::out_of_range("step_basis index");
}

std::vector<FieldElement> Field::step_coords(const FieldElement& a) const {
  check_owner(a);
  throw std::logic_error("'" + id_ + "' has no parent");
}

FieldElement Field::from_step_coords(const std::vector<FieldElement>&) const {
  throw std::logic_error("'" + id_ + "' has no parent");
}

FieldElement Field::lift_from_parent(const FieldElement&) const {
  throw std::logic_error("'" + id_ + "' has no parent");
}

// ------------------------------------------------------------ tower helpers

FieldElement lift(const FieldElement& a, const Field& target) {
  if (&a.field() == &target) return a;
  std::vector<const Field*> path;
  for (const Field* f = &target; f != &a.field(); f = f->parent().get()) {
    if (!f) throw InvalidInput("cannot lift from '" + a.field().id() + "' to '" + target.id() + "'");
    path.push_back(f);
  }
  FieldElement x = a;
  for (auto it = path.rbegin(); it != path.rend(); ++it) x = (*it)->lift_from_parent(x);
  return x;
}

std::vector<FieldElement> flatten(const FieldElement& a, const Field& ancestor) {
  if (&a.field() == &ancestor) return {a};
  if (!a.field().has_ancestor(ancestor))
    throw InvalidInput("'" + ancestor.id() + "' is not below '" + a.field().id() + "'");
  std::vector<FieldElement> out;
  for (const auto& c : a.field().step_coords(a)) {
    auto sub = flatten(c, ancestor);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

FieldElement unflatten(const std::vector<FieldElement>& c, const Field& node, const Field& ancestor) {
  if (&node == &ancestor) {
    if (c.size() != 1) throw InvalidInput("unflatten: wrong coordinate count");
    return c[0];
  }
  const Field& parent = *node.parent();
  const auto m = static_cast<std::size_t>(parent.degree_over(ancestor));
  const auto n = static_cast<std::size_t>(node.step_degree());
  if (c.size() != n * m) throw InvalidInput("unflatten: wrong coordinate count");
  std::vector<FieldElement> step;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<FieldElement> slice(c.begin() + static_cast<long>(i * m), c.begin() + static_cast<long>((i + 1) * m));
    step.push_back(unflatten(slice, parent, ancestor));
  }
  return node.from_step_coords(step);
}

std::vector<FieldElement> flat_basis(const Field& node, const Field& ancestor) {
  if (&node == &ancestor) return {node.one()};
  auto below = flat_basis(*node.parent(), ancestor);
  std::vector<FieldElement> out;
  for (int i = 0; i < node.step_degree(); ++i) {
    FieldElement b = node.step_basis(i);
    for (const auto& e : below) out.push_back(b * lift(e, node));
  }
  return out;
}

}  // namespace valdisc

#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "valdisc/fq.hpp"
#include "valdisc/hahn_series.hpp"
#include "valdisc/laurent_poly.hpp"
#include "valdisc/rat.hpp"
#include "valdisc/val.hpp"

namespace valdisc {

class Field;
class FieldElement;
using FieldPtr = std::shared_ptr<const Field>;

struct Fraction {
  LaurentPoly num;
  LaurentPoly den;
};

struct Coords {
  std::vector<FieldElement> c;
};

/// Two cutoffs shared by every node of a tower.
///  resolution: series that accumulate at 0 from below (the defect series,
///              Artin-Schreier roots of negative-valuation radicands) are
///              represented for exponents < -resolution.
///  horizon:    expansions towards +infinity (inverses, Hensel iterates) are
///              carried this far above their leading exponent.
struct PrecisionConfig {
  Rat resolution{1, 256};
  Rat horizon{8};
};

/// The subgroup g*Z of Q, or g*Z[1/p] when p_divisible.
class ValueGroup {
 public:
  static ValueGroup cyclic(const Rat& g);
  static ValueGroup p_divisible(const Rat& g, int p);

  const Rat& generator() const { return g_; }
  bool is_p_divisible() const { return p_ != 0; }
  bool contains(const Rat& r) const;
  ValueGroup joined(const Rat& r) const;
  /// (1/e) * this.
  ValueGroup divided(long e) const;
  /// [*this : sub] for sub contained in *this (same type).
  long index_over(const ValueGroup& sub) const;
  std::string str() const;

 private:
  ValueGroup(Rat g, int p) : g_(std::move(g)), p_(p) {}
  Rat g_;
  int p_ = 0;
};

class FieldElement {
 public:
  using Repr = std::variant<HahnSeries, Fraction, Coords>;

  FieldElement(FieldPtr owner, Repr repr);

  const FieldPtr& owner() const { return owner_; }
  const Field& field() const { return *owner_; }
  const Repr& repr() const { return repr_; }
  const HahnSeries& series() const;
  const Fraction& fraction() const;
  const std::vector<FieldElement>& coords() const;

  Val valuation() const;
  ZeroState zero_state() const;
  bool is_zero() const { return zero_state() == ZeroState::Zero; }
  std::optional<HahnSeries> image() const;
  FieldElement inverse() const;
  FieldElement pow(long n) const;
  std::string str() const;

  // Operands from different nodes of one tower are lifted to the lower node.
  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);

 private:
  FieldPtr owner_;
  Repr repr_;
};

/// True when a - b is certainly zero.
bool equal(const FieldElement& a, const FieldElement& b);

enum class NodeKind { Laurent, Monomial, DefectBase, Extension };

/// A node of a field tower. Nodes are immutable once built and shared by
/// pointer; an element's owner pointer identifies its field.
class Field : public std::enable_shared_from_this<Field> {
 public:
  virtual ~Field() = default;
  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  const std::string& id() const { return id_; }
  const FqField* fq() const { return fq_; }
  int p() const { return fq_->p(); }
  const FieldPtr& parent() const { return parent_; }
  const PrecisionConfig& precision() const { return cfg_; }
  const std::vector<std::string>& notes() const { return notes_; }

  virtual NodeKind kind() const = 0;
  virtual std::string describe() const = 0;
  /// [this : parent]; 1 for base fields.
  virtual int step_degree() const { return 1; }

  FieldPtr self() const { return shared_from_this(); }
  const Field& ground() const;
  /// True when `a` is this node or one of its ancestors.
  bool has_ancestor(const Field& a) const;
  long degree_over(const Field& ancestor) const;

  virtual FieldElement zero() const = 0;
  virtual FieldElement constant(const FqElem& c) const = 0;
  FieldElement one() const { return constant(FqElem::one(fq_)); }
  FieldElement from_int(long n) const { return constant(FqElem::from_int(fq_, n)); }

  virtual FieldElement add(const FieldElement& a, const FieldElement& b) const = 0;
  virtual FieldElement neg(const FieldElement& a) const = 0;
  virtual FieldElement mul(const FieldElement& a, const FieldElement& b) const = 0;
  virtual FieldElement inv(const FieldElement& a) const = 0;
  virtual Val valuation(const FieldElement& a) const = 0;
  virtual ZeroState zero_state(const FieldElement& a) const = 0;
  virtual std::string str(const FieldElement& a) const = 0;

  /// Image in the ambient Hahn field k((x^Q)), when this node has one.
  virtual bool has_image() const { return false; }
  virtual std::optional<HahnSeries> image(const FieldElement& a) const;

  /// Standard basis of this node over its parent; element 0 is 1.
  virtual FieldElement step_basis(int i) const;
  /// Coordinates over the parent with respect to step_basis.
  virtual std::vector<FieldElement> step_coords(const FieldElement& a) const;
  virtual FieldElement from_step_coords(const std::vector<FieldElement>& c) const;
  virtual FieldElement lift_from_parent(const FieldElement& a) const;

  /// A group certified to contain v(this^*).
  virtual ValueGroup value_group_bound() const = 0;
  /// Resolves `name^exponent` for names known to this node or its ancestors.
  virtual std::optional<FieldElement> symbol(const std::string& name, const Rat& exponent) const = 0;
  /// Random element for property tests and sampling; deterministic in rng.
  virtual FieldElement random_element(std::mt19937_64& rng, int spread) const = 0;

 protected:
  Field(std::string id, const FqField* fq, FieldPtr parent, PrecisionConfig cfg);
  void check_owner(const FieldElement& a) const;
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

 private:
  std::string id_;
  const FqField* fq_;
  FieldPtr parent_;
  PrecisionConfig cfg_;
  std::vector<std::string> notes_;
};

/// F_q((t)) and its totally ramified radical steps F(t^{1/D}): elements are
/// Hahn series supported on the lattice (1/D)Z.
class SeriesField final : public Field {
 public:
  static FieldPtr laurent(std::string id, const FqField* fq, std::string var, PrecisionConfig cfg = {});
  /// Adjoins a root of z^p = c t^a (a/p outside the parent lattice).
  static FieldPtr radical(std::string id, const FieldPtr& parent, const FqElem& c, const Rat& a,
                          std::string generator);

  NodeKind kind() const override { return NodeKind::Laurent; }
  std::string describe() const override;
  int step_degree() const override { return parent() ? p() : 1; }

  /// Lattice spacing: elements live on step() * Z.
  const Rat& step() const { return step_; }
  bool in_lattice(const Rat& e) const;
  const std::string& variable() const { return var_; }
  const std::string& generator_name() const { return gen_; }
  FieldElement from_series(HahnSeries s) const;
  /// The adjoined root c^{1/p} t^{a/p}.
  FieldElement generator() const;

  FieldElement zero() const override;
  FieldElement constant(const FqElem& c) const override;
  FieldElement add(const FieldElement& a, const FieldElement& b) const override;
  FieldElement neg(const FieldElement& a) const override;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const override;
  FieldElement inv(const FieldElement& a) const override;
  Val valuation(const FieldElement& a) const override;
  ZeroState zero_state(const FieldElement& a) const override;
  std::string str(const FieldElement& a) const override;
  bool has_image() const override { return true; }
  std::optional<HahnSeries> image(const FieldElement& a) const override;
  FieldElement step_basis(int i) const override;
  std::vector<FieldElement> step_coords(const FieldElement& a) const override;
  FieldElement from_step_coords(const std::vector<FieldElement>& c) const override;
  FieldElement lift_from_parent(const FieldElement& a) const override;
  ValueGroup value_group_bound() const override { return ValueGroup::cyclic(step_); }
  std::optional<FieldElement> symbol(const std::string& name, const Rat& exponent) const override;
  FieldElement random_element(std::mt19937_64& rng, int spread) const override;

  SeriesField(std::string id, const FqField* fq, FieldPtr parent, PrecisionConfig cfg);

 private:
  std::string var_;
  std::string gen_;
  Rat step_{1};
  FqElem gen_coeff_;
  Rat gen_exp_{0};
};

/// Monomial-weighted function field F_q(x_1..x_k) with v(x^e) = sum w_i e_i,
/// and its refinements by p-th roots of monomials. Exponents live on the
/// lattice L_0 + Z g_1 + ... + Z g_m with L_0 = prod (1/d_i) Z.
class MonomialField final : public Field {
 public:
  static FieldPtr base(std::string id, const FqField* fq, std::vector<std::string> names, std::vector<Rat> weights,
                       std::vector<long> denominators = {}, PrecisionConfig cfg = {});
  /// Adjoins the root of z^p = c x^a (a/p outside the parent lattice).
  static FieldPtr refine(std::string id, const FieldPtr& parent, const FqElem& c, const ExpVec& a,
                         std::string generator);

  NodeKind kind() const override { return NodeKind::Monomial; }
  std::string describe() const override;
  int step_degree() const override { return gens_.empty() ? 1 : p(); }

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Rat>& weights() const { return weights_; }
  const std::vector<long>& denominators() const { return dens_; }
  const std::vector<ExpVec>& lattice_generators() const { return gens_; }
  bool in_lattice(const ExpVec& e) const;
  /// e as L_0 + sum c_i g_i with 0 <= c_i < p; nullopt outside the lattice.
  std::optional<std::vector<int>> coset(const ExpVec& e) const;
  FieldElement from_fraction(LaurentPoly num, LaurentPoly den) const;
  FieldElement from_poly(LaurentPoly num) const;
  /// Rewrites a as N/D with D in the ground field (D = den^{p^k}).
  Fraction ground_denominator(const FieldElement& a) const;
  FieldElement generator() const;
  const std::string& generator_name() const { return gen_; }

  FieldElement zero() const override;
  FieldElement constant(const FqElem& c) const override;
  FieldElement add(const FieldElement& a, const FieldElement& b) const override;
  FieldElement neg(const FieldElement& a) const override;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const override;
  FieldElement inv(const FieldElement& a) const override;
  Val valuation(const FieldElement& a) const override;
  ZeroState zero_state(const FieldElement& a) const override;
  std::string str(const FieldElement& a) const override;
  FieldElement step_basis(int i) const override;
  std::vector<FieldElement> step_coords(const FieldElement& a) const override;
  FieldElement from_step_coords(const std::vector<FieldElement>& c) const override;
  FieldElement lift_from_parent(const FieldElement& a) const override;
  ValueGroup value_group_bound() const override;
  std::optional<FieldElement> symbol(const std::string& name, const Rat& exponent) const override;
  FieldElement random_element(std::mt19937_64& rng, int spread) const override;

  MonomialField(std::string id, const FqField* fq, FieldPtr parent, PrecisionConfig cfg);

 private:
  bool in_level(const ExpVec& e, std::size_t level) const;
  std::optional<std::vector<int>> coset_at(const ExpVec& e, std::size_t level) const;

  std::vector<std::string> names_;
  std::vector<Rat> weights_;
  std::vector<long> dens_;
  std::vector<ExpVec> gens_;
  std::string gen_;
  FqElem gen_coeff_;
};

/// F = k(x, y) inside k((x^Q)), y the truncated defect series. Elements are
/// fractions of polynomials in x^{+-1} and y; valuations come from the image.
class DefectBaseField final : public Field {
 public:
  static FieldPtr make(std::string id, const FqField* fq, std::vector<long> gaps, PrecisionConfig cfg);

  NodeKind kind() const override { return NodeKind::DefectBase; }
  std::string describe() const override;

  const DefectSeries& defect_series() const { return y_; }
  const std::vector<long>& gaps() const { return gaps_; }
  FieldElement x_power(long m) const;
  FieldElement y() const;
  FieldElement from_fraction(LaurentPoly num, LaurentPoly den) const;
  HahnSeries poly_image(const LaurentPoly& f) const;

  FieldElement zero() const override;
  FieldElement constant(const FqElem& c) const override;
  FieldElement add(const FieldElement& a, const FieldElement& b) const override;
  FieldElement neg(const FieldElement& a) const override;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const override;
  FieldElement inv(const FieldElement& a) const override;
  Val valuation(const FieldElement& a) const override;
  ZeroState zero_state(const FieldElement& a) const override;
  std::string str(const FieldElement& a) const override;
  bool has_image() const override { return true; }
  std::optional<HahnSeries> image(const FieldElement& a) const override;
  ValueGroup value_group_bound() const override { return ValueGroup::p_divisible(Rat(1), p()); }
  std::optional<FieldElement> symbol(const std::string& name, const Rat& exponent) const override;
  FieldElement random_element(std::mt19937_64& rng, int spread) const override;

  DefectBaseField(std::string id, const FqField* fq, PrecisionConfig cfg, std::vector<long> gaps);

 private:
  std::vector<long> gaps_;
  DefectSeries y_;
  std::vector<HahnSeries> y_powers_;  // cached y^0 .. y^k
};

enum class ExtKind { Radical, ArtinSchreier, General };
std::string ext_kind_name(ExtKind k);
ExtKind parse_ext_kind(const std::string& s);

/// parent[z]/(P) in coordinates over the power basis 1, z, ..., z^{n-1}.
/// The valuation is v(N(a)) / n with N the determinant of multiplication by a.
class ExtensionField final : public Field {
 public:
  ExtensionField(std::string id, FieldPtr parent, std::vector<FieldElement> poly, ExtKind kind,
                 std::string generator);

  NodeKind kind() const override { return NodeKind::Extension; }
  std::string describe() const override;
  int step_degree() const override { return n_; }

  ExtKind ext_kind() const { return ext_kind_; }
  /// Monic defining polynomial, coefficients low-to-high over the parent.
  const std::vector<FieldElement>& poly() const { return poly_; }
  const std::string& generator_name() const { return gen_; }
  FieldElement generator() const;
  FieldElement norm(const FieldElement& a) const;
  /// Characteristic polynomial of multiplication by a, highest degree first.
  std::vector<FieldElement> charpoly(const FieldElement& a) const;
  /// The embedded root used for images; nullopt when the node has no embedding.
  const std::optional<HahnSeries>& root() const { return root_; }
  void set_root(HahnSeries r) { root_ = std::move(r); }
  void note(std::string s) { add_note(std::move(s)); }

  FieldElement zero() const override;
  FieldElement constant(const FqElem& c) const override;
  FieldElement add(const FieldElement& a, const FieldElement& b) const override;
  FieldElement neg(const FieldElement& a) const override;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const override;
  FieldElement inv(const FieldElement& a) const override;
  Val valuation(const FieldElement& a) const override;
  ZeroState zero_state(const FieldElement& a) const override;
  std::string str(const FieldElement& a) const override;
  bool has_image() const override { return root_.has_value(); }
  std::optional<HahnSeries> image(const FieldElement& a) const override;
  FieldElement step_basis(int i) const override;
  std::vector<FieldElement> step_coords(const FieldElement& a) const override;
  FieldElement from_step_coords(const std::vector<FieldElement>& c) const override;
  FieldElement lift_from_parent(const FieldElement& a) const override;
  ValueGroup value_group_bound() const override;
  std::optional<FieldElement> symbol(const std::string& name, const Rat& exponent) const override;
  FieldElement random_element(std::mt19937_64& rng, int spread) const override;

 private:
  FieldElement make(std::vector<FieldElement> c) const;

  std::vector<FieldElement> poly_;
  int n_;
  ExtKind ext_kind_;
  std::string gen_;
  std::optional<HahnSeries> root_;
};

/// Registers parent[z]/(P). P is monic of degree >= 2, low-to-high over the
/// parent. Radical (z^p - u) and Artin-Schreier (z^p - z - u) shapes are
/// checked for a root in the parent; "general" is capped at `degree_cap`.
/// Radical steps with a monomial radicand over series or monomial parents
/// produce lattice refinements rather than coordinate extensions.
FieldPtr make_extension(std::string id, const FieldPtr& parent, const std::vector<FieldElement>& poly, ExtKind kind,
                        std::string generator, int degree_cap = 16);

/// Root of z^p - z = u as a Hahn series: sum_{k>=1} u_-^{p^-k} for the part
/// of negative valuation, the F_q-root of the constant term, and
/// -sum_{k>=0} u_+^{p^k} for the positive part. Throws InvalidInput when the
/// constant term has no root in F_q (unramified step, no embedding).
HahnSeries artin_schreier_root(const HahnSeries& u, const PrecisionConfig& cfg);
/// Series root of the node's defining polynomial (radical or Artin-Schreier).
/// Lattice steps return their generator.
HahnSeries embed_root(const Field& node);
/// P(r) evaluated in the ambient field with the node's root.
HahnSeries embed_residual(const Field& node);

/// Embeds an element of an ancestor into `target`.
FieldElement lift(const FieldElement& a, const Field& target);
/// Coordinates of a over `ancestor` w.r.t. the flat product basis.
std::vector<FieldElement> flatten(const FieldElement& a, const Field& ancestor);
FieldElement unflatten(const std::vector<FieldElement>& c, const Field& node, const Field& ancestor);
/// Flat basis: index i*m + j holds step_basis(i) * (basis of the parent over ancestor)[j].
std::vector<FieldElement> flat_basis(const Field& node, const Field& ancestor);

/// Parses "1 + t^(1/2)", "z - y", "x^-1*(1+y)^2" etc. in the context of `node`.
FieldElement parse_element(const std::string& text, const FieldPtr& node);

// Ring hooks so Poly/Matrix work over field elements.
inline FieldElement zero_like(const FieldElement& a) { return a.field().zero(); }
inline FieldElement one_like(const FieldElement& a) { return a.field().one(); }
inline ZeroState zero_state(const FieldElement& a) { return a.zero_state(); }
inline FieldElement inverse(const FieldElement& a) { return a.inverse(); }

}  // namespace valdisc

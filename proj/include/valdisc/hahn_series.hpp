#pragma once

#include <optional>
#include <string>
#include <vector>

#include "valdisc/fq.hpp"
#include "valdisc/rat.hpp"
#include "valdisc/val.hpp"

namespace valdisc {

struct HahnTerm {
  Rat exp;
  FqElem coeff;
  friend bool operator==(const HahnTerm&, const HahnTerm&) = default;
};

/// Truncated Hahn series over F_q with rational exponents.
///
/// Precision semantics: every term with exponent < precision is represented
/// exactly; nothing is known at exponents >= precision. An empty precision
/// means the series is exact (finitely many terms, nothing hidden).
/// Invariant: exponents strictly increasing, coefficients nonzero, all below
/// the precision.
class HahnSeries {
 public:
  explicit HahnSeries(const FqField* f) : f_(f) {}
  HahnSeries(const FqField* f, std::vector<HahnTerm> terms, std::optional<Rat> precision = std::nullopt);

  static HahnSeries monomial(const FqField* f, const Rat& exp, const FqElem& coeff);
  static HahnSeries monomial(const FqField* f, const Rat& exp) { return monomial(f, exp, FqElem::one(f)); }
  static HahnSeries constant(const FqElem& c) { return monomial(c.field(), Rat(0), c); }
  /// The empty series known only to be O(x^cutoff).
  static HahnSeries unknown_above(const FqField* f, const Rat& cutoff) { return HahnSeries(f, {}, cutoff); }

  const FqField* field() const { return f_; }
  const std::vector<HahnTerm>& terms() const { return terms_; }
  const std::optional<Rat>& precision() const { return prec_; }
  bool is_exact() const { return !prec_.has_value(); }
  /// True only for the literal zero of an exact series.
  bool is_exact_zero() const { return terms_.empty() && !prec_; }
  bool is_monomial() const { return terms_.size() == 1 && !prec_; }

  Val valuation() const;
  /// Coefficient at `exp`; nullopt when exp lies at or beyond the precision.
  std::optional<FqElem> coefficient(const Rat& exp) const;
  HahnSeries truncated(const Rat& cutoff) const;
  HahnSeries scaled(const FqElem& c) const;
  HahnSeries shifted(const Rat& by) const;

  std::string str(const std::string& var = "x") const;

  friend HahnSeries operator+(const HahnSeries& a, const HahnSeries& b);
  friend HahnSeries operator-(const HahnSeries& a);
  friend HahnSeries operator-(const HahnSeries& a, const HahnSeries& b) { return a + (-b); }
  friend HahnSeries operator*(const HahnSeries& a, const HahnSeries& b);
  friend bool operator==(const HahnSeries& a, const HahnSeries& b) {
    return a.f_ == b.f_ && a.terms_ == b.terms_ && a.prec_ == b.prec_;
  }

 private:
  void normalize();

  const FqField* f_;
  std::vector<HahnTerm> terms_;
  std::optional<Rat> prec_;
};

/// 1/a to precision `cutoff` (capped by what a's own precision allows).
/// Monomials invert exactly. Throws PrecisionExhausted when v(a) is not exact.
HahnSeries invert(const HahnSeries& a, const Rat& cutoff);
/// Exponents divided by p, coefficients replaced by p-th roots, precision / p.
HahnSeries pth_root(const HahnSeries& a);
/// a^p computed termwise (exponents times p, precision times p).
HahnSeries frobenius(const HahnSeries& a);
/// a^n using base-p digits of n so that p-power factors go through frobenius.
HahnSeries pow(const HahnSeries& a, unsigned long n);

/// Defect series sum_i x^{-p^{-e_i}} truncated to precision -pi (all terms with
/// exponent < -pi present). Gaps must satisfy e_1 >= 1 and e_{i+1} >= e_i + i;
/// when the supplied gaps do not pin down every term below -pi, the sequence is
/// continued by the minimal rule e_{i+1} = e_i + i (reported via `used_gaps`).
struct DefectSeries {
  HahnSeries series;
  std::vector<long> used_gaps;
  bool extended = false;
};
DefectSeries build_defect_series(int p, const std::vector<long>& gaps, const Rat& pi);

// Ring hooks for Poly/Matrix.
inline HahnSeries zero_like(const HahnSeries& a) { return HahnSeries(a.field()); }
inline HahnSeries one_like(const HahnSeries& a) { return HahnSeries::constant(FqElem::one(a.field())); }
ZeroState zero_state(const HahnSeries& a);
/// Inverse with a default window eight units beyond the leading term.
HahnSeries inverse(const HahnSeries& a);

}  // namespace valdisc

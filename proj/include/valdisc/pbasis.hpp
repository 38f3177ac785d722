#pragma once

#include <optional>
#include <string>
#include <vector>

#include "valdisc/discrepancy.hpp"

namespace valdisc {

/// Base monomial field F with every lattice denominator multiplied by p:
/// the monomial part of F^{1/p}, where p-basis candidates are parsed.
FieldPtr pbasis_ambient(const FieldPtr& F);

/// S = {s_1..s_n} with s^p in F and T = {prod s_j^{e_j}}, with T[k] at
/// k = sum e_j p^j. Elements live in `node`, F(S) built by monomial
/// refinements in S order.
struct PBasis {
  FieldPtr base;
  FieldPtr node;
  std::vector<FieldElement> S;
  std::vector<std::vector<int>> exps;  // e for each T element
  Basis T;
  std::vector<NdistCertificate> nd;  // per T element over base
};

/// S given in any monomial field over the same variables (usually the
/// ambient one). Each s must have its exponent classes modulo the lattice of
/// F on a single line; throws InvalidInput for s^p outside F, s in F, or a
/// dependent S.
PBasis associated_basis(const FieldPtr& F, const std::vector<FieldElement>& S);

struct ScalingCheck {
  FieldElement fx;
  FieldElement fy;
  Rat value;  // ndist_value(fx, fy)
  NdistCertificate recomputed;
  bool ok = false;
};
/// ndist(f x, F) = ndist(x, F): the approximant f y attains the same value and
/// a fresh certificate for f x reports the same bounds.
ScalingCheck ndist_scaling_check(const FieldElement& x, const FieldElement& f, const NdistCertificate& nd);

struct MultCheck {
  FieldElement product;
  FieldElement approximant;  // y z
  std::optional<Rat> value;  // nullopt when w x = y z
  std::optional<Rat> bound;  // min of the two lower bounds, nullopt when both are infinite
  bool ok = false;
};
/// v(wx - yz) - v(wx) >= min(lower_w, lower_x) for the certified approximants.
MultCheck mult_ndist_check(const NdistCertificate& w, const NdistCertificate& x);

struct Filtration {
  std::vector<ExtRat> values;  // ndist per T element; infinite for elements of F
  bool bound_only = false;     // some certificate was not exact; values are lower bounds
  std::vector<Rat> breakpoints;  // distinct finite values, ascending
  std::vector<std::size_t> card;  // #U_r at each breakpoint
  bool p_power_cards = true;
  /// ndist_i for i = 1..n. With the element 1 counted as infinitely close
  /// (U_r never empty) and with 1 in U_0 only.
  std::vector<Rat> ndist;
  std::vector<Rat> ndist_excluding_one;
};

Filtration filtration(const PBasis& P);

struct SubgroupCheck {
  int pairs = 0;
  int failures = 0;
};
/// For each breakpoint r and t_1, t_2 in U_r, the element t_3 with
/// t_1 t_2 in F* t_3 gets a certified ndist >= r from the product
/// approximant transported by scaling.
SubgroupCheck subgroup_check(const PBasis& P, const Filtration& flt);

struct PBasisBound {
  std::vector<std::size_t> x_index;  // x_1..x_n as indices into T
  std::vector<FieldElement> y;       // approximants in F
  FieldElement witness;              // prod (x_i - y_i)^{p-1}
  Rat closed_form;
  Rat direct;
  Rat filtration_sum;  // (p-1) sum ndist_i
  DiscrepancyReport report;
};

/// Greedy x_n, x_{n-1}, ...: largest certified ndist whose exponent vector is
/// independent of those already chosen, ties by basis order. Throws
/// ConsistencyError when the closed form and disc_at disagree.
PBasisBound pbasis_lower_bound(const PBasis& P, const Filtration& flt);

enum class Verdict { Equal, Consistent, Violated };
std::string verdict_name(Verdict v);

struct ComparisonRow {
  NdistCertificate over_prev;  // against E_{i-1}
  NdistCertificate over_base;  // against F
  Verdict verdict = Verdict::Consistent;
  DiscrepancyReport step;      // degree-p report of E_i over E_{i-1}
};

struct Comparison {
  std::vector<FieldPtr> chain;  // E_0 = F, ..., E_n
  std::vector<ComparisonRow> rows;
  DiscrepancyReport tower;
  bool all_equal = false;
};

/// Registers E_i = F(x_1..x_i), compares ndist(x_i, E_{i-1}) with
/// ndist(x_i, F) and composes the step discrepancies.
Comparison ndist_comparison_check(const PBasis& P, const PBasisBound& B);

}  // namespace valdisc

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "valdisc/field.hpp"
#include "valdisc/tower_ops.hpp"

namespace valdisc {

/// A basis of node over base (an ancestor), with the inverse of its flat
/// coordinate matrix cached for decomposition.
struct Basis {
  FieldPtr node;
  FieldPtr base;
  std::vector<FieldElement> elems;
  std::vector<std::vector<FieldElement>> inverse;  // rows: coordinate i as a combination of flat coordinates
  std::vector<Rat> elem_vals;
};

/// Throws InvalidInput when the elements are dependent, PrecisionExhausted
/// when no pivot can be certified nonzero.
Basis make_basis(const FieldPtr& base, std::vector<FieldElement> elems);
/// {1, x, ..., x^{n-1}} with n = [field(x) : base].
Basis power_basis(const FieldElement& x, const FieldPtr& base);
/// {s_i * t_j} at index i * |T| + j, for S a basis of V over E and T of E over F.
Basis product_basis(const Basis& S, const Basis& T);

std::vector<FieldElement> decompose(const FieldElement& a, const Basis& T);
FieldElement recombine(const std::vector<FieldElement>& c, const Basis& T);

/// v(a) - min_i v(c_i e_i), exact. Throws PrecisionExhausted on inexact data.
Rat disc_at(const Basis& T, const FieldElement& a);

struct DiscrepancyReport {
  Basis basis;
  Rat lower{0};
  std::optional<FieldElement> witness;
  std::optional<Rat> witness_value;
  std::optional<Rat> upper;
  std::string upper_reason;
  std::optional<Rat> exact;
  std::string rule;  // valuation-basis | degree-p-formula | additivity
  int skipped = 0;
  std::vector<std::string> notes;
};

/// Max of disc_at over the witnesses; precision-exhausted witnesses are skipped and counted.
DiscrepancyReport disc_lower_bound(const Basis& T, const std::vector<FieldElement>& witnesses);

/// w(P) = min_i v(a_i) + i * vx over the nonzero coefficients (low to high).
Rat gauss_valuation(const std::vector<FieldElement>& P, const Rat& vx);

struct NdistBudget {
  int iterations = 32;
  int pool_degree = 4;  // powers y^k, k <= pool_degree, plus y^{p^j} for p^j <= p^pool_degree
};

struct NdistStep {
  FieldElement y;
  Rat value;
};

struct NdistCertificate {
  FieldElement x;
  FieldPtr S;
  bool infinite = false;  // x lies in S
  Rat lower{0};
  FieldElement y;  // approximant in S attaining lower
  std::optional<Rat> upper;
  std::string reason;  // support-criterion | value-group-obstruction
  std::vector<NdistStep> chain;
  bool exact() const { return infinite || (upper && *upper == lower); }
};

NdistCertificate ndist_bounds(const FieldElement& x, const FieldPtr& S, const NdistBudget& budget = {});
/// v(x - y) - v(x) recomputed from scratch.
Rat ndist_value(const FieldElement& x, const FieldElement& y);

/// (p-1) v(y - x) - (p-1) min(v(x), v(y)).
Rat degree_p_witness_value(const FieldElement& x, const FieldElement& y);
/// d(T) for T = {1, x, ..., x^{p-1}} from an ndist certificate of x over S.
DiscrepancyReport degree_p_disc(const FieldElement& x, const NdistCertificate& nd);

struct DefectlessBasis {
  Basis basis;
  DefectReport defect;
  int samples_checked = 0;
};

/// Product basis {x_i y_j} from residue lifts and value-coset representatives,
/// certified by e >= #reps (distinct cosets), f >= #lifts (independent
/// residues), n = #lifts * #reps, and a disc_at = 0 sample check.
DefectlessBasis valuation_basis_defectless(const FieldPtr& node, const FieldPtr& base,
                                           const std::vector<FieldElement>& lifts,
                                           const std::vector<FieldElement>& reps, const SampleConfig& cfg);

/// Counts sampled elements with nonzero discrepancy (a valuation-basis check).
struct SampleCheck {
  int samples = 0;
  int failures = 0;
  int skipped = 0;
};
SampleCheck check_valuation_basis(const Basis& T, const SampleConfig& cfg);

struct Reduction {
  std::vector<FieldElement> w_coords;
  std::vector<Val> term_vals;  // v(c_i e_i) for the reduced basis part
  std::size_t dropped = 0;
  std::vector<FieldElement> kept;
  FieldElement w;
  std::vector<FieldElement> V;
};

/// T together with V spans X over base; T is a valuation basis of X over
/// span(V). Drops the first e_j minimizing v(c_j e_j) in w = v + sum c_i e_i.
Reduction reduce_valuation_basis(const Basis& full, std::size_t v_dim, const FieldElement& w);
/// v(u + sum d_i k_i) = min(v(u), v(d_i k_i)) for random u in V + base*w.
SampleCheck check_reduction(const Reduction& r, const FieldPtr& base, const SampleConfig& cfg);

struct Improvement {
  FieldElement x;
  DiscrepancyReport report;
  std::vector<Rat> residual_vals;  // v(x - y*) per round, nondecreasing
  std::vector<Rat> ndist_lowers;
  bool certified = false;
  int rounds = 0;
};

Improvement improve_generator(const FieldElement& x, const FieldPtr& S, const Rat& c, const NdistBudget& budget = {},
                              int max_rounds = 4);

/// Steps ordered from the bottom of the tower; step k's basis is over step k-1's node.
DiscrepancyReport tower_disc(const std::vector<DiscrepancyReport>& steps);

}  // namespace valdisc

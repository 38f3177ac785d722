#include "valdisc/tower_ops.hpp"

#include <numeric>
#include <random>

#include "valdisc/errors.hpp"
#include "valdisc/matrix.hpp"
#include "valdisc/poly.hpp"

namespace valdisc {

namespace {

bool lattice_exact(const Field& f) {
  return f.kind() == NodeKind::Laurent || f.kind() == NodeKind::Monomial || !f.parent();
}

bool only_lattice_steps(const Field& f) {
  for (const Field* g = &f; g; g = g->parent().get())
    if (!lattice_exact(*g)) return false;
  return true;
}

std::vector<FieldElement> samples(const Field& node, const Field& over, const SampleConfig& cfg) {
  std::vector<FieldElement> out = flat_basis(node, over);
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < cfg.samples; ++i) out.push_back(node.random_element(rng, cfg.spread));
  return out;
}

// A group certified to contain v(node*).
ValueGroup value_bound(const Field& node, const SampleConfig& cfg) {
  if (lattice_exact(node)) return node.value_group_bound();
  const Field& g = node.ground();
  long n = node.degree_over(g);
  long f = absolute_residue_lb(node, cfg);
  // e * f divides n and f_lb divides f, so e divides n / f_lb.
  return g.value_group_bound().divided(n / f);
}

long index_from_samples(const Field& node, const Field& over, const ValueGroup& base, const SampleConfig& cfg) {
  ValueGroup G = base;
  for (const auto& a : samples(node, over, cfg)) {
    if (a.zero_state() != ZeroState::NonZero) continue;
    Val v = a.valuation();
    if (v.is_exact()) G = G.joined(v.value());
  }
  return G.index_over(base);
}

}  // namespace

long absolute_ramification_lb(const Field& node, const SampleConfig& cfg) {
  const Field& g = node.ground();
  if (&g == &node) return 1;
  return index_from_samples(node, g, g.value_group_bound(), cfg);
}

long ramification_degree_lb(const Field& node, const SampleConfig& cfg, std::vector<std::string>* notes) {
  if (!node.parent()) return 1;
  const Field& par = *node.parent();
  long e = index_from_samples(node, par, value_bound(par, cfg), cfg);
  if (notes && !lattice_exact(par))
    notes->push_back("value group of '" + par.id() + "' bounded above by " + value_bound(par, cfg).str());
  return e;
}

long absolute_residue_lb(const Field& node, const SampleConfig& cfg, std::vector<std::string>* notes) {
  const Field& g = node.ground();
  if (&g == &node || only_lattice_steps(node)) return 1;
  auto* base = dynamic_cast<const SeriesField*>(&g);
  if (!base) {
    if (notes)
      notes->push_back("residue degree not measured over the non-complete base '" + g.id() + "'; lower bound 1");
    return 1;
  }
  const auto basis = flat_basis(node, g);
  const auto n = basis.size();
  long f = 1;
  for (const auto& s : samples(node, g, cfg)) {
    if (s.zero_state() != ZeroState::NonZero) continue;
    Val v = s.valuation();
    if (!v.is_exact() || !v.value().is_integer()) continue;
    FieldElement a = s * *base->symbol(base->variable(), -v.value());
    Matrix<FieldElement> M(n, n, g.zero());
    for (std::size_t j = 0; j < n; ++j) {
      auto col = flatten(a * basis[j], g);
      for (std::size_t i = 0; i < n; ++i) M(i, j) = col[i];
    }
    auto cp = charpoly_berkowitz(M);
    std::vector<FqElem> red;
    bool ok = true;
    for (std::size_t k = cp.size(); k-- > 0 && ok;) {
      const HahnSeries& c = cp[k].series();
      Val vc = c.valuation();
      if (!vc.is_infinite() && vc.bound().sign() < 0) ok = false;
      auto c0 = c.coefficient(Rat(0));
      if (!c0) ok = false;
      if (ok) red.push_back(*c0);
    }
    if (!ok) continue;
    int d = min_irreducible_factor_degree(Poly<FqElem>(FqElem::zero(g.fq()), red));
    f = std::lcm(f, static_cast<long>(d));
  }
  return f;
}

long residue_degree_lb(const Field& node, const SampleConfig& cfg, std::vector<std::string>* notes) {
  if (!node.parent()) return 1;
  const Field& par = *node.parent();
  long f_node = absolute_residue_lb(node, cfg, notes);
  long f_par_ub = par.degree_over(par.ground()) / absolute_ramification_lb(par, cfg);
  long f = (f_node + f_par_ub - 1) / f_par_ub;
  return f < 1 ? 1 : f;
}

DefectReport ostrowski_report(long n, long e_lb, long f_lb, std::string note) {
  if (n < 1 || e_lb < 1 || f_lb < 1) throw InvalidInput("degree and bounds must be positive");
  if (n % (e_lb * f_lb) != 0)
    throw ConsistencyError("e_lb * f_lb = " + std::to_string(e_lb * f_lb) + " does not divide n = " + std::to_string(n));
  DefectReport r;
  r.degree = n;
  r.e_lb = e_lb;
  r.f_lb = f_lb;
  r.defect_ub = n / (e_lb * f_lb);
  r.defectless = r.defect_ub == 1;
  if (r.defectless)
    r.classification_note = "defectless certified: n = e * f";
  else
    r.classification_note = "defect at most " + std::to_string(r.defect_ub) + " (n = defect * e * f)";
  if (!note.empty()) r.classification_note += "; " + note;
  return r;
}

DefectReport step_defect_report(const Field& node, const SampleConfig& cfg) {
  std::vector<std::string> notes;
  long e = ramification_degree_lb(node, cfg, &notes);
  long f = residue_degree_lb(node, cfg, &notes);
  std::string note;
  for (const auto& s : notes) note += (note.empty() ? "" : "; ") + s;
  return ostrowski_report(node.step_degree(), e, f, note);
}

}  // namespace valdisc

#include "valdisc/pbasis.hpp"

#include <algorithm>

#include "valdisc/errors.hpp"

namespace valdisc {

namespace {

const MonomialField& as_monomial(const FieldPtr& f, const char* what) {
  auto* m = dynamic_cast<const MonomialField*>(f.get());
  if (!m) throw InvalidInput(std::string(what) + " must be a monomial field");
  return *m;
}

long mod_p(long a, int p) { return ((a % p) + p) % p; }

// Class of e in (1/p)L_F / L_F as a vector over F_p; nullopt outside (1/p)L_F.
std::optional<std::vector<int>> exp_class(const MonomialField& F, const ExpVec& e) {
  const int p = F.p();
  std::vector<int> c(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    Rat k = e[i] * Rat(p) * Rat(F.denominators()[i]);
    if (!k.is_integer()) return std::nullopt;
    c[i] = static_cast<int>(mod_p(k.to_long(), p));
  }
  return c;
}

ExpVec class_rep(const MonomialField& F, const std::vector<int>& c) {
  ExpVec e(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) e[i] = Rat(c[i], static_cast<long>(F.p()) * F.denominators()[i]);
  return e;
}

bool is_zero_vec(const std::vector<int>& v) {
  return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

long inv_mod(long a, int p) {
  long r = 1;
  for (int k = 0; k < p - 2; ++k) r = r * a % p;
  return r;
}

int rank_mod_p(std::vector<std::vector<int>> rows, int p) {
  int rank = 0;
  const std::size_t m = rows.empty() ? 0 : rows[0].size();
  for (std::size_t col = 0; col < m && rank < static_cast<int>(rows.size()); ++col) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[static_cast<std::size_t>(rank)]);
    auto& r = rows[static_cast<std::size_t>(rank)];
    long iv = inv_mod(r[col], p);
    for (auto& x : r) x = static_cast<int>(x * iv % p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == static_cast<std::size_t>(rank) || rows[i][col] == 0) continue;
      long f = rows[i][col];
      for (std::size_t j = 0; j < m; ++j) rows[i][j] = static_cast<int>(mod_p(rows[i][j] - f * r[j], p));
    }
    ++rank;
  }
  return rank;
}

// N/D with D in F: multiplies through by den^{p-1} so that D = den^p.
Fraction over_base(const MonomialField& M, const FieldElement& s) {
  Fraction f = M.ground_denominator(s);
  unsigned long p = static_cast<unsigned long>(M.p());
  return Fraction{f.num * f.den.pow(p - 1), f.den.pow(p)};
}

// The line of F_p-classes carrying the support of N, or nullopt when the
// classes span more than a line. A zero vector means N is in F.
std::optional<std::vector<int>> support_line(const MonomialField& F, const LaurentPoly& N) {
  const int p = F.p();
  std::optional<std::vector<int>> g;
  for (const auto& [e, c] : N.terms()) {
    auto k = exp_class(F, e);
    if (!k) throw InvalidInput("exponent outside (1/p) times the lattice of '" + F.id() + "'");
    if (is_zero_vec(*k)) continue;
    if (!g) {
      g = *k;
      continue;
    }
    if (rank_mod_p({*g, *k}, p) > 1) return std::nullopt;
  }
  if (!g) return std::vector<int>(N.nvars(), 0);
  // normalize: first nonzero entry 1
  auto it = std::find_if(g->begin(), g->end(), [](int x) { return x != 0; });
  long iv = inv_mod(*it, p);
  for (auto& x : *g) x = static_cast<int>(x * iv % p);
  return g;
}

std::vector<std::size_t> digits(std::size_t k, int p, std::size_t n) {
  std::vector<std::size_t> d(n);
  for (std::size_t j = 0; j < n; ++j, k /= static_cast<std::size_t>(p)) d[j] = k % static_cast<std::size_t>(p);
  return d;
}

ExtRat lower_of(const NdistCertificate& nd) { return nd.infinite ? ExtRat::infinity() : ExtRat(nd.lower); }

}  // namespace

FieldPtr pbasis_ambient(const FieldPtr& F) {
  const MonomialField& m = as_monomial(F, "p-basis base");
  if (!m.lattice_generators().empty()) throw InvalidInput("p-basis base must be an unrefined monomial field");
  std::vector<long> d = m.denominators();
  for (auto& x : d) x *= m.p();
  return MonomialField::base(F->id() + "^(1/p)", m.fq(), m.names(), m.weights(), d, m.precision());
}

PBasis associated_basis(const FieldPtr& F, const std::vector<FieldElement>& S) {
  const MonomialField& mf = as_monomial(F, "p-basis base");
  if (!mf.lattice_generators().empty()) throw InvalidInput("p-basis base must be an unrefined monomial field");
  if (S.empty()) throw InvalidInput("empty p-basis");
  const int p = F->p();
  std::vector<Fraction> forms;
  std::vector<std::vector<int>> lines;
  FieldPtr node = F;
  for (std::size_t j = 0; j < S.size(); ++j) {
    const MonomialField& M = as_monomial(S[j].owner(), "p-basis element field");
    if (M.names() != mf.names() || M.weights() != mf.weights() || M.fq() != mf.fq())
      throw InvalidInput("p-basis element from an unrelated monomial field");
    Fraction sp = M.ground_denominator(S[j].pow(p));
    for (const auto* poly : {&sp.num, &sp.den})
      for (const auto& [e, c] : poly->terms())
        if (!mf.in_lattice(e)) throw InvalidInput("s^p is not in '" + F->id() + "' for s = " + S[j].str());
    Fraction f = over_base(M, S[j]);
    for (const auto& [e, c] : f.den.terms())
      if (!mf.in_lattice(e)) throw InvalidInput("denominator outside '" + F->id() + "'");
    auto g = support_line(mf, f.num);
    if (!g) throw InvalidInput("the support classes of " + S[j].str() + " do not lie on one line");
    if (is_zero_vec(*g)) throw InvalidInput(S[j].str() + " lies in '" + F->id() + "'");
    auto with = lines;
    with.push_back(*g);
    if (rank_mod_p(with, p) < static_cast<int>(with.size()))
      throw InvalidInput("dependent p-basis: " + S[j].str() + " lies in the field generated by the earlier elements");
    lines = std::move(with);
    ExpVec a = class_rep(mf, *g);
    for (auto& x : a) x *= Rat(p);
    node = MonomialField::refine(F->id() + "_s" + std::to_string(j + 1), node, FqElem::one(mf.fq()), a,
                                 "s" + std::to_string(j + 1));
    forms.push_back(std::move(f));
  }
  const MonomialField& top = as_monomial(node, "p-basis node");
  PBasis P{F, node, {}, {}, {}, {}};
  for (auto& f : forms) P.S.push_back(top.from_fraction(f.num, f.den));

  const std::size_t n = S.size();
  std::size_t size = 1;
  for (std::size_t j = 0; j < n; ++j) size *= static_cast<std::size_t>(p);
  std::vector<FieldElement> T;
  for (std::size_t k = 0; k < size; ++k) {
    auto d = digits(k, p, n);
    FieldElement t = node->one();
    std::vector<int> e(n);
    for (std::size_t j = 0; j < n; ++j) {
      e[j] = static_cast<int>(d[j]);
      if (d[j]) t = t * P.S[j].pow(static_cast<long>(d[j]));
    }
    T.push_back(t);
    P.exps.push_back(e);
  }
  P.T = make_basis(F, T);
  for (const auto& t : P.T.elems) P.nd.push_back(ndist_bounds(t, F));
  return P;
}

ScalingCheck ndist_scaling_check(const FieldElement& x, const FieldElement& f, const NdistCertificate& nd) {
  if (f.zero_state() != ZeroState::NonZero) throw InvalidInput("scaling by zero");
  if (&f.field() != nd.S.get()) throw InvalidInput("scalar must come from '" + nd.S->id() + "'");
  ScalingCheck sc{f * x, f * nd.y, Rat(0), ndist_bounds(f * x, nd.S)};
  const auto& r = sc.recomputed;
  if (nd.infinite) {
    sc.ok = r.infinite;
    return sc;
  }
  sc.value = ndist_value(sc.fx, sc.fy);
  sc.ok = sc.value == nd.lower && !r.infinite && r.lower == nd.lower && r.upper == nd.upper;
  return sc;
}

MultCheck mult_ndist_check(const NdistCertificate& w, const NdistCertificate& x) {
  if (w.S != x.S) throw InvalidInput("certificates over different bases");
  MultCheck mc{w.x * x.x, w.y * x.y};
  ExtRat lw = lower_of(w), lx = lower_of(x);
  ExtRat b = std::min(lw, lx);
  if (b.is_finite()) mc.bound = b.value();
  FieldElement diff = mc.product - mc.approximant;
  if (diff.zero_state() == ZeroState::Zero) {
    mc.ok = true;
    return mc;
  }
  mc.value = ndist_value(mc.product, mc.approximant);
  mc.ok = mc.bound && *mc.value >= *mc.bound;
  return mc;
}

Filtration filtration(const PBasis& P) {
  Filtration f;
  const int p = P.base->p();
  const std::size_t n = P.S.size();
  for (const auto& nd : P.nd) {
    if (!nd.exact()) f.bound_only = true;
    f.values.push_back(lower_of(nd));
  }
  for (const auto& v : f.values)
    if (v.is_finite()) f.breakpoints.push_back(v.value());
  std::sort(f.breakpoints.begin(), f.breakpoints.end());
  f.breakpoints.erase(std::unique(f.breakpoints.begin(), f.breakpoints.end()), f.breakpoints.end());
  for (const auto& r : f.breakpoints) {
    std::size_t c = 0;
    for (const auto& v : f.values)
      if (v >= ExtRat(r)) ++c;
    f.card.push_back(c);
    std::size_t q = 1;
    while (q < c) q *= static_cast<std::size_t>(p);
    if (q != c) f.p_power_cards = false;
  }
  // ndist_i = sup{r : #U_r >= p^{n-i+1}} = the p^{n-i+1}-th largest value.
  auto kth = [&](std::vector<ExtRat> vals, std::size_t k) {
    std::sort(vals.begin(), vals.end(), std::greater<>());
    return vals[k - 1].value();
  };
  std::vector<ExtRat> without = f.values;
  for (auto& v : without)
    if (v.is_infinite()) v = ExtRat(Rat(0));
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t k = 1;
    for (std::size_t j = 0; j < n - i + 1; ++j) k *= static_cast<std::size_t>(p);
    f.ndist.push_back(kth(f.values, k));
    f.ndist_excluding_one.push_back(kth(without, k));
  }
  return f;
}

SubgroupCheck subgroup_check(const PBasis& P, const Filtration& flt) {
  SubgroupCheck sc;
  const int p = P.base->p();
  const std::size_t m = P.T.elems.size();
  for (const auto& r : flt.breakpoints) {
    for (std::size_t i = 0; i < m; ++i) {
      if (flt.values[i] < ExtRat(r)) continue;
      for (std::size_t j = i; j < m; ++j) {
        if (flt.values[j] < ExtRat(r)) continue;
        ++sc.pairs;
        std::size_t k = 0, w = 1;
        for (std::size_t d = 0; d < P.S.size(); ++d, w *= static_cast<std::size_t>(p))
          k += static_cast<std::size_t>((P.exps[i][d] + P.exps[j][d]) % p) * w;
        const FieldElement& t3 = P.T.elems[k];
        FieldElement ratio = P.T.elems[i] * P.T.elems[j] / t3;
        NdistCertificate nr = ndist_bounds(ratio, P.base);
        if (!nr.infinite) {
          ++sc.failures;
          continue;
        }
        if (k == 0) continue;  // t_1 t_2 lies in F
        MultCheck mc = mult_ndist_check(P.nd[i], P.nd[j]);
        if (!mc.ok || !mc.value) {
          ++sc.failures;
          continue;
        }
        // t_3 = t_1 t_2 / f with f in F; carry the approximant y z / f.
        Rat moved = ndist_value(t3, mc.approximant / nr.y);
        if (moved < r || flt.values[k] < ExtRat(r)) ++sc.failures;
      }
    }
  }
  return sc;
}

PBasisBound pbasis_lower_bound(const PBasis& P, const Filtration& flt) {
  const int p = P.base->p();
  const std::size_t n = P.S.size();
  std::vector<std::size_t> picked;
  std::vector<std::vector<int>> vecs;
  for (std::size_t round = 0; round < n; ++round) {
    std::optional<std::size_t> best;
    for (std::size_t k = 1; k < P.T.elems.size(); ++k) {
      if (std::find(picked.begin(), picked.end(), k) != picked.end()) continue;
      auto with = vecs;
      with.push_back(P.exps[k]);
      if (rank_mod_p(with, p) < static_cast<int>(with.size())) continue;
      if (!best || flt.values[k] > flt.values[*best]) best = k;
    }
    if (!best) throw ConsistencyError("p-basis greedy selection ran out of independent elements");
    picked.push_back(*best);
    vecs.push_back(P.exps[*best]);
  }
  std::reverse(picked.begin(), picked.end());  // x_1 .. x_n

  PBasisBound B{picked, {}, P.node->one(), Rat(0), Rat(0), Rat(0), DiscrepancyReport{P.T}};
  const Rat pm1(p - 1);
  for (std::size_t idx : picked) {
    const FieldElement& x = P.T.elems[idx];
    const FieldElement& y = P.nd[idx].y;
    B.y.push_back(y);
    B.witness = B.witness * (x - y).pow(p - 1);
    B.closed_form += pm1 * (x - y).valuation().value() - pm1 * x.valuation().value();
  }
  B.direct = disc_at(P.T, B.witness);
  if (B.direct != B.closed_form)
    throw ConsistencyError("p-basis witness: closed form " + B.closed_form.str() + " but disc_at gives " +
                           B.direct.str());
  for (const auto& r : flt.ndist) B.filtration_sum += pm1 * r;
  B.report.lower = B.direct;
  B.report.witness = B.witness;
  B.report.witness_value = B.direct;
  if (flt.bound_only) B.report.notes.push_back("filtration built from lower bounds only");
  if (B.direct < B.filtration_sum)
    throw ConsistencyError("p-basis witness " + B.direct.str() + " is below (p-1) sum ndist_i = " +
                           B.filtration_sum.str());
  return B;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "equal";
    case Verdict::Consistent: return "consistent";
    case Verdict::Violated: return "violated";
  }
  return "?";
}

Comparison ndist_comparison_check(const PBasis& P, const PBasisBound& B) {
  const MonomialField& mf = as_monomial(P.base, "p-basis base");
  const MonomialField& top = as_monomial(P.node, "p-basis node");
  const int p = P.base->p();
  Comparison C;
  C.chain.push_back(P.base);

  // Refinement chain when every x_i is carried by one class line.
  std::vector<Fraction> forms;
  std::vector<std::vector<int>> lines;
  bool monomial = true;
  for (std::size_t idx : B.x_index) {
    Fraction f = over_base(top, P.T.elems[idx]);
    auto g = support_line(mf, f.num);
    if (!g || is_zero_vec(*g)) {
      monomial = false;
      break;
    }
    lines.push_back(*g);
    forms.push_back(std::move(f));
  }
  if (monomial && rank_mod_p(lines, p) < static_cast<int>(lines.size())) monomial = false;

  std::vector<FieldElement> xs;
  for (std::size_t i = 0; i < B.x_index.size(); ++i) {
    const FieldPtr& prev = C.chain.back();
    const std::string id = P.base->id() + "_x" + std::to_string(i + 1);
    const std::string gen = "x" + std::to_string(i + 1);
    FieldPtr E;
    if (monomial) {
      ExpVec a = class_rep(mf, lines[i]);
      for (auto& v : a) v *= Rat(p);
      E = MonomialField::refine(id, prev, FqElem::one(mf.fq()), a, gen);
      xs.push_back(as_monomial(E, "chain node").from_fraction(forms[i].num, forms[i].den));
    } else {
      NdistCertificate c = ndist_bounds(P.T.elems[B.x_index[i]].pow(p), P.base);
      std::vector<FieldElement> poly(static_cast<std::size_t>(p) + 1, prev->zero());
      poly[0] = -lift(c.y, *prev);
      poly.back() = prev->one();
      E = make_extension(id, prev, poly, ExtKind::Radical, gen);
      xs.push_back(parse_element(gen, E));
    }
    C.chain.push_back(E);
  }

  std::vector<DiscrepancyReport> steps;
  C.all_equal = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ComparisonRow row{ndist_bounds(xs[i], C.chain[i]), ndist_bounds(xs[i], P.base)};
    const auto& a = row.over_prev;
    const auto& b = row.over_base;
    if (a.exact() && b.exact() && a.infinite == b.infinite && a.lower == b.lower)
      row.verdict = Verdict::Equal;
    else if ((b.upper && !a.infinite && a.lower > *b.upper) || (a.upper && !b.infinite && *a.upper < b.lower) ||
             (a.exact() && b.exact() && a.infinite != b.infinite))
      row.verdict = Verdict::Violated;
    else
      row.verdict = Verdict::Consistent;
    if (row.verdict != Verdict::Equal) C.all_equal = false;
    row.step = degree_p_disc(xs[i], a);
    steps.push_back(row.step);
    C.rows.push_back(std::move(row));
  }
  C.tower = tower_disc(steps);
  return C;
}

}  // namespace valdisc

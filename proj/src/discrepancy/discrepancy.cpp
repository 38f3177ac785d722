#include "valdisc/discrepancy.hpp"

#include <random>
#include <set>

#include "valdisc/errors.hpp"
#include "valdisc/poly.hpp"

namespace valdisc {

namespace {

Rat exact_val(const FieldElement& a, const char* what) {
  Val v = a.valuation();
  if (!v.is_exact()) throw PrecisionExhausted(std::string(what) + ": valuation is " + v.str());
  return v.value();
}

long rng_range(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Random base coefficient; zero one time in four.
FieldElement random_coeff(const Field& base, std::mt19937_64& rng, int spread) {
  if (rng_range(rng, 0, 3) == 0) return base.zero();
  return base.random_element(rng, spread);
}

}  // namespace

// -------------------------------------------------------------------- bases

Basis make_basis(const FieldPtr& base, std::vector<FieldElement> elems) {
  if (elems.empty()) throw InvalidInput("empty basis");
  FieldPtr node = elems.front().owner();
  for (auto& e : elems) e = lift(e, *node);
  const auto n = static_cast<std::size_t>(node->degree_over(*base));
  if (elems.size() != n)
    throw InvalidInput("basis of '" + node->id() + "' over '" + base->id() + "' needs " + std::to_string(n) +
                       " elements, got " + std::to_string(elems.size()));
  // Augmented Gauss-Jordan on [B | I], B's columns the flat coordinates.
  std::vector<std::vector<FieldElement>> A(n, std::vector<FieldElement>(2 * n, base->zero()));
  for (std::size_t j = 0; j < n; ++j) {
    auto col = flatten(elems[j], *base);
    for (std::size_t i = 0; i < n; ++i) A[i][j] = col[i];
  }
  for (std::size_t i = 0; i < n; ++i) A[i][n + i] = base->one();
  for (std::size_t col = 0; col < n; ++col) {
    std::optional<std::size_t> piv;
    std::optional<Rat> best;
    bool unknown = false;
    for (std::size_t r = col; r < n; ++r) {
      ZeroState s = A[r][col].zero_state();
      if (s == ZeroState::Unknown) unknown = true;
      if (s != ZeroState::NonZero) continue;
      Val v = A[r][col].valuation();
      if (!v.is_exact()) continue;
      if (!best || v.value() < *best) {
        best = v.value();
        piv = r;
      }
    }
    if (!piv) {
      if (unknown) throw PrecisionExhausted("basis pivot cannot be certified nonzero");
      throw InvalidInput("basis elements are linearly dependent");
    }
    std::swap(A[col], A[*piv]);
    FieldElement inv = A[col][col].inverse();
    for (auto& x : A[col]) x = x * inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || A[r][col].zero_state() == ZeroState::Zero) continue;
      FieldElement f = A[r][col];
      for (std::size_t k = 0; k < 2 * n; ++k)
        if (A[col][k].zero_state() != ZeroState::Zero) A[r][k] = A[r][k] - f * A[col][k];
    }
  }
  Basis b{node, base, std::move(elems), {}, {}};
  for (std::size_t i = 0; i < n; ++i) b.inverse.emplace_back(A[i].begin() + static_cast<long>(n), A[i].end());
  for (const auto& e : b.elems) b.elem_vals.push_back(exact_val(e, "basis element"));
  return b;
}

Basis power_basis(const FieldElement& x, const FieldPtr& base) {
  const long n = x.field().degree_over(*base);
  std::vector<FieldElement> e;
  FieldElement acc = x.field().one();
  for (long i = 0; i < n; ++i) {
    e.push_back(acc);
    if (i + 1 < n) acc = acc * x;
  }
  return make_basis(base, std::move(e));
}

Basis product_basis(const Basis& S, const Basis& T) {
  if (S.base != T.node) throw InvalidInput("product basis: '" + S.base->id() + "' is not '" + T.node->id() + "'");
  std::vector<FieldElement> e;
  for (const auto& s : S.elems)
    for (const auto& t : T.elems) e.push_back(s * t);
  return make_basis(T.base, std::move(e));
}

std::vector<FieldElement> decompose(const FieldElement& a, const Basis& T) {
  auto flat = flatten(lift(a, *T.node), *T.base);
  std::vector<FieldElement> c;
  for (const auto& row : T.inverse) {
    FieldElement acc = T.base->zero();
    for (std::size_t k = 0; k < row.size(); ++k)
      if (row[k].zero_state() != ZeroState::Zero && flat[k].zero_state() != ZeroState::Zero) acc = acc + row[k] * flat[k];
    c.push_back(acc);
  }
  return c;
}

FieldElement recombine(const std::vector<FieldElement>& c, const Basis& T) {
  if (c.size() != T.elems.size()) throw InvalidInput("recombine: wrong coordinate count");
  FieldElement acc = T.node->zero();
  for (std::size_t i = 0; i < c.size(); ++i) acc = acc + lift(c[i], *T.node) * T.elems[i];
  return acc;
}

Rat disc_at(const Basis& T, const FieldElement& a) {
  if (a.zero_state() != ZeroState::NonZero) throw InvalidInput("disc_at of zero");
  Rat va = exact_val(a, "disc_at");
  auto c = decompose(a, T);
  std::optional<Rat> m;
  // A truncated coordinate may be ignored once its bound clears the minimum.
  std::optional<Rat> hidden;
  for (std::size_t i = 0; i < c.size(); ++i) {
    ZeroState s = c[i].zero_state();
    if (s == ZeroState::Zero) continue;
    if (s == ZeroState::Unknown) {
      Rat b = c[i].valuation().bound() + T.elem_vals[i];
      if (!hidden || b < *hidden) hidden = b;
      continue;
    }
    Rat v = exact_val(c[i], "disc_at coordinate") + T.elem_vals[i];
    if (!m || v < *m) m = v;
  }
  if (hidden && (!m || *hidden < *m)) throw PrecisionExhausted("disc_at: coordinate hidden by truncation");
  if (!m) throw ConsistencyError("nonzero element with all coordinates zero");
  Rat d = va - *m;
  if (d.sign() < 0) throw ConsistencyError("negative discrepancy " + d.str() + " (ultrametric violated)");
  return d;
}

DiscrepancyReport disc_lower_bound(const Basis& T, const std::vector<FieldElement>& witnesses) {
  DiscrepancyReport r{T};
  for (const auto& w : witnesses) {
    try {
      Rat d = disc_at(T, w);
      if (!r.witness || d > r.lower) {
        r.lower = d;
        r.witness = w;
        r.witness_value = d;
      }
    } catch (const PrecisionExhausted&) {
      ++r.skipped;
    }
  }
  return r;
}

Rat gauss_valuation(const std::vector<FieldElement>& P, const Rat& vx) {
  std::optional<Rat> m;
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (P[i].zero_state() == ZeroState::Zero) continue;
    Rat v = exact_val(P[i], "gauss_valuation coefficient") + vx * Rat(static_cast<long>(i));
    if (!m || v < *m) m = v;
  }
  if (!m) throw InvalidInput("gauss_valuation of the zero polynomial");
  return *m;
}

// -------------------------------------------------------------------- ndist

Rat ndist_value(const FieldElement& x, const FieldElement& y) {
  return exact_val(x - y, "v(x - y)") - exact_val(x, "v(x)");
}

namespace {

NdistCertificate series_ndist(const FieldElement& x, const FieldPtr& S, const SeriesField& s) {
  NdistCertificate nd{x, S, false, Rat(0), S->zero()};
  nd.chain.push_back({S->zero(), Rat(0)});
  auto img = x.image();
  if (!img) {
    nd.reason = "no series image: lower bound only";
    return nd;
  }
  Rat vx = exact_val(x, "ndist");
  std::vector<HahnTerm> head;
  for (const auto& t : img->terms()) {
    if (!s.in_lattice(t.exp)) {
      FieldElement y = s.from_series(HahnSeries(s.fq(), head));
      nd.y = y;
      nd.lower = ndist_value(x, y);
      nd.upper = t.exp - vx;
      nd.reason = "support-criterion";
      if (nd.lower != *nd.upper)
        throw ConsistencyError("support criterion: v(x - y) - v(x) = " + nd.lower.str() + " but the first exponent "
                               "outside the lattice gives " + nd.upper->str());
      if (!y.is_zero()) nd.chain.push_back({y, nd.lower});
      return nd;
    }
    head.push_back(t);
  }
  FieldElement y = s.from_series(HahnSeries(s.fq(), head));
  if (img->is_exact()) {
    nd.infinite = true;
    nd.y = y;
    nd.reason = "x lies in the base";
    return nd;
  }
  nd.y = y;
  Val r = (x - y).valuation();
  nd.lower = r.bound() - vx;
  nd.reason = "support exhausted below the precision: lower bound only";
  nd.chain.push_back({y, nd.lower});
  return nd;
}

NdistCertificate monomial_ndist(const FieldElement& x, const FieldPtr& S, const MonomialField& E,
                                const MonomialField& s) {
  NdistCertificate nd{x, S, false, Rat(0), S->zero()};
  nd.chain.push_back({S->zero(), Rat(0)});
  Fraction f = E.ground_denominator(x);
  LaurentPoly head(E.fq(), E.names().size()), rest(E.fq(), E.names().size());
  for (const auto& [e, c] : f.num.terms()) {
    if (s.in_lattice(e))
      head.add_term(e, c);
    else
      rest.add_term(e, c);
  }
  FieldElement y = s.from_fraction(head, f.den);
  nd.y = y;
  if (rest.is_zero()) {
    nd.infinite = true;
    nd.reason = "x lies in the base";
    return nd;
  }
  Rat vx = exact_val(x, "ndist");
  nd.lower = ndist_value(x, y);
  // The coset monomials form a valuation basis over S, so no y does better.
  nd.upper = rest.weighted_degree(E.weights()) - f.den.weighted_degree(E.weights()) - vx;
  nd.reason = "value-group-obstruction";
  if (nd.lower != *nd.upper) throw ConsistencyError("value-group obstruction disagrees with the approximant");
  if (!y.is_zero()) nd.chain.push_back({y, nd.lower});
  return nd;
}

NdistCertificate greedy_ndist(const FieldElement& x, const FieldPtr& S, const NdistBudget& budget) {
  NdistCertificate nd{x, S, false, Rat(0), S->zero()};
  nd.chain.push_back({S->zero(), Rat(0)});
  auto* D = dynamic_cast<const DefectBaseField*>(S.get());
  if (!D || !x.field().has_image()) {
    nd.reason = "no approximant pool for '" + S->id() + "': lower bound only";
    return nd;
  }
  const int p = S->p();
  std::set<long> ks;
  for (long k = 0; k <= budget.pool_degree; ++k) ks.insert(k);
  for (long q = p, j = 1; j <= budget.pool_degree; ++j, q *= p) ks.insert(q);
  const FieldElement yb = D->y();
  const Rat vy = exact_val(yb, "pool generator");
  std::vector<std::pair<long, FieldElement>> pool;
  for (long k : ks) pool.emplace_back(k, yb.pow(k));

  FieldElement y = S->zero();
  Rat cur = exact_val(x, "ndist");
  const Rat vx = cur;
  for (int it = 0; it < budget.iterations; ++it) {
    auto img = (x - y).image();
    if (!img || img->terms().empty()) break;
    const HahnTerm lead = img->terms().front();
    bool progressed = false;
    for (const auto& [k, yk] : pool) {
      Rat m = lead.exp - vy * Rat(k);
      if (!m.is_integer()) continue;
      FieldElement g = D->x_power(m.to_long()) * yk;
      auto gi = g.image();
      if (!gi || gi->terms().empty() || gi->terms().front().exp != lead.exp) continue;
      FieldElement cand = y + S->constant(lead.coeff / gi->terms().front().coeff) * g;
      Val v = (x - cand).valuation();
      if (!v.is_exact() || v.value() <= cur) continue;
      y = cand;
      cur = v.value();
      nd.chain.push_back({y, cur - vx});
      progressed = true;
      break;
    }
    if (!progressed) break;
  }
  nd.y = y;
  nd.lower = ndist_value(x, y);
  nd.reason = "greedy cancellation over x^m y^k: lower bound only";
  return nd;
}

}  // namespace

NdistCertificate ndist_bounds(const FieldElement& x, const FieldPtr& S, const NdistBudget& budget) {
  if (!x.field().has_ancestor(*S)) throw InvalidInput("'" + S->id() + "' is not below '" + x.field().id() + "'");
  if (x.zero_state() != ZeroState::NonZero) throw InvalidInput("ndist of zero");
  if (&x.field() == S.get()) {
    NdistCertificate nd{x, S, false, Rat(0), S->zero()};
    nd.y = x;
    nd.infinite = true;
    nd.reason = "x lies in the base";
    return nd;
  }
  if (auto* s = dynamic_cast<const SeriesField*>(S.get())) return series_ndist(x, S, *s);
  auto* sm = dynamic_cast<const MonomialField*>(S.get());
  auto* em = dynamic_cast<const MonomialField*>(&x.field());
  if (sm && em) return monomial_ndist(x, S, *em, *sm);
  return greedy_ndist(x, S, budget);
}

// ---------------------------------------------------------------- degree p

Rat degree_p_witness_value(const FieldElement& x, const FieldElement& y) {
  const Rat pm1(x.field().p() - 1);
  Rat vx = exact_val(x, "v(x)");
  Rat vxy = exact_val(x - y, "v(x - y)");
  Rat m = vx;
  if (y.zero_state() != ZeroState::Zero) m = min(vx, exact_val(y, "v(y)"));
  return pm1 * vxy - pm1 * m;
}

DiscrepancyReport degree_p_disc(const FieldElement& x, const NdistCertificate& nd) {
  const FieldPtr& S = nd.S;
  const int p = S->p();
  if (x.field().degree_over(*S) != p) throw InvalidInput("degree_p_disc needs an extension of degree p");
  if (nd.infinite) throw InvalidInput("x lies in '" + S->id() + "' and does not generate");
  Basis T = power_basis(x, S);
  FieldElement w = (x - nd.y).pow(p - 1);
  Rat direct = disc_at(T, w);
  Rat closed = degree_p_witness_value(x, nd.y);
  if (direct != closed)
    throw ConsistencyError("witness identity failed: disc_at = " + direct.str() + ", closed form = " + closed.str());
  DiscrepancyReport r{T};
  r.lower = direct;
  r.witness = w;
  r.witness_value = direct;
  if (nd.upper) {
    r.upper = Rat(p - 1) * *nd.upper;
    r.upper_reason = "degree-p formula with " + nd.reason;
    if (*r.upper == r.lower) {
      r.exact = r.lower;
      r.rule = "degree-p-formula";
    }
  }
  if (r.lower != Rat(p - 1) * nd.lower) r.notes.push_back("witness value differs from (p-1) * ndist lower bound");
  return r;
}

// ------------------------------------------------------ valuation bases

SampleCheck check_valuation_basis(const Basis& T, const SampleConfig& cfg) {
  SampleCheck sc;
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < cfg.samples; ++i) {
    FieldElement a = T.node->zero();
    if (i % 2 == 0) {
      a = T.node->random_element(rng, cfg.spread);
    } else {
      std::vector<FieldElement> c;
      for (std::size_t k = 0; k < T.elems.size(); ++k) c.push_back(random_coeff(*T.base, rng, cfg.spread));
      a = recombine(c, T);
    }
    if (a.zero_state() != ZeroState::NonZero) {
      ++sc.skipped;
      continue;
    }
    try {
      if (disc_at(T, a).sign() != 0) ++sc.failures;
      ++sc.samples;
    } catch (const PrecisionExhausted&) {
      ++sc.skipped;
    }
  }
  return sc;
}

DefectlessBasis valuation_basis_defectless(const FieldPtr& node, const FieldPtr& base,
                                           const std::vector<FieldElement>& lifts,
                                           const std::vector<FieldElement>& reps, const SampleConfig& cfg) {
  const long n = node->degree_over(*base);
  const long m = static_cast<long>(lifts.size()), k = static_cast<long>(reps.size());
  if (m * k != n)
    throw InvalidInput(std::to_string(m) + " lifts and " + std::to_string(k) + " coset representatives cannot give a "
                       "basis of degree " + std::to_string(n));
  std::vector<FieldElement> L, R;
  for (const auto& x : lifts) L.push_back(lift(x, *node));
  for (const auto& y : reps) R.push_back(lift(y, *node));
  for (const auto& x : L)
    if (x.zero_state() != ZeroState::NonZero || exact_val(x, "residue lift").sign() != 0)
      throw InvalidInput("residue lifts must have valuation 0");
  // Residues independent over F_q: every nonzero F_q-combination keeps valuation 0.
  const FqField* f = node->fq();
  std::uint64_t combos = 1;
  for (long i = 0; i < m; ++i) combos *= f->q();
  if (combos > 65536) throw InvalidInput("too many residue lifts to certify");
  for (std::uint64_t code = 1; code < combos; ++code) {
    FieldElement acc = node->zero();
    std::uint64_t c = code;
    for (long i = 0; i < m; ++i) {
      auto digit = static_cast<std::uint32_t>(c % f->q());
      c /= f->q();
      if (digit) acc = acc + node->constant(FqElem(f, digit)) * L[static_cast<std::size_t>(i)];
    }
    if (acc.zero_state() != ZeroState::NonZero || exact_val(acc, "residue combination").sign() != 0)
      throw InvalidInput("residue lifts are dependent modulo the maximal ideal");
  }
  // Representatives in distinct cosets of the base value group.
  ValueGroup G = base->value_group_bound();
  std::vector<Rat> rv;
  for (const auto& y : R) rv.push_back(exact_val(y, "coset representative"));
  for (std::size_t i = 0; i < rv.size(); ++i)
    for (std::size_t j = i + 1; j < rv.size(); ++j)
      if (G.contains(rv[i] - rv[j]))
        throw InvalidInput("coset representatives " + std::to_string(i) + " and " + std::to_string(j) +
                           " share a coset of " + G.str());
  std::string note;
  if (base->kind() != NodeKind::Laurent || base->parent())
    note = "residue independence checked over " + f->describe() + " only";
  DefectReport dr = ostrowski_report(n, k, m, note);
  std::vector<FieldElement> e;
  for (const auto& x : L)
    for (const auto& y : R) e.push_back(x * y);
  DefectlessBasis out{make_basis(base, std::move(e)), dr, 0};
  SampleCheck sc = check_valuation_basis(out.basis, cfg);
  if (sc.failures) throw ConsistencyError(std::to_string(sc.failures) + " sampled elements have nonzero discrepancy");
  out.samples_checked = sc.samples;
  return out;
}

Reduction reduce_valuation_basis(const Basis& full, std::size_t v_dim, const FieldElement& w) {
  if (v_dim >= full.elems.size()) throw InvalidInput("nothing to reduce");
  auto c = decompose(w, full);
  Reduction r{c, {}, 0, {}, lift(w, *full.node), {}};
  for (std::size_t i = 0; i < v_dim; ++i) r.V.push_back(full.elems[i]);
  std::optional<Rat> best;
  for (std::size_t i = v_dim; i < c.size(); ++i) {
    if (c[i].zero_state() == ZeroState::Zero) {
      r.term_vals.push_back(Val::infinity());
      continue;
    }
    Rat v = exact_val(c[i], "coordinate of w") + full.elem_vals[i];
    r.term_vals.push_back(Val::exact(v));
    if (!best || v < *best) {
      best = v;
      r.dropped = i - v_dim;
    }
  }
  if (!best) throw InvalidInput("w lies in V");
  for (std::size_t i = v_dim; i < full.elems.size(); ++i)
    if (i - v_dim != r.dropped) r.kept.push_back(full.elems[i]);
  return r;
}

SampleCheck check_reduction(const Reduction& r, const FieldPtr& base, const SampleConfig& cfg) {
  SampleCheck sc;
  std::mt19937_64 rng(cfg.seed);
  const Field& X = r.w.field();
  std::vector<FieldElement> W = r.V;
  W.push_back(r.w);
  for (int i = 0; i < cfg.samples; ++i) {
    FieldElement u = X.zero();
    for (const auto& b : W) u = u + lift(random_coeff(*base, rng, cfg.spread), X) * b;
    std::vector<FieldElement> terms;
    if (u.zero_state() == ZeroState::NonZero) terms.push_back(u);
    FieldElement total = u;
    for (const auto& k : r.kept) {
      FieldElement t = lift(random_coeff(*base, rng, cfg.spread), X) * k;
      total = total + t;
      if (t.zero_state() == ZeroState::NonZero) terms.push_back(t);
    }
    if (terms.empty()) {
      ++sc.skipped;
      continue;
    }
    try {
      Rat m = exact_val(terms.front(), "term");
      for (const auto& t : terms) m = min(m, exact_val(t, "term"));
      Val lhs = total.valuation();
      if (!lhs.is_exact() || lhs.value() != m) ++sc.failures;
      ++sc.samples;
    } catch (const PrecisionExhausted&) {
      ++sc.skipped;
    }
  }
  return sc;
}

// ---------------------------------------------------------- improvement

Improvement improve_generator(const FieldElement& x, const FieldPtr& S, const Rat& c, const NdistBudget& budget,
                              int max_rounds) {
  if (c.sign() <= 0) throw InvalidInput("target discrepancy must be positive");
  FieldElement cur = x;
  std::optional<Improvement> out;
  for (int round = 0; round < max_rounds; ++round) {
    NdistCertificate nd = ndist_bounds(cur, S, budget);
    DiscrepancyReport rep = degree_p_disc(cur, nd);
    Rat vcur = exact_val(cur, "generator");
    if (!out) out = Improvement{cur, rep, {}, {}, false, 0};
    out->x = cur;
    out->report = rep;
    out->residual_vals.push_back(vcur);
    out->ndist_lowers.push_back(nd.lower);
    out->rounds = round + 1;
    if (rep.upper && *rep.upper < c) {
      out->certified = true;
      break;
    }
    if (nd.y.zero_state() == ZeroState::Zero) break;
    cur = cur - nd.y;
  }
  if (!out->certified) out->report.notes.push_back("uncertified: no upper bound below the target");
  if (!S->value_group_bound().contains(c))
    out->report.notes.push_back("target " + c.str() + " is outside the value group " + S->value_group_bound().str());
  return *out;
}

DiscrepancyReport tower_disc(const std::vector<DiscrepancyReport>& steps) {
  if (steps.empty()) throw InvalidInput("tower_disc of an empty tower");
  Basis comp = steps.front().basis;
  for (std::size_t k = 1; k < steps.size(); ++k) {
    if (steps[k].basis.base != steps[k - 1].basis.node) throw InvalidInput("tower_disc: steps do not form a tower");
    comp = product_basis(steps[k].basis, comp);
  }
  DiscrepancyReport r{comp};
  bool all_upper = true, all_exact = true, all_witness = true;
  Rat up(0);
  std::optional<FieldElement> w;
  for (const auto& s : steps) {
    r.lower += s.lower;
    if (s.upper)
      up += *s.upper;
    else
      all_upper = false;
    if (!s.exact) all_exact = false;
    if (s.witness)
      w = w ? lift(*w, *comp.node) * lift(*s.witness, *comp.node) : lift(*s.witness, *comp.node);
    else
      all_witness = false;
  }
  if (all_upper) {
    r.upper = up;
    r.upper_reason = "additivity of step upper bounds";
  }
  if (all_exact) {
    r.exact = r.lower;
    r.rule = "additivity";
  }
  if (all_witness && w) {
    r.witness = w;
    try {
      r.witness_value = disc_at(comp, *w);
      if (*r.witness_value != r.lower) r.notes.push_back("product witness attains " + r.witness_value->str());
    } catch (const PrecisionExhausted&) {
      r.notes.push_back("product witness precision-exhausted");
    }
  }
  return r;
}

}  // namespace valdisc

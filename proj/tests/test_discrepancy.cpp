#include <doctest.h>

#include <random>

#include "valdisc/discrepancy.hpp"
#include "valdisc/errors.hpp"

using namespace valdisc;

namespace {

const FqField* F2 = FqField::prime(2);
const FqField* F3 = FqField::prime(3);

FieldElement el(const std::string& s, const FieldPtr& n) { return parse_element(s, n); }

struct Radical {
  FieldPtr F, E;
};

// F_p((t)) and F(t^{1/p}) as a lattice step with generator s.
Radical radical(const FqField* f) {
  auto F = SeriesField::laurent("F", f, "t");
  std::vector<FieldElement> P(static_cast<std::size_t>(f->p()) + 1, F->zero());
  P[0] = -el("t", F);
  P.back() = F->one();
  return {F, make_extension("E", F, P, ExtKind::Radical, "s")};
}

}  // namespace

TEST_CASE("decompose and recombine") {
  auto [F, E] = radical(F2);
  auto T = make_basis(F, {E->one(), el("s", E)});
  auto c = decompose(el("1 + s", E), T);
  CHECK(equal(c[0], F->one()));
  CHECK(equal(c[1], F->one()));
  auto T2 = make_basis(F, {E->one(), el("1 + s", E)});
  c = decompose(el("s", E), T2);
  CHECK(equal(c[0], F->one()));
  CHECK(equal(c[1], F->one()));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto a = E->random_element(rng, 3);
    CHECK(equal(recombine(decompose(a, T2), T2), a));
  }
  CHECK_THROWS_AS(make_basis(F, {E->one(), el("t", E)}), InvalidInput);
  CHECK_THROWS_AS(make_basis(F, {E->one()}), InvalidInput);
}

TEST_CASE("disc_at examples") {
  auto [F, E] = radical(F2);
  auto T = make_basis(F, {E->one(), el("s", E)});
  CHECK(disc_at(T, el("1 + s", E)) == Rat(0));
  CHECK(disc_at(T, el("t^3 * s", E)) == Rat(0));
  auto T2 = make_basis(F, {E->one(), el("1 + s", E)});
  // v(s) = 1/2, coordinates (1, 1) of valuation 0
  CHECK(disc_at(T2, el("s", E)) == Rat(1, 2));
  auto lb = disc_lower_bound(T2, {el("s", E), el("1", E), el("1 + s", E)});
  CHECK(lb.lower == Rat(1, 2));
  REQUIRE(lb.witness);
  CHECK(equal(*lb.witness, el("s", E)));
}

TEST_CASE("discrepancy properties") {
  auto [F, E] = radical(F2);
  auto T = make_basis(F, {E->one(), el("1 + s + t", E)});
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    auto a = E->random_element(rng, 3);
    if (a.is_zero()) continue;
    Rat d = disc_at(T, a);
    CHECK(d.sign() >= 0);
    auto c = F->random_element(rng, 3);
    if (c.is_zero()) continue;
    CHECK(disc_at(T, c * a) == d);
    // sandwich with the certified bound d(T) = 1/2 computed below
    CHECK(d <= Rat(1, 2));
  }
  auto nd = ndist_bounds(el("1 + s + t", E), F);
  auto rep = degree_p_disc(el("1 + s + t", E), nd);
  REQUIRE(rep.exact);
  CHECK(*rep.exact == Rat(1, 2));
}

TEST_CASE("Gauss valuation") {
  auto F = SeriesField::laurent("F", F2, "t");
  CHECK(gauss_valuation({F->one(), F->one()}, Rat(1, 2)) == Rat(0));
  CHECK(gauss_valuation({F->zero(), F->zero(), F->one()}, Rat(1, 2)) == Rat(1));
  // (1 + T) * T
  CHECK(gauss_valuation({F->zero(), F->one(), F->one()}, Rat(1, 2)) == Rat(1, 2));
  CHECK_THROWS_AS(gauss_valuation({F->zero()}, Rat(1)), InvalidInput);
}

TEST_CASE("ndist over Laurent bases") {
  auto [F, E] = radical(F2);
  auto nd = ndist_bounds(el("1 + s", E), F);
  CHECK(nd.lower == Rat(1, 2));
  REQUIRE(nd.upper);
  CHECK(*nd.upper == Rat(1, 2));
  CHECK(nd.reason == "support-criterion");
  CHECK(equal(nd.y, F->one()));
  CHECK(ndist_value(el("1 + s", E), nd.y) == nd.lower);
  nd = ndist_bounds(el("s", E), F);
  CHECK(nd.lower == Rat(0));
  CHECK(*nd.upper == Rat(0));
  nd = ndist_bounds(el("t + t^2", E), F);
  CHECK(nd.infinite);
  CHECK_THROWS_AS(degree_p_disc(el("t", E), nd), InvalidInput);
}

TEST_CASE("degree-p formula") {
  for (const FqField* f : {F2, F3, FqField::prime(5)}) {
    auto [F, E] = radical(f);
    const int p = f->p();
    auto x = el("1 + s", E);
    auto r = degree_p_disc(x, ndist_bounds(x, F));
    REQUIRE(r.exact);
    CHECK(*r.exact == Rat(p - 1, p));
    auto y = el("s", E);
    r = degree_p_disc(y, ndist_bounds(y, F));
    REQUIRE(r.exact);
    CHECK(*r.exact == Rat(0));
  }
  auto [F, E] = radical(F3);
  CHECK(degree_p_witness_value(el("1 + s", E), F->one()) == Rat(2, 3));
  CHECK(degree_p_witness_value(el("1 + s", E), F->zero()) == Rat(0));
}

TEST_CASE("witness identity on random approximants") {
  for (const FqField* f : {F2, F3}) {
    auto [F, E] = radical(f);
    const int p = f->p();
    auto x = el("1 + s + s^2 * t^-1", E);
    if (p == 2) x = el("t^-1 + s + t*s", E);
    Basis T = power_basis(x, F);
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
      auto y = F->random_element(rng, 2);
      auto w = (x - y).pow(p - 1);
      CHECK(degree_p_witness_value(x, y) == disc_at(T, w));
    }
  }
}

TEST_CASE("valuation bases from lifts and coset representatives") {
  SampleConfig cfg;
  cfg.samples = 200;
  auto [F, R] = radical(F2);
  auto ram = valuation_basis_defectless(R, F, {R->one()}, {R->one(), el("s", R)}, cfg);
  CHECK(ram.defect.defectless);
  CHECK(ram.samples_checked > 100);
  auto U = make_extension("U", F, {F->one(), F->one(), F->one()}, ExtKind::ArtinSchreier, "w");
  auto unr = valuation_basis_defectless(U, F, {U->one(), el("w", U)}, {U->one()}, cfg);
  CHECK(unr.defect.defectless);
  auto M = make_extension("M", R, {R->one(), R->one(), R->one()}, ExtKind::ArtinSchreier, "w");
  auto mix = valuation_basis_defectless(M, F, {M->one(), el("w", M)}, {M->one(), el("s", M)}, cfg);
  CHECK(mix.basis.elems.size() == 4);
  CHECK(mix.defect.e_lb == 2);
  CHECK(mix.defect.f_lb == 2);

  CHECK_THROWS_AS(valuation_basis_defectless(R, F, {R->one()}, {R->one(), el("t", R)}, cfg), InvalidInput);
  CHECK_THROWS_AS(valuation_basis_defectless(U, F, {U->one(), el("1 + t*w", U)}, {U->one()}, cfg), InvalidInput);
  // power basis of 1 + s is not a valuation basis
  auto T = power_basis(el("1 + s", R), F);
  CHECK(check_valuation_basis(T, cfg).failures > 0);
}

TEST_CASE("basis reduction") {
  SampleConfig cfg;
  cfg.samples = 300;
  auto [F, X] = radical(F2);
  auto full = make_basis(F, {X->one(), el("s", X)});
  auto r = reduce_valuation_basis(full, 0, el("1 + s", X));
  CHECK(r.dropped == 0);
  REQUIRE(r.kept.size() == 1);
  CHECK(equal(r.kept[0], el("s", X)));
  auto sc = check_reduction(r, F, cfg);
  CHECK(sc.failures == 0);
  CHECK(sc.samples > 200);

  r = reduce_valuation_basis(full, 0, el("s", X));
  CHECK(r.dropped == 1);
  CHECK(equal(r.kept[0], X->one()));
  CHECK(check_reduction(r, F, cfg).failures == 0);

  // tie: unramified {1, w}, w_elem = 1 + w has v(1) = v(w) = 0
  auto U = make_extension("U", F, {F->one(), F->one(), F->one()}, ExtKind::ArtinSchreier, "w");
  auto fu = make_basis(F, {U->one(), el("w", U)});
  r = reduce_valuation_basis(fu, 0, el("1 + w", U));
  CHECK(r.dropped == 0);
  CHECK(check_reduction(r, F, cfg).failures == 0);

  // dropping the wrong element breaks the check
  Reduction bad = reduce_valuation_basis(full, 0, el("1 + s", X));
  bad.kept = {X->one()};
  CHECK(check_reduction(bad, F, cfg).failures > 0);

  auto fX = make_basis(F, {X->one(), el("s", X)});
  CHECK_THROWS_AS(reduce_valuation_basis(fX, 1, el("t", X)), InvalidInput);
}

TEST_CASE("generator improvement") {
  auto [F, E] = radical(F2);
  auto imp = improve_generator(el("1 + s", E), F, Rat(1, 100));
  CHECK(imp.certified);
  REQUIRE(imp.report.exact);
  CHECK(*imp.report.exact == Rat(0));
  CHECK(equal(imp.x, el("s", E)));
  for (std::size_t i = 1; i < imp.residual_vals.size(); ++i) {
    CHECK(imp.residual_vals[i] >= imp.residual_vals[i - 1]);
    CHECK(imp.ndist_lowers[i] <= imp.ndist_lowers[i - 1]);
  }
  imp = improve_generator(el("s", E), F, Rat(1, 4));
  CHECK(imp.rounds == 1);
  CHECK(equal(imp.x, el("s", E)));
  CHECK_THROWS_AS(improve_generator(el("s", E), F, Rat(0)), InvalidInput);
}

TEST_CASE("additivity over a tower") {
  auto F = SeriesField::laurent("F", F2, "t");
  auto M = make_extension("M", F, {-el("t", F), F->zero(), F->one()}, ExtKind::Radical, "s");
  auto E = make_extension("E", M, {-el("s", M), M->zero(), M->one()}, ExtKind::Radical, "r");
  auto x1 = el("1 + s", M), x2 = el("1 + r", E);
  auto d1 = degree_p_disc(x1, ndist_bounds(x1, F));
  auto d2 = degree_p_disc(x2, ndist_bounds(x2, M));
  CHECK(*d1.exact == Rat(1, 2));
  CHECK(*d2.exact == Rat(1, 4));
  auto tot = tower_disc({d1, d2});
  REQUIRE(tot.exact);
  CHECK(*tot.exact == Rat(3, 4));
  REQUIRE(tot.witness);
  CHECK(equal(*tot.witness, el("t^(3/4)", E)));
  CHECK(*tot.witness_value == Rat(3, 4));
  auto c = decompose(*tot.witness, tot.basis);
  REQUIRE(c.size() == 4);
  for (const auto& ci : c) CHECK(equal(ci, F->one()));
  CHECK_THROWS_AS(tower_disc({d2, d1}), InvalidInput);
}

TEST_CASE("defect example") {
  PrecisionConfig pc;
  pc.resolution = Rat(1, 512);
  auto F = DefectBaseField::make("F", F2, {1, 2, 4, 7}, pc);
  auto E = make_extension("E", F, {el("x^-1", F), F->one(), F->one()}, ExtKind::ArtinSchreier, "z");
  auto z = el("z", E);
  auto nd = ndist_bounds(z, F);
  REQUIRE(nd.chain.size() == 2);
  CHECK(nd.chain[0].value == Rat(0));
  CHECK(nd.chain[1].value == Rat(3, 8));
  CHECK(nd.lower == Rat(3, 8));
  CHECK_FALSE(nd.upper);
  CHECK(equal(nd.y, el("y", F)));
  auto r = degree_p_disc(z, nd);
  CHECK(r.lower == Rat(3, 8));
  CHECK_FALSE(r.upper);
  CHECK(degree_p_witness_value(z, el("y", F)) == Rat(3, 8));
  auto imp = improve_generator(z, F, Rat(1, 4));
  CHECK_FALSE(imp.certified);
  CHECK(equal(imp.x, el("z - y", E)));
}

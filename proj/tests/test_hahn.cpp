#include <random>

#include "doctest.h"
#include "valdisc/errors.hpp"
#include "valdisc/hahn_series.hpp"

using namespace valdisc;

namespace {

HahnSeries random_series(const FqField* f, std::mt19937& rng, int max_terms, long den) {
  std::vector<HahnTerm> t;
  int n = 1 + static_cast<int>(rng() % max_terms);
  for (int i = 0; i < n; ++i) {
    long num = static_cast<long>(rng() % 25) - 8;
    t.push_back(HahnTerm{Rat(num, den), FqElem(f, 1 + static_cast<std::uint32_t>(rng() % (f->q() - 1)))});
  }
  return HahnSeries(f, t);
}

// Every term of `approx` below its precision must match `exact`.
bool agrees_below_precision(const HahnSeries& approx, const HahnSeries& exact) {
  REQUIRE(approx.precision().has_value());
  return approx == exact.truncated(*approx.precision());
}

}  // namespace

TEST_CASE("val arithmetic and minimum") {
  CHECK((Val::exact(Rat(1, 2)) + Val::exact(Rat(1, 4))) == Val::exact(Rat(3, 4)));
  CHECK((Val::exact(Rat(1)) + Val::at_least(Rat(2))) == Val::at_least(Rat(3)));
  CHECK((Val::infinity() + Val::at_least(Rat(2))).is_infinite());
  CHECK(vmin(Val::exact(Rat(1)), Val::at_least(Rat(1))) == Val::exact(Rat(1)));
  CHECK(vmin(Val::exact(Rat(2)), Val::at_least(Rat(1))) == Val::at_least(Rat(1)));
  CHECK(vmin(Val::infinity(), Val::exact(Rat(-3))) == Val::exact(Rat(-3)));
  CHECK(Val::parse("AtLeast(-1/256)") == Val::at_least(Rat(-1, 256)));
  CHECK(Val::at_least(Rat(-1, 256)).str() == "AtLeast(-1/256)");
  CHECK_THROWS_AS(Val::at_least(Rat(0)).value(), PrecisionExhausted);
}

TEST_CASE("series normalisation") {
  const FqField* f = FqField::prime(2);
  FqElem one = FqElem::one(f);
  HahnSeries s(f, {{Rat(1), one}, {Rat(-1, 2), one}, {Rat(1), one}, {Rat(3), one}}, Rat(2));
  REQUIRE(s.terms().size() == 1);
  CHECK(s.terms()[0].exp == Rat(-1, 2));
  CHECK(s.valuation() == Val::exact(Rat(-1, 2)));
  CHECK(HahnSeries::unknown_above(f, Rat(1, 3)).valuation() == Val::at_least(Rat(1, 3)));
  CHECK(HahnSeries(f).valuation().is_infinite());
  CHECK_FALSE(s.coefficient(Rat(2)).has_value());
  CHECK(s.coefficient(Rat(1))->is_zero());
}

TEST_CASE("truncated products never claim more than they know") {
  std::mt19937 rng(17);
  for (const FqField* f : {FqField::prime(2), FqField::prime(3), FqField::get(2, {1, 1, 1})}) {
    for (int trial = 0; trial < 200; ++trial) {
      HahnSeries a = random_series(f, rng, 6, 4), b = random_series(f, rng, 6, 3);
      Rat ca(static_cast<long>(rng() % 20) - 5, 2), cb(static_cast<long>(rng() % 20) - 5, 3);
      HahnSeries ta = a.truncated(ca), tb = b.truncated(cb);
      HahnSeries prod = ta * tb;
      CHECK(agrees_below_precision(prod, a * b));
      CHECK(agrees_below_precision(ta + tb, a + b));
    }
  }
}

TEST_CASE("inversion: a * (1/a) = 1 up to the advertised precision") {
  std::mt19937 rng(23);
  for (const FqField* f : {FqField::prime(2), FqField::prime(5), FqField::get(3, {1, 0, 1})}) {
    FqElem one = FqElem::one(f);
    for (int trial = 0; trial < 100; ++trial) {
      HahnSeries a = random_series(f, rng, 5, 2);
      if (a.is_monomial() || a.is_exact_zero()) continue;
      HahnSeries inv = invert(a, Rat(6));
      REQUIRE(inv.precision().has_value());
      CHECK(*inv.precision() == Rat(6));
      HahnSeries check = a * inv;
      // `a` is exact so the product is known to 6 + v(a).
      Rat known = Rat(6) + a.valuation().value();
      CHECK(check.truncated(known) == HahnSeries::constant(one).truncated(known));
    }
    // Monomials invert exactly
    HahnSeries m = HahnSeries::monomial(f, Rat(-3, 7), FqElem(f, f->q() - 1));
    CHECK((m * invert(m, Rat(0))) == HahnSeries::constant(one));
    CHECK(invert(m, Rat(0)).is_exact());
  }
  const FqField* f2 = FqField::prime(2);
  CHECK_THROWS_AS(invert(HahnSeries::unknown_above(f2, Rat(1)), Rat(3)), PrecisionExhausted);
  CHECK_THROWS(invert(HahnSeries(f2), Rat(3)));
}

TEST_CASE("frobenius-aware powers agree with repeated products") {
  std::mt19937 rng(29);
  for (const FqField* f : {FqField::prime(2), FqField::prime(3)}) {
    for (int trial = 0; trial < 40; ++trial) {
      HahnSeries a = random_series(f, rng, 4, 2);
      unsigned long n = 1 + rng() % 9;
      HahnSeries naive = HahnSeries::constant(FqElem::one(f));
      for (unsigned long i = 0; i < n; ++i) naive = naive * a;
      CHECK(pow(a, n) == naive);
      CHECK(frobenius(pth_root(a)) == a);
    }
  }
  // Truncated input: squaring in char 2 doubles the precision instead of losing it.
  const FqField* f = FqField::prime(2);
  HahnSeries y = HahnSeries::monomial(f, Rat(-1, 2)).truncated(Rat(-1, 8));
  HahnSeries y2 = pow(y, 2);
  REQUIRE(y2.precision().has_value());
  CHECK(*y2.precision() == Rat(-1, 4));
  CHECK(*(y * y).precision() == Rat(-5, 8));
}

TEST_CASE("defect series construction") {
  DefectSeries d = build_defect_series(2, {1, 2, 4, 7}, Rat(1, 512));
  CHECK_FALSE(d.extended);
  CHECK(d.used_gaps == std::vector<long>{1, 2, 4, 7});
  CHECK(d.series.valuation() == Val::exact(Rat(-1, 2)));
  REQUIRE(d.series.terms().size() == 4);
  CHECK(d.series.terms()[3].exp == Rat(-1, 128));
  CHECK(*d.series.precision() == Rat(-1, 512));

  // Finer precision forces the minimal continuation 7 + 4 = 11.
  DefectSeries fine = build_defect_series(2, {1, 2, 4, 7}, Rat(1, 4096));
  CHECK(fine.extended);
  CHECK(fine.used_gaps == std::vector<long>{1, 2, 4, 7, 11});

  // Coarse precision drops the tail terms rather than leaving them unchecked.
  DefectSeries coarse = build_defect_series(3, {1, 2}, Rat(1, 3));
  CHECK(coarse.series.terms().size() == 0);
  CHECK(coarse.series.valuation() == Val::at_least(Rat(-1, 3)));

  CHECK_THROWS_AS(build_defect_series(2, {1, 1, 3}, Rat(1, 64)), InvalidInput);
  CHECK_THROWS_AS(build_defect_series(2, {0, 2}, Rat(1, 64)), InvalidInput);
  CHECK_THROWS_AS(build_defect_series(2, {1, 2}, Rat(0)), InvalidInput);
}

#include <random>
#include <vector>

#include "doctest.h"
#include "valdisc/errors.hpp"
#include "valdisc/matrix.hpp"
#include "valdisc/poly.hpp"
#include "valdisc/rat.hpp"

using namespace valdisc;

namespace {

// Leibniz expansion; independent of Berkowitz.
template <class R>
R leibniz_det(const Matrix<R>& A) {
  const std::size_t n = A.rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  R total = A.zero();
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    R term = one_like(A.zero());
    for (std::size_t i = 0; i < n; ++i) term = term * A(i, perm[i]);
    total = (inversions % 2 == 0) ? total + term : total - term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

FqElem random_elem(const FqField* f, std::mt19937& rng) {
  return {f, static_cast<std::uint32_t>(rng() % f->q())};
}

Poly<FqElem> random_poly(const FqField* f, int deg, std::mt19937& rng) {
  std::vector<FqElem> c;
  for (int i = 0; i < deg; ++i) c.push_back(random_elem(f, rng));
  FqElem lc = random_elem(f, rng);
  if (lc.is_zero()) lc = FqElem::one(f);
  c.push_back(lc);
  return Poly<FqElem>(FqElem::zero(f), c);
}


}  // namespace

TEST_CASE("rat parse and arithmetic") {
  CHECK(Rat::parse("3/8") == Rat(3, 8));
  CHECK(Rat::parse("-6/4") == Rat(-3, 2));
  CHECK(Rat::parse("5").is_integer());
  CHECK_THROWS_AS(Rat::parse("1/0"), InvalidInput);
  CHECK_THROWS_AS(Rat::parse("abc"), InvalidInput);
  CHECK((Rat(1, 2) + Rat(1, 4)) == Rat(3, 4));
  CHECK(Rat(-1, 256).str() == "-1/256");
  CHECK(floor(Rat(-1, 2)) == Rat(-1));
  CHECK(pow(Rat(2), -3) == Rat(1, 8));
  CHECK(rat_gcd(Rat(1, 2), Rat(1, 3)) == Rat(1, 6));
}

TEST_CASE("extended rationals order infinity last") {
  ExtRat inf = ExtRat::infinity();
  CHECK(ExtRat(Rat(100)) < inf);
  CHECK(inf == ExtRat::parse("inf"));
  CHECK((ExtRat(Rat(1)) + inf).is_infinite());
  CHECK_THROWS(inf.value());
}

TEST_CASE("finite field axioms on F_4, F_8, F_9, F_25") {
  std::vector<const FqField*> fields = {FqField::get(2, {1, 1, 1}), FqField::get(2, {1, 1, 0, 1}),
                                        FqField::get(3, {1, 0, 1}), FqField::get(5, {2, 0, 1})};
  for (const FqField* f : fields) {
    CAPTURE(f->describe());
    for (std::uint32_t a = 0; a < f->q(); ++a) {
      FqElem x{f, a};
      if (!x.is_zero()) CHECK((x * x.inverse()).is_one());
      CHECK(x.pth_root().frobenius() == x);
      CHECK(x.pow(f->q()) == x);
      CHECK(x + (-x) == FqElem::zero(f));
      for (std::uint32_t b = 0; b < f->q(); ++b) {
        FqElem y{f, b};
        CHECK(x * y == y * x);
        CHECK((x + y).frobenius() == x.frobenius() + y.frobenius());
      }
    }
  }
}

TEST_CASE("interned fields and reducible moduli") {
  CHECK(FqField::get(3, {1, 0, 1}) == FqField::get(3, {1, 0, 1}));
  CHECK_THROWS_AS(FqField::get(2, {1, 0, 1}), InvalidInput);  // (w+1)^2
  CHECK_THROWS_AS(FqField::get(4, {0, 1}), InvalidInput);
  FqElem a = FqElem::one(FqField::prime(2));
  FqElem b = FqElem::one(FqField::prime(3));
  CHECK_THROWS_AS(a + b, InvalidInput);
}

TEST_CASE("berkowitz determinant matches leibniz") {
  std::mt19937 rng(7);
  for (const FqField* f : {FqField::prime(2), FqField::prime(5), FqField::get(3, {1, 0, 1})}) {
    for (std::size_t n = 1; n <= 6; ++n) {
      for (int trial = 0; trial < 10; ++trial) {
        Matrix<FqElem> A(n, n, FqElem::zero(f));
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) A(i, j) = random_elem(f, rng);
        CHECK(determinant(A) == leibniz_det(A));
      }
    }
  }
}

TEST_CASE("singular matrix has zero determinant") {
  const FqField* f = FqField::prime(7);
  Matrix<FqElem> A(3, 3, FqElem::zero(f));
  int vals[3][3] = {{2, 0, 1}, {1, 3, 2}, {1, 1, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = FqElem::from_int(f, vals[i][j]);
  // 2(3-2) - 0 + 1(1-3) = 0
  CHECK(determinant(A).is_zero());
}

TEST_CASE("resultant examples and oracle agreement") {
  const FqField* f = FqField::prime(5);
  auto c = [&](long n) { return FqElem::from_int(f, n); };
  FqElem z = FqElem::zero(f);
  // lc(P)^{deg Q} prod Q(roots of P): Res(t - r, t - s) = r - s.
  Poly<FqElem> P(z, {c(-2), c(1)}), Q(z, {c(-3), c(1)});
  CHECK(resultant(P, Q) == c(2) - c(3));
  CHECK(resultant_sylvester(P, Q) == c(2) - c(3));
  // Common root gives zero.
  Poly<FqElem> A = P * Q, B = P * Poly<FqElem>(z, {c(1), c(0), c(1)});
  CHECK(resultant(A, B).is_zero());
  CHECK(resultant_sylvester(A, B).is_zero());

  std::mt19937 rng(11);
  for (const FqField* g : {FqField::prime(2), FqField::prime(3), FqField::get(2, {1, 1, 1})}) {
    for (int trial = 0; trial < 40; ++trial) {
      auto a = random_poly(g, 1 + static_cast<int>(rng() % 4), rng);
      auto b = random_poly(g, 1 + static_cast<int>(rng() % 4), rng);
      CHECK(resultant(a, b) == resultant_sylvester(a, b));
      // Multiplicativity: Res(a, b1 b2) = Res(a, b1) Res(a, b2)
      auto b2 = random_poly(g, 1 + static_cast<int>(rng() % 3), rng);
      CHECK(resultant(a, b * b2) == resultant(a, b) * resultant(a, b2));
    }
  }
}

TEST_CASE("divrem reconstructs the dividend") {
  std::mt19937 rng(3);
  const FqField* f = FqField::get(3, {1, 0, 1});
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_poly(f, static_cast<int>(rng() % 7), rng);
    auto b = random_poly(f, 1 + static_cast<int>(rng() % 3), rng);
    auto [q, r] = divrem(a, b);
    CHECK((q * b + r).coeffs() == a.coeffs());
    CHECK(r.degree() < b.degree());
  }
}

TEST_CASE("smallest irreducible factor degree") {
  const FqField* f = FqField::prime(2);
  FqElem z = FqElem::zero(f), o = FqElem::one(f);
  Poly<FqElem> x2x1(z, {o, o, o});           // irreducible quadratic
  Poly<FqElem> x3x1(z, {o, o, z, o});        // irreducible cubic
  Poly<FqElem> lin(z, {o, o});               // x + 1
  CHECK(min_irreducible_factor_degree(x2x1) == 2);
  CHECK(min_irreducible_factor_degree(x3x1) == 3);
  CHECK(min_irreducible_factor_degree(x2x1 * x3x1) == 2);
  CHECK(min_irreducible_factor_degree(x3x1 * lin) == 1);
  CHECK(min_irreducible_factor_degree(x3x1 * x3x1) == 3);
  // Brute force over F_3: a polynomial with no root has min degree >= 2.
  const FqField* g = FqField::prime(3);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    auto p = random_poly(g, 1 + static_cast<int>(rng() % 4), rng);
    bool has_root = false;
    for (std::uint32_t a = 0; a < 3; ++a) has_root |= p.eval(FqElem(g, a)).is_zero();
    int d = min_irreducible_factor_degree(p);
    CHECK((d == 1) == has_root);
    if (p.degree() <= 3 && !has_root) CHECK(d == p.degree());
  }
}

#include <doctest.h>

#include "valdisc/errors.hpp"
#include "valdisc/pbasis.hpp"

using namespace valdisc;

namespace {

FieldPtr base(int p) {
  return MonomialField::base("F", FqField::prime(p), {"t", "u"}, {Rat(1), Rat(1)});
}

PBasis make(const FieldPtr& F, const std::vector<std::string>& S) {
  auto A = pbasis_ambient(F);
  std::vector<FieldElement> s;
  for (const auto& x : S) s.push_back(parse_element(x, A));
  return associated_basis(F, s);
}

FieldElement in(const PBasis& P, const std::string& s) { return parse_element(s, P.node); }

}  // namespace

TEST_CASE("associated basis") {
  auto F = base(2);
  auto P = make(F, {"t^(1/2)", "u^(1/2)"});
  REQUIRE(P.T.elems.size() == 4);
  CHECK(equal(P.T.elems[1], in(P, "t^(1/2)")));
  CHECK(equal(P.T.elems[3], in(P, "t^(1/2) * u^(1/2)")));
  for (const auto& t : P.T.elems) CHECK(ndist_bounds(t.pow(2), F).infinite);

  P = make(F, {"1 + t^(1/2)", "1 + u^(1/2)"});
  CHECK(equal(P.T.elems[3], in(P, "(1 + t^(1/2)) * (1 + u^(1/2))")));
  CHECK(equal(P.T.elems[1].pow(2), in(P, "1 + t")));
  CHECK(P.exps[3] == std::vector<int>{1, 1});

  // t * u = (t^{1/2})^2 u lies in F: the products collide
  CHECK_THROWS_AS(make(F, {"t^(1/2)", "t^(1/2) * u"}), InvalidInput);
  CHECK_THROWS_AS(make(F, {"t^(1/2)", "t^(1/2) + t"}), InvalidInput);
  CHECK_THROWS_AS(make(F, {"1 + t"}), InvalidInput);
  CHECK_THROWS_AS(make(F, {"t^(1/2) + u^(1/2)"}), InvalidInput);
  auto G = MonomialField::base("G", FqField::prime(2), {"t", "u"}, {Rat(1), Rat(1)}, {4, 4});
  std::vector<FieldElement> bad{parse_element("t^(1/4)", G)};
  CHECK_THROWS_AS(associated_basis(F, bad), InvalidInput);
}

TEST_CASE("ndist scaling") {
  auto F = base(2);
  auto P = make(F, {"1 + t^(1/2)", "1 + u^(1/2)"});
  auto x = P.T.elems[1];
  auto sc = ndist_scaling_check(x, parse_element("t", F), P.nd[1]);
  CHECK(sc.ok);
  CHECK(sc.value == Rat(1, 2));
  CHECK(equal(sc.fy, parse_element("t", F)));
  CHECK(ndist_scaling_check(x, F->one(), P.nd[1]).ok);
  auto Q = make(F, {"t^(1/2)", "u^(1/2)"});
  sc = ndist_scaling_check(Q.T.elems[1], parse_element("t^-1", F), Q.nd[1]);
  CHECK(sc.ok);
  CHECK(sc.value == Rat(0));
  CHECK_THROWS_AS(ndist_scaling_check(x, F->zero(), P.nd[1]), InvalidInput);
}

TEST_CASE("product approximants") {
  auto F = base(2);
  auto P = make(F, {"1 + t^(1/2)", "1 + u^(1/2)"});
  auto mc = mult_ndist_check(P.nd[1], P.nd[1]);
  CHECK(mc.ok);
  REQUIRE(mc.value);
  CHECK(*mc.value == Rat(1));
  CHECK(equal(mc.approximant, F->one()));
  mc = mult_ndist_check(P.nd[1], P.nd[2]);
  CHECK(mc.ok);
  CHECK(*mc.value == Rat(1, 2));
  CHECK(*mc.bound == Rat(1, 2));
  auto Q = make(F, {"t^(1/2)", "u^(1/2)"});
  mc = mult_ndist_check(Q.nd[1], Q.nd[1]);
  CHECK(mc.ok);
  CHECK(*mc.value == Rat(0));
}

TEST_CASE("filtration") {
  auto F = base(2);
  auto P = make(F, {"1 + t^(1/2)", "1 + u^(1/2)"});
  auto f = filtration(P);
  CHECK_FALSE(f.bound_only);
  CHECK(f.values[0].is_infinite());
  for (int k = 1; k < 4; ++k) CHECK(f.values[static_cast<std::size_t>(k)] == ExtRat(Rat(1, 2)));
  CHECK(f.breakpoints == std::vector<Rat>{Rat(1, 2)});
  CHECK(f.card == std::vector<std::size_t>{4});
  CHECK(f.p_power_cards);
  CHECK(f.ndist == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
  CHECK(f.ndist_excluding_one == std::vector<Rat>{Rat(0), Rat(1, 2)});
  auto sg = subgroup_check(P, f);
  CHECK(sg.pairs == 10);
  CHECK(sg.failures == 0);

  auto Q = make(F, {"t^(1/2)", "u^(1/2)"});
  f = filtration(Q);
  CHECK(f.ndist == std::vector<Rat>{Rat(0), Rat(0)});
  CHECK(subgroup_check(Q, f).failures == 0);
}

TEST_CASE("filtration nesting") {
  auto F = base(2);
  auto P = make(F, {"1 + t^(1/2) + u", "u^(1/2) + t * u^(3/2)"});
  auto f = filtration(P);
  // U_0 = T and #U_r is nonincreasing in r
  std::size_t last = P.T.elems.size();
  CHECK(f.card.front() <= last);
  for (auto c : f.card) {
    CHECK(c <= last);
    last = c;
  }
  CHECK(subgroup_check(P, f).failures == 0);
}

TEST_CASE("p-basis lower bound and comparison") {
  auto F = base(2);
  auto P = make(F, {"1 + t^(1/2)", "1 + u^(1/2)"});
  auto f = filtration(P);
  auto B = pbasis_lower_bound(P, f);
  REQUIRE(B.x_index.size() == 2);
  CHECK(B.x_index[0] == 2);  // x_1 = 1 + u^{1/2}
  CHECK(B.x_index[1] == 1);  // x_2 = 1 + t^{1/2}
  CHECK(B.closed_form == Rat(1));
  CHECK(B.direct == Rat(1));
  CHECK(B.filtration_sum == Rat(1));
  CHECK(equal(B.witness, in(P, "t^(1/2) * u^(1/2)")));
  auto C = ndist_comparison_check(P, B);
  REQUIRE(C.rows.size() == 2);
  for (const auto& r : C.rows) {
    CHECK(r.verdict == Verdict::Equal);
    CHECK(r.over_prev.lower == Rat(1, 2));
  }
  CHECK(C.all_equal);
  REQUIRE(C.tower.exact);
  CHECK(*C.tower.exact == B.direct);

  auto Q = make(F, {"t^(1/2)", "u^(1/2)"});
  auto fq = filtration(Q);
  auto BQ = pbasis_lower_bound(Q, fq);
  CHECK(BQ.direct == Rat(0));
  auto CQ = ndist_comparison_check(Q, BQ);
  CHECK(CQ.all_equal);
  CHECK(*CQ.tower.exact == Rat(0));
}

TEST_CASE("p = 3 analogue") {
  auto F = base(3);
  auto P = make(F, {"1 + t^(1/3)", "1 + u^(1/3)"});
  CHECK(P.T.elems.size() == 9);
  auto f = filtration(P);
  auto B = pbasis_lower_bound(P, f);
  CHECK(B.closed_form == Rat(4, 3));
  CHECK(B.direct == Rat(4, 3));
  auto C = ndist_comparison_check(P, B);
  CHECK(C.all_equal);
  CHECK(*C.tower.exact == Rat(4, 3));
  CHECK(subgroup_check(P, f).failures == 0);
}

// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "valdisc/cli.hpp"
#include "valdisc/discrepancy.hpp"
#include "valdisc/errors.hpp"
#include "valdisc/pbasis.hpp"

using namespace valdisc;
using cli::json;

namespace {

int failures = 0;

void report(int n, const std::string& name, const std::function<std::string()>& body) {
  std::string detail;
  bool ok = false;
  try {
    detail = body();
    ok = detail.empty();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  if (!ok) ++failures;
  std::printf("%s  %2d  %s%s%s\n", ok ? "PASS" : "FAIL", n, name.c_str(), ok ? "" : "  -- ", detail.c_str());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json run(json raw) { return cli::run_scenario(cli::normalize_config(raw)); }

FieldElement el(const std::string& s, const FieldPtr& n) { return parse_element(s, n); }

FieldPtr radical_step(const FieldPtr& F, const std::string& id, const std::string& radicand, const std::string& gen) {
  const int p = F->p();
  std::vector<FieldElement> P(static_cast<std::size_t>(p) + 1, F->zero());
  P[0] = -el(radicand, F);
  P.back() = F->one();
  return make_extension(id, F, P, ExtKind::Radical, gen);
}

FieldPtr unramified_step(const FieldPtr& F, const std::string& id, const std::string& gen) {
  const int p = F->p();
  std::vector<FieldElement> P(static_cast<std::size_t>(p) + 1, F->zero());
  P[0] = -F->one();
  P[1] = -F->one();
  P.back() = F->one();
  return make_extension(id, F, P, ExtKind::ArtinSchreier, gen);
}

std::string basis_check(const FieldPtr& node, const FieldPtr& F, std::vector<FieldElement> lifts,
                        std::vector<FieldElement> reps) {
  SampleConfig cfg;
  cfg.samples = 1200;
  cfg.seed = 7;
  auto db = valuation_basis_defectless(node, F, lifts, reps, cfg);
  auto sc = check_valuation_basis(db.basis, cfg);
  if (sc.failures) return node->id() + ": " + std::to_string(sc.failures) + " failures";
  if (sc.samples < 1000) return node->id() + ": only " + std::to_string(sc.samples) + " samples";
  if (!db.defect.defectless) return node->id() + ": not certified defectless";
  return {};
}

}  // namespace

int main() {
  report(1, "degree-p: x = 1 + t^(1/p) gives d = (p-1)/p for p = 2, 3, 5 in < 5 s", [] {
    auto t0 = std::chrono::steady_clock::now();
    for (long p : {2L, 3L, 5L}) {
      json r = run({{"scenario", "degree-p"}, {"p", p}})["results"]["discrepancy"];
      if (r["exact"] != Rat(p - 1, p).str()) return "p = " + std::to_string(p) + ": " + r["exact"].dump();
    }
    double s = seconds_since(t0);
    return s < 5.0 ? std::string() : "took " + std::to_string(s) + " s";
  });

  report(2, "witness identity on 500 random y over F_2((t)) and F_3((t))", [] {
    for (int p : {2, 3}) {
      auto F = SeriesField::laurent("F", FqField::prime(p), "t");
      auto E = radical_step(F, "E", "t", "s");
      auto x = p == 2 ? el("t^-1 + s + t*s", E) : el("1 + s + s^2 * t^-1", E);
      Basis T = power_basis(x, F);
      std::mt19937_64 rng(static_cast<std::uint64_t>(p));
      for (int i = 0; i < 500; ++i) {
        auto y = F->random_element(rng, 3);
        Rat a = degree_p_witness_value(x, y), b = disc_at(T, (x - y).pow(p - 1));
        if (a != b) return "p = " + std::to_string(p) + ", y = " + y.str() + ": " + a.str() + " vs " + b.str();
      }
    }
    return std::string();
  });

  report(3, "valuation bases: ramified, unramified, mixed e = f = 2 give disc_at = 0 on >= 1000 samples each", [] {
    auto F = SeriesField::laurent("F", FqField::prime(2), "t");
    auto R = radical_step(F, "R", "t", "s");
    auto U = unramified_step(F, "U", "w");
    auto M = unramified_step(R, "M", "w");
    for (auto msg : {basis_check(R, F, {R->one()}, {R->one(), el("s", R)}),
                     basis_check(U, F, {U->one(), el("w", U)}, {U->one()}),
                     basis_check(M, F, {M->one(), el("w", M)}, {M->one(), el("s", M)})})
      if (!msg.empty()) return msg;
    return std::string();
  });

  report(4, "reduce_valuation_basis({1, s}, w = 1 + s) passes a 1000-sample check", [] {
    auto F = SeriesField::laurent("F", FqField::prime(2), "t");
    auto X = radical_step(F, "X", "t", "s");
    auto r = reduce_valuation_basis(make_basis(F, {X->one(), el("s", X)}), 0, el("1 + s", X));
    SampleConfig cfg;
    cfg.samples = 1200;
    auto sc = check_reduction(r, F, cfg);
    if (r.dropped != 0 || r.kept.size() != 1 || !equal(r.kept[0], el("s", X))) return std::string("wrong reduction");
    if (sc.failures) return std::to_string(sc.failures) + " failures";
    if (sc.samples < 1000) return "only " + std::to_string(sc.samples) + " samples";
    return std::string();
  });

  report(5, "defect example: residual AtLeast(-1/256), ndist chain [0, 3/8], defect_ub = 2 from (e, f) = (1, 1)", [] {
    json r = run({{"scenario", "defect-example"}, {"p", 2}, {"gaps", {1, 2, 4, 7}}, {"precision", "1/512"}})["results"];
    if (r["residual"] != "AtLeast(-1/256)") return "residual " + r["residual"].dump();
    json chain = json::array();
    for (const auto& s : r["ndist"]["chain"]) chain.push_back(s["value"]);
    if (chain != json::array({"0", "3/8"})) return "chain " + chain.dump();
    const json& d = r["defect"];
    if (d["defect_ub"] != 2 || d["e_lb"] != 1 || d["f_lb"] != 1) return "defect " + d.dump();
    return std::string();
  });

  report(6, "tower: exact 3/4, witness t^(3/4), coordinates (1, -1, -1, 1)", [] {
    cli::Registry reg;
    json r = cli::run_scenario(cli::normalize_config({{"scenario", "tower"}, {"p", 2}}), &reg)["results"];
    const json& tot = r["total"];
    if (tot["exact"] != "3/4") return "exact " + tot["exact"].dump();
    FieldPtr top = reg.at(tot["basis"]["node"]);
    FieldPtr F = reg.at("F");
    if (!equal(el(tot["witness"], top), el("t^(3/4)", top))) return "witness " + tot["witness"].dump();
    std::vector<std::string> want{"1", "-1", "-1", "1"};
    for (std::size_t i = 0; i < want.size(); ++i)
      if (!equal(el(r["witness_coordinates"][i], F), el(want[i], F))) return "coordinates " + r["witness_coordinates"].dump();
    return std::string();
  });

  report(7, "improve_generator(1 + t^(1/2), c = 1/100) gives exact d = 0", [] {
    json r = run({{"scenario", "improve"}, {"p", 2}, {"x", "1 + t^(1/2)"}, {"c", "1/100"}})["results"];
    if (r["discrepancy"]["exact"] != "0") return "exact " + r["discrepancy"]["exact"].dump();
    if (r["certified"] != true) return std::string("not certified");
    return std::string();
  });

  report(8, "p-basis suite on F_2(t,u): ndist_1 = ndist_2 = 1/2, bound 1 on both paths, verdicts equal, tower = bound, < 30 s", [] {
    auto t0 = std::chrono::steady_clock::now();
    json r = run({{"scenario", "pbasis"}, {"p", 2}, {"S", {"1 + t^(1/2)", "1 + u^(1/2)"}}})["results"];
    if (r["filtration"]["ndist"] != json::array({"1/2", "1/2"})) return "ndist " + r["filtration"]["ndist"].dump();
    if (r["bound"]["closed_form"] != "1" || r["bound"]["direct"] != "1") return "bound " + r["bound"].dump();
    for (const auto& c : r["comparison"])
      if (c["verdict"] != "equal") return "verdict " + c["verdict"].dump();
    if (r["tower"]["exact"] != r["bound"]["direct"]) return "tower " + r["tower"]["exact"].dump();
    double s = seconds_since(t0);
    return s < 30.0 ? std::string() : "took " + std::to_string(s) + " s";
  });

  report(9, "axiom suites: ultrametric, multiplicativity, Frobenius, Gauss multiplicativity, 1000 cases each", [] {
    auto F = SeriesField::laurent("F", FqField::prime(2), "t");
    auto R = radical_step(F, "R", "t", "s");
    auto X = radical_step(F, "X", "t + t^2", "z");
    auto G = SeriesField::laurent("G", FqField::prime(3), "t");
    auto Y = radical_step(G, "Y", "1 + t^-1", "z");
    std::mt19937_64 rng(11);
    int ultra = 0, mult = 0, frob = 0, gauss = 0;
    const FieldPtr fields[] = {R, X, Y};
    for (int i = 0; i < 1000; ++i) {
      const FieldPtr& n = fields[i % 3];
      auto a = n->random_element(rng, 3), b = n->random_element(rng, 3);
      if (a.is_zero() || b.is_zero()) {
        --i;
        continue;
      }
      Rat va = a.valuation().value(), vb = b.valuation().value();
      auto s = a + b;
      if (!s.is_zero() && s.valuation().value() < min(va, vb)) return "ultrametric fails for " + a.str() + ", " + b.str();
      ++ultra;
      if ((a * b).valuation().value() != va + vb) return "multiplicativity fails for " + a.str() + ", " + b.str();
      ++mult;
      const long p = n->p();
      if (!equal(s.pow(p), a.pow(p) + b.pow(p))) return "Frobenius fails for " + a.str() + ", " + b.str();
      ++frob;
      // Gauss valuation of a product against coefficientwise convolution.
      std::vector<FieldElement> P, Q;
      const FieldPtr& base = n->parent();
      for (int k = 0; k < 3; ++k) P.push_back(base->random_element(rng, 3));
      for (int k = 0; k < 2; ++k) Q.push_back(base->random_element(rng, 3));
      P.push_back(base->one());
      Q.push_back(base->one());
      std::vector<FieldElement> PQ(P.size() + Q.size() - 1, base->zero());
      for (std::size_t u = 0; u < P.size(); ++u)
        for (std::size_t w = 0; w < Q.size(); ++w) PQ[u + w] = PQ[u + w] + P[u] * Q[w];
      Rat vx(static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 4) + 1);
      if (gauss_valuation(PQ, vx) != gauss_valuation(P, vx) + gauss_valuation(Q, vx))
        return std::string("Gauss multiplicativity fails");
      ++gauss;
    }
    if (ultra < 1000 || mult < 1000 || frob < 1000 || gauss < 1000) return std::string("too few cases");
    return std::string();
  });

  report(10, "determinism: repeated runs are byte-identical and verify passes", [] {
    for (const char* sc : {"degree-p", "defect-example", "improve", "tower", "pbasis", "valuation-basis"}) {
      json cfg = cli::normalize_config(cli::default_config(sc));
      std::string a = cli::dump_report(cli::run_scenario(cfg));
      std::string b = cli::dump_report(cli::run_scenario(cfg));
      if (a != b) return std::string(sc) + ": reports differ";
      auto v = cli::verify_report(json::parse(a));
      if (!v.ok) return std::string(sc) + ": verify failed at " + v.field + ": " + v.message;
    }
    return std::string();
  });

  std::printf("%s\n", failures ? "acceptance: FAIL" : "acceptance: all criteria pass");
  return failures ? 1 : 0;
}

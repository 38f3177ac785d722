#include "valdisc/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <set>

#include "valdisc/discrepancy.hpp"
#include "valdisc/errors.hpp"
#include "valdisc/pbasis.hpp"
#include "valdisc/tower_ops.hpp"

namespace valdisc::cli {

namespace {

const std::set<std::string> kScenarios{"degree-p", "defect-example", "improve", "tower", "pbasis", "valuation-basis"};

[[noreturn]] void fail(const std::string& where, const std::string& msg) { throw SchemaError(where + ": " + msg); }

// ------------------------------------------------------------ validation

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(where, "unknown key '" + k + "'");
}

long get_int(const json& j, const std::string& where, long lo, long hi) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  long v = j.get<long>();
  if (v < lo || v > hi) fail(where, "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

std::string get_rat(const json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Rat(j.get<long>()).str();
    if (j.is_string()) return Rat::parse(j.get<std::string>()).str();
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
  fail(where, "expected a rational as a string");
}

std::string get_str(const json& j, const std::string& where) {
  if (!j.is_string() || j.get<std::string>().empty()) fail(where, "expected a nonempty string");
  return j.get<std::string>();
}

json get_strs(const json& j, const std::string& where, std::size_t min_len = 1) {
  if (!j.is_array() || j.size() < min_len) fail(where, "expected an array of at least " + std::to_string(min_len));
  json out = json::array();
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_str(j[i], where + "/" + std::to_string(i)));
  return out;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

long get_p(const json& j, const std::string& where) {
  long p = get_int(j, where, 2, 251);
  if (!is_prime(p)) fail(where, "characteristic must be prime");
  return p;
}

json modulus_or_prime(const json& d, const std::string& where) {
  if (!d.contains("modulus")) return json::array({0, 1});
  const json& m = d["modulus"];
  if (!m.is_array() || m.size() < 2) fail(where + "/modulus", "expected a monic coefficient array");
  for (const auto& c : m)
    if (!c.is_number_integer()) fail(where + "/modulus", "expected integers");
  return m;
}

json normalize_base(const json& d, const std::string& where) {
  if (!d.is_object() || !d.contains("type")) fail(where, "base descriptor needs a 'type'");
  std::string type = get_str(d["type"], where + "/type");
  json out{{"type", type}};
  if (!d.contains("p")) fail(where, "missing 'p'");
  out["p"] = get_p(d["p"], where + "/p");
  if (type == "laurent") {
    only_keys(d, where, {"type", "p", "variable", "modulus"});
    out["variable"] = d.contains("variable") ? get_str(d["variable"], where + "/variable") : "t";
    out["modulus"] = modulus_or_prime(d, where);
  } else if (type == "monomial") {
    only_keys(d, where, {"type", "p", "variables", "weights", "denominators", "modulus"});
    if (!d.contains("variables") || !d.contains("weights")) fail(where, "monomial base needs variables and weights");
    out["variables"] = get_strs(d["variables"], where + "/variables");
    json w = json::array();
    if (!d["weights"].is_array() || d["weights"].size() != out["variables"].size())
      fail(where + "/weights", "one weight per variable");
    for (std::size_t i = 0; i < d["weights"].size(); ++i)
      w.push_back(get_rat(d["weights"][i], where + "/weights/" + std::to_string(i)));
    out["weights"] = w;
    json dens = json::array();
    if (d.contains("denominators")) {
      if (!d["denominators"].is_array() || d["denominators"].size() != out["variables"].size())
        fail(where + "/denominators", "one denominator per variable");
      for (std::size_t i = 0; i < d["denominators"].size(); ++i)
        dens.push_back(get_int(d["denominators"][i], where + "/denominators/" + std::to_string(i), 1, 1 << 20));
    } else {
      for (std::size_t i = 0; i < out["variables"].size(); ++i) dens.push_back(1);
    }
    out["denominators"] = dens;
    out["modulus"] = modulus_or_prime(d, where);
  } else if (type == "defect") {
    only_keys(d, where, {"type", "p", "gaps", "modulus"});
    if (!d.contains("gaps") || !d["gaps"].is_array() || d["gaps"].empty()) fail(where + "/gaps", "expected a nonempty array");
    json g = json::array();
    for (std::size_t i = 0; i < d["gaps"].size(); ++i)
      g.push_back(get_int(d["gaps"][i], where + "/gaps/" + std::to_string(i), 1, 64));
    out["gaps"] = g;
    out["modulus"] = modulus_or_prime(d, where);
  } else {
    fail(where + "/type", "unknown base type '" + type + "'");
  }
  return out;
}

json normalize_tower(const json& t, const std::string& where) {
  only_keys(t, where, {"base", "steps"});
  if (!t.contains("base")) fail(where, "missing 'base'");
  json out{{"base", normalize_base(t["base"], where + "/base")}, {"steps", json::array()}};
  std::set<std::string> ids{"F"};
  if (t.contains("steps")) {
    if (!t["steps"].is_array()) fail(where + "/steps", "expected an array");
    for (std::size_t k = 0; k < t["steps"].size(); ++k) {
      const json& s = t["steps"][k];
      const std::string w = where + "/steps/" + std::to_string(k);
      only_keys(s, w, {"id", "kind", "poly", "generator"});
      json o;
      o["id"] = s.contains("id") ? get_str(s["id"], w + "/id") : "E" + std::to_string(k + 1);
      if (!ids.insert(o["id"].get<std::string>()).second) fail(w + "/id", "duplicate node id");
      if (!s.contains("kind")) fail(w, "missing 'kind'");
      o["kind"] = get_str(s["kind"], w + "/kind");
      try {
        parse_ext_kind(o["kind"]);
      } catch (const InvalidInput& e) {
        fail(w + "/kind", e.what());
      }
      if (!s.contains("poly")) fail(w, "missing 'poly'");
      o["poly"] = get_strs(s["poly"], w + "/poly", 3);
      o["generator"] = s.contains("generator") ? get_str(s["generator"], w + "/generator") : "z" + std::to_string(k + 1);
      out["steps"].push_back(o);
    }
  }
  return out;
}

json radical_step(const std::string& id, const std::string& radicand, long p, const std::string& gen) {
  json poly = json::array({"-(" + radicand + ")"});
  for (long i = 1; i < p; ++i) poly.push_back("0");
  poly.push_back("1");
  return {{"id", id}, {"kind", "radical"}, {"poly", poly}, {"generator", gen}};
}

json as_step(const std::string& id, const std::string& u, long p, const std::string& gen) {
  json poly = json::array({"-(" + u + ")", "-1"});
  for (long i = 2; i < p; ++i) poly.push_back("0");
  poly.push_back("1");
  return {{"id", id}, {"kind", "artin_schreier"}, {"poly", poly}, {"generator", gen}};
}

json laurent_base(long p) { return {{"type", "laurent"}, {"p", p}, {"variable", "t"}}; }

std::string inv_p(long p) { return "(1/" + std::to_string(p) + ")"; }

}  // namespace

json default_config(const std::string& scenario) {
  const long p = 2;
  json c{{"scenario", scenario}};
  if (scenario == "degree-p") {
    c["p"] = p;
  } else if (scenario == "defect-example") {
    c["p"] = p;
    c["gaps"] = {1, 2, 4, 7};
    c["precision"] = "1/512";
  } else if (scenario == "improve") {
    c["p"] = p;
    c["c"] = "1/100";
  } else if (scenario == "tower" || scenario == "pbasis" || scenario == "valuation-basis") {
    c["p"] = p;
  } else {
    fail("/scenario", "unknown scenario '" + scenario + "'");
  }
  return c;
}

json normalize_config(const json& raw_in, const Overrides& o) {
  json raw = raw_in;
  if (!raw.is_object()) fail("/", "config must be a JSON object");
  if (!o.scenario.empty()) {
    if (raw.contains("scenario") && raw["scenario"] != o.scenario)
      fail("/scenario", "config names '" + raw["scenario"].dump() + "' but --scenario is '" + o.scenario + "'");
    raw["scenario"] = o.scenario;
  }
  if (!raw.contains("scenario")) fail("/scenario", "missing");
  const std::string sc = get_str(raw["scenario"], "/scenario");
  if (!kScenarios.count(sc)) fail("/scenario", "unknown scenario '" + sc + "'");
  if (!o.precision.empty()) raw["precision"] = o.precision;
  if (o.seed) raw["seed"] = *o.seed;

  static const std::set<std::string> common{"scenario", "seed", "precision", "horizon", "budget", "samples"};
  std::set<std::string> allowed = common;
  if (sc == "degree-p") allowed.insert({"p", "x", "tower", "over"});
  if (sc == "defect-example") allowed.insert({"p", "gaps", "x"});
  if (sc == "improve") allowed.insert({"p", "x", "c", "tower", "over", "max_rounds"});
  if (sc == "tower") allowed.insert({"p", "tower", "generators"});
  if (sc == "pbasis") allowed.insert({"p", "field", "S"});
  if (sc == "valuation-basis") allowed.insert({"p", "tower", "node", "lifts", "reps", "reduction"});
  only_keys(raw, "", allowed);

  json c{{"scenario", sc}};
  c["seed"] = 1;
  if (raw.contains("seed")) {
    if (!raw["seed"].is_number_unsigned() && !(raw["seed"].is_number_integer() && raw["seed"].get<long>() >= 0))
      fail("/seed", "expected an unsigned 64-bit integer");
    c["seed"] = raw["seed"].get<std::uint64_t>();
  }
  c["precision"] = raw.contains("precision") ? get_rat(raw["precision"], "/precision")
                                             : (sc == "defect-example" ? "1/512" : "1/256");
  c["horizon"] = raw.contains("horizon") ? get_rat(raw["horizon"], "/horizon") : "8";
  if (Rat::parse(c["precision"].get<std::string>()).sign() <= 0) fail("/precision", "must be positive");
  if (Rat::parse(c["horizon"].get<std::string>()).sign() <= 0) fail("/horizon", "must be positive");
  json b{{"iterations", 32}, {"pool_degree", 4}};
  if (raw.contains("budget")) {
    only_keys(raw["budget"], "/budget", {"iterations", "pool_degree"});
    if (raw["budget"].contains("iterations")) b["iterations"] = get_int(raw["budget"]["iterations"], "/budget/iterations", 1, 4096);
    if (raw["budget"].contains("pool_degree"))
      b["pool_degree"] = get_int(raw["budget"]["pool_degree"], "/budget/pool_degree", 1, 16);
  }
  c["budget"] = b;
  c["samples"] = raw.contains("samples") ? get_int(raw["samples"], "/samples", 1, 1 << 20) : (sc == "valuation-basis" ? 1000 : 64);

  const long p = raw.contains("p") ? get_p(raw["p"], "/p") : 2;
  auto tower_or = [&](json dflt) {
    json t = raw.contains("tower") ? normalize_tower(raw["tower"], "/tower") : normalize_tower(dflt, "/tower");
    if (raw.contains("p") && t["base"]["p"] != p) fail("/p", "disagrees with the tower base");
    return t;
  };
  auto str_or = [&](const char* key, std::string dflt) {
    return raw.contains(key) ? get_str(raw[key], std::string("/") + key) : dflt;
  };

  if (sc == "degree-p" || sc == "improve") {
    c["tower"] = tower_or({{"base", laurent_base(p)}, {"steps", {radical_step("E", "t", p, "s")}}});
    if (c["tower"]["steps"].empty()) fail("/tower/steps", "needs at least one step");
    c["x"] = str_or("x", "1 + t^" + inv_p(p));
    const auto& st = c["tower"]["steps"];
    c["over"] = str_or("over", st.size() >= 2 ? st[st.size() - 2]["id"].get<std::string>() : "F");
    if (sc == "improve") {
      c["c"] = raw.contains("c") ? get_rat(raw["c"], "/c") : "1/100";
      c["max_rounds"] = raw.contains("max_rounds") ? get_int(raw["max_rounds"], "/max_rounds", 1, 64) : 4;
    }
  } else if (sc == "defect-example") {
    c["p"] = p;
    json g = json::array({1, 2, 4, 7});
    if (raw.contains("gaps")) g = normalize_base({{"type", "defect"}, {"p", p}, {"gaps", raw["gaps"]}}, "")["gaps"];
    c["gaps"] = g;
    c["x"] = str_or("x", "z");
  } else if (sc == "tower") {
    c["tower"] = tower_or({{"base", laurent_base(p)},
                           {"steps", {radical_step("E1", "t", p, "s"), radical_step("E2", "s", p, "r")}}});
    const auto n = c["tower"]["steps"].size();
    if (n == 0) fail("/tower/steps", "needs at least one step");
    json gens = json::array();
    if (raw.contains("generators")) {
      gens = get_strs(raw["generators"], "/generators");
    } else {
      for (const auto& s : c["tower"]["steps"]) gens.push_back("1 + " + s["generator"].get<std::string>());
    }
    if (gens.size() != n) fail("/generators", "one generator per step");
    c["generators"] = gens;
  } else if (sc == "pbasis") {
    json f = raw.contains("field") ? raw["field"]
                                   : json{{"type", "monomial"}, {"p", p}, {"variables", {"t", "u"}}, {"weights", {"1", "1"}}};
    c["field"] = normalize_base(f, "/field");
    if (c["field"]["type"] != "monomial") fail("/field/type", "p-basis scenarios need a monomial field");
    if (raw.contains("p") && c["field"]["p"] != p) fail("/p", "disagrees with the field");
    const long fp = c["field"]["p"].get<long>();
    json S = json::array();
    if (raw.contains("S")) {
      S = get_strs(raw["S"], "/S");
    } else {
      for (const auto& v : c["field"]["variables"]) S.push_back("1 + " + v.get<std::string>() + "^" + inv_p(fp));
    }
    c["S"] = S;
  } else if (sc == "valuation-basis") {
    c["tower"] = tower_or({{"base", laurent_base(p)}, {"steps", {radical_step("R", "t", p, "s"), as_step("M", "1", p, "w")}}});
    const auto& st = c["tower"]["steps"];
    if (st.empty()) fail("/tower/steps", "needs at least one step");
    c["node"] = str_or("node", st.back()["id"].get<std::string>());
    auto powers = [&](const std::string& g) {
      json a = json::array({"1"});
      for (long i = 1; i < p; ++i) a.push_back(i == 1 ? g : g + "^" + std::to_string(i));
      return a;
    };
    c["lifts"] = raw.contains("lifts") ? get_strs(raw["lifts"], "/lifts") : powers("w");
    c["reps"] = raw.contains("reps") ? get_strs(raw["reps"], "/reps") : powers("s");
    if (raw.contains("reduction")) {
      const json& r = raw["reduction"];
      only_keys(r, "/reduction", {"node", "base", "basis", "v_dim", "w"});
      if (!r.contains("basis") || !r.contains("w")) fail("/reduction", "needs 'basis' and 'w'");
      c["reduction"] = {{"node", r.contains("node") ? get_str(r["node"], "/reduction/node") : c["node"].get<std::string>()},
                        {"base", r.contains("base") ? get_str(r["base"], "/reduction/base") : "F"},
                        {"basis", get_strs(r["basis"], "/reduction/basis")},
                        {"v_dim", r.contains("v_dim") ? get_int(r["v_dim"], "/reduction/v_dim", 0, 1 << 10) : 0},
                        {"w", get_str(r["w"], "/reduction/w")}};
    }
  }
  return c;
}

std::string config_hash(const json& cfg) {
  const std::string s = cfg.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(s.data(), s.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex = "sha256:";
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

namespace {

// ------------------------------------------------------------- building

const FqField* fq_of(const json& d) {
  std::vector<int> m = d["modulus"].get<std::vector<int>>();
  try {
    return FqField::get(d["p"].get<int>(), m);
  } catch (const std::exception& e) {
    throw InvalidInput(std::string("modulus: ") + e.what());
  }
}

PrecisionConfig precision_of(const json& c) {
  PrecisionConfig pc;
  pc.resolution = Rat::parse(c["precision"].get<std::string>());
  pc.horizon = Rat::parse(c["horizon"].get<std::string>());
  return pc;
}

FieldPtr build_base(const json& d, const PrecisionConfig& pc) {
  const std::string type = d["type"];
  const FqField* fq = fq_of(d);
  if (type == "laurent") return SeriesField::laurent("F", fq, d["variable"].get<std::string>(), pc);
  if (type == "monomial") {
    std::vector<Rat> w;
    for (const auto& x : d["weights"]) w.push_back(Rat::parse(x.get<std::string>()));
    return MonomialField::base("F", fq, d["variables"].get<std::vector<std::string>>(), w,
                               d["denominators"].get<std::vector<long>>(), pc);
  }
  return DefectBaseField::make("F", fq, d["gaps"].get<std::vector<long>>(), pc);
}

struct Ctx {
  const json& cfg;
  Registry reg;
  json checks = json::array();

  FieldPtr node(const std::string& id) const {
    auto it = reg.find(id);
    if (it == reg.end()) throw InvalidInput("unknown node '" + id + "'");
    return it->second;
  }
  void add(const FieldPtr& f) { reg[f->id()] = f; }
};

std::vector<FieldPtr> build_tower(Ctx& ctx, const json& t) {
  std::vector<FieldPtr> nodes{build_base(t["base"], precision_of(ctx.cfg))};
  ctx.add(nodes.back());
  for (const auto& s : t["steps"]) {
    const FieldPtr& par = nodes.back();
    std::vector<FieldElement> poly;
    for (const auto& c : s["poly"]) poly.push_back(parse_element(c.get<std::string>(), par));
    nodes.push_back(make_extension(s["id"], par, poly, parse_ext_kind(s["kind"]), s["generator"]));
    ctx.add(nodes.back());
  }
  return nodes;
}

// -------------------------------------------------------- serialization

json opt_rat(const std::optional<Rat>& r) { return r ? json(r->str()) : json(nullptr); }

json strs(const std::vector<FieldElement>& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(e.str());
  return a;
}

json basis_json(const Basis& b) { return {{"node", b.node->id()}, {"base", b.base->id()}, {"elements", strs(b.elems)}}; }

json cert_json(Ctx& ctx, const NdistCertificate& nd) {
  json chain = json::array();
  for (const auto& s : nd.chain) chain.push_back({{"y", s.y.str()}, {"value", s.value.str()}});
  json j{{"x", nd.x.str()},
         {"node", nd.x.field().id()},
         {"over", nd.S->id()},
         {"infinite", nd.infinite},
         {"lower", nd.infinite ? json("inf") : json(nd.lower.str())},
         {"y", nd.y.str()},
         {"upper", nd.infinite ? json("inf") : opt_rat(nd.upper)},
         {"reason", nd.reason},
         {"exact", nd.exact()},
         {"chain", chain}};
  if (!nd.infinite)
    ctx.checks.push_back({{"kind", "ndist"},
                          {"node", nd.x.field().id()},
                          {"over", nd.S->id()},
                          {"x", nd.x.str()},
                          {"y", nd.y.str()},
                          {"value", nd.lower.str()}});
  return j;
}

json report_json(Ctx& ctx, const DiscrepancyReport& r) {
  json j{{"basis", basis_json(r.basis)},
         {"lower", r.lower.str()},
         {"witness", r.witness ? json(r.witness->str()) : json(nullptr)},
         {"witness_value", opt_rat(r.witness_value)},
         {"upper", opt_rat(r.upper)},
         {"upper_reason", r.upper_reason},
         {"exact", opt_rat(r.exact)},
         {"rule", r.rule},
         {"skipped", r.skipped},
         {"notes", r.notes}};
  if (r.witness && r.witness_value) {
    json c = basis_json(r.basis);
    c["kind"] = "disc_at";
    c["witness"] = r.witness->str();
    c["value"] = r.witness_value->str();
    ctx.checks.push_back(c);
  }
  return j;
}

json defect_json(const DefectReport& d) {
  return {{"degree", d.degree},
          {"e_lb", d.e_lb},
          {"f_lb", d.f_lb},
          {"defect_ub", d.defect_ub},
          {"defectless", d.defectless},
          {"note", d.classification_note}};
}

json notes_of(const std::vector<FieldPtr>& nodes) {
  json n = json::object();
  for (const auto& f : nodes)
    if (!f->notes().empty()) n[f->id()] = f->notes();
  return n;
}

NdistBudget budget_of(const json& c) {
  return NdistBudget{c["budget"]["iterations"].get<int>(), c["budget"]["pool_degree"].get<int>()};
}

SampleConfig samples_of(const json& c) {
  SampleConfig s;
  s.samples = c["samples"].get<int>();
  s.seed = c["seed"].get<std::uint64_t>();
  return s;
}

// ------------------------------------------------------------ scenarios

json run_degree_p(Ctx& ctx) {
  auto nodes = build_tower(ctx, ctx.cfg["tower"]);
  FieldElement x = parse_element(ctx.cfg["x"], nodes.back());
  FieldPtr over = ctx.node(ctx.cfg["over"]);
  NdistCertificate nd = ndist_bounds(x, over, budget_of(ctx.cfg));
  DiscrepancyReport r = degree_p_disc(x, nd);
  return {{"x", x.str()}, {"ndist", cert_json(ctx, nd)}, {"discrepancy", report_json(ctx, r)}, {"notes", notes_of(nodes)}};
}

json run_improve(Ctx& ctx) {
  auto nodes = build_tower(ctx, ctx.cfg["tower"]);
  FieldElement x = parse_element(ctx.cfg["x"], nodes.back());
  FieldPtr over = ctx.node(ctx.cfg["over"]);
  Improvement im = improve_generator(x, over, Rat::parse(ctx.cfg["c"].get<std::string>()), budget_of(ctx.cfg),
                                     ctx.cfg["max_rounds"].get<int>());
  json rv = json::array(), nl = json::array();
  for (const auto& v : im.residual_vals) rv.push_back(v.str());
  for (const auto& v : im.ndist_lowers) nl.push_back(v.str());
  return {{"x", x.str()},
          {"improved", im.x.str()},
          {"rounds", im.rounds},
          {"certified", im.certified},
          {"generator_vals", rv},
          {"ndist_lowers", nl},
          {"discrepancy", report_json(ctx, im.report)},
          {"notes", notes_of(nodes)}};
}

json run_tower(Ctx& ctx) {
  auto nodes = build_tower(ctx, ctx.cfg["tower"]);
  json steps = json::array();
  std::vector<DiscrepancyReport> reps;
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    FieldElement x = parse_element(ctx.cfg["generators"][k - 1], nodes[k]);
    NdistCertificate nd = ndist_bounds(x, nodes[k - 1], budget_of(ctx.cfg));
    reps.push_back(degree_p_disc(x, nd));
    steps.push_back({{"node", nodes[k]->id()}, {"x", x.str()}, {"ndist", cert_json(ctx, nd)},
                     {"discrepancy", report_json(ctx, reps.back())}});
  }
  DiscrepancyReport tot = tower_disc(reps);
  json out{{"steps", steps}, {"total", report_json(ctx, tot)}, {"notes", notes_of(nodes)}};
  if (tot.witness) out["witness_coordinates"] = strs(decompose(*tot.witness, tot.basis));
  return out;
}

json run_defect(Ctx& ctx) {
  const long p = ctx.cfg["p"].get<long>();
  json t{{"base", {{"type", "defect"}, {"p", p}, {"gaps", ctx.cfg["gaps"]}, {"modulus", {0, 1}}}},
         {"steps", {as_step("E", "x^-1", p, "z")}}};
  auto nodes = build_tower(ctx, t);
  const FieldPtr& F = nodes[0];
  const FieldPtr& E = nodes[1];
  auto* D = static_cast<const DefectBaseField*>(F.get());
  HahnSeries root = embed_root(*E);
  Val residual = embed_residual(*E).valuation();
  FieldElement x = parse_element(ctx.cfg["x"], E);
  NdistCertificate nd = ndist_bounds(x, F, budget_of(ctx.cfg));
  DiscrepancyReport r = degree_p_disc(x, nd);
  DefectReport dr = step_defect_report(*E, samples_of(ctx.cfg));
  const Rat window = -Rat(p) * F->precision().resolution;
  json terms = json::array();
  for (const auto& term : D->defect_series().series.terms()) terms.push_back(term.exp.str());
  json rt = json::array();
  for (const auto& term : root.terms()) rt.push_back(term.exp.str());
  return {{"defect_series_exponents", terms},
          {"root_exponents", rt},
          {"residual", residual.str()},
          {"residual_window", window.str()},
          {"residual_at_window", residual.is_at_least() && residual.bound() == window},
          {"x", x.str()},
          {"ndist", cert_json(ctx, nd)},
          {"discrepancy", report_json(ctx, r)},
          {"defect", defect_json(dr)},
          {"notes", notes_of(nodes)}};
}

json run_pbasis(Ctx& ctx) {
  FieldPtr F = build_base(ctx.cfg["field"], precision_of(ctx.cfg));
  ctx.add(F);
  FieldPtr A = pbasis_ambient(F);
  ctx.add(A);
  std::vector<FieldElement> S;
  for (const auto& s : ctx.cfg["S"]) S.push_back(parse_element(s.get<std::string>(), A));
  PBasis P = associated_basis(F, S);
  for (const Field* f = P.node.get(); f; f = f->parent().get()) ctx.add(f->self());
  Filtration flt = filtration(P);
  SubgroupCheck sg = subgroup_check(P, flt);
  PBasisBound B = pbasis_lower_bound(P, flt);
  Comparison C = ndist_comparison_check(P, B);
  for (const auto& f : C.chain) ctx.add(f);

  json nds = json::array();
  for (const auto& nd : P.nd) nds.push_back(cert_json(ctx, nd));
  auto rats = [](const std::vector<Rat>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back(r.str());
    return a;
  };
  json vals = json::array();
  for (const auto& v : flt.values) vals.push_back(v.str());
  json table = json::array();
  for (std::size_t i = 0; i < flt.breakpoints.size(); ++i)
    table.push_back({{"r", flt.breakpoints[i].str()}, {"card", flt.card[i]}});
  json xs = json::array();
  for (std::size_t i = 0; i < B.x_index.size(); ++i)
    xs.push_back({{"i", i + 1}, {"index", B.x_index[i]}, {"x", P.T.elems[B.x_index[i]].str()}, {"y", B.y[i].str()}});
  json cmp = json::array();
  for (std::size_t i = 0; i < C.rows.size(); ++i)
    cmp.push_back({{"i", i + 1},
                   {"node", C.chain[i + 1]->id()},
                   {"over_prev", cert_json(ctx, C.rows[i].over_prev)},
                   {"over_base", cert_json(ctx, C.rows[i].over_base)},
                   {"verdict", verdict_name(C.rows[i].verdict)},
                   {"step", report_json(ctx, C.rows[i].step)}});
  return {{"S", strs(P.S)},
          {"T", strs(P.T.elems)},
          {"ndist", nds},
          {"filtration",
           {{"values", vals},
            {"table", table},
            {"bound_only", flt.bound_only},
            {"p_power_cards", flt.p_power_cards},
            {"ndist", rats(flt.ndist)},
            {"ndist_excluding_one", rats(flt.ndist_excluding_one)}}},
          {"subgroup", {{"pairs", sg.pairs}, {"failures", sg.failures}}},
          {"bound",
           {{"x", xs},
            {"closed_form", B.closed_form.str()},
            {"direct", B.direct.str()},
            {"filtration_sum", B.filtration_sum.str()},
            {"discrepancy", report_json(ctx, B.report)}}},
          {"comparison", cmp},
          {"all_equal", C.all_equal},
          {"tower", report_json(ctx, C.tower)}};
}

json run_valuation_basis(Ctx& ctx) {
  auto nodes = build_tower(ctx, ctx.cfg["tower"]);
  FieldPtr node = ctx.node(ctx.cfg["node"]);
  FieldPtr F = nodes[0];
  std::vector<FieldElement> lifts, reps;
  for (const auto& s : ctx.cfg["lifts"]) lifts.push_back(parse_element(s.get<std::string>(), node));
  for (const auto& s : ctx.cfg["reps"]) reps.push_back(parse_element(s.get<std::string>(), node));
  DefectlessBasis db = valuation_basis_defectless(node, F, lifts, reps, samples_of(ctx.cfg));
  json out{{"basis", basis_json(db.basis)},
           {"defect", defect_json(db.defect)},
           {"samples_checked", db.samples_checked},
           {"notes", notes_of(nodes)}};
  if (ctx.cfg.contains("reduction")) {
    const json& rc = ctx.cfg["reduction"];
    FieldPtr rn = ctx.node(rc["node"]);
    std::vector<FieldElement> b;
    for (const auto& s : rc["basis"]) b.push_back(parse_element(s.get<std::string>(), rn));
    FieldPtr rb = ctx.node(rc["base"]);
    Basis full = make_basis(rb, b);
    Reduction red = reduce_valuation_basis(full, rc["v_dim"].get<std::size_t>(), parse_element(rc["w"], rn));
    SampleCheck sc = check_reduction(red, rb, samples_of(ctx.cfg));
    json tv = json::array();
    for (const auto& v : red.term_vals) tv.push_back(v.str());
    out["reduction"] = {{"w_coords", strs(red.w_coords)},
                        {"term_vals", tv},
                        {"dropped", red.dropped},
                        {"kept", strs(red.kept)},
                        {"samples", sc.samples},
                        {"failures", sc.failures},
                        {"skipped", sc.skipped}};
  }
  return out;
}

std::optional<std::string> first_diff(const json& a, const json& b, const std::string& path) {
  if (a.is_number() && b.is_number()) return a == b ? std::nullopt : std::optional<std::string>(path);
  if (a.type() != b.type()) return path.empty() ? "/" : path;
  if (a.is_object()) {
    std::set<std::string> keys;
    for (const auto& [k, v] : a.items()) keys.insert(k);
    for (const auto& [k, v] : b.items()) keys.insert(k);
    for (const auto& k : keys) {
      if (!a.contains(k) || !b.contains(k)) return path + "/" + k;
      if (auto d = first_diff(a[k], b[k], path + "/" + k)) return d;
    }
    return std::nullopt;
  }
  if (a.is_array()) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
      if (auto d = first_diff(a[i], b[i], path + "/" + std::to_string(i))) return d;
    if (a.size() != b.size()) return path + "/" + std::to_string(std::min(a.size(), b.size()));
    return std::nullopt;
  }
  if (a != b) return path.empty() ? "/" : path;
  return std::nullopt;
}

}  // namespace

json run_scenario(const json& cfg, Registry* nodes) {
  Ctx ctx{cfg, {}, json::array()};
  const std::string sc = cfg["scenario"];
  json results;
  if (sc == "degree-p") results = run_degree_p(ctx);
  else if (sc == "defect-example") results = run_defect(ctx);
  else if (sc == "improve") results = run_improve(ctx);
  else if (sc == "tower") results = run_tower(ctx);
  else if (sc == "pbasis") results = run_pbasis(ctx);
  else results = run_valuation_basis(ctx);
  if (nodes) *nodes = ctx.reg;
  return {{"tool", "valdisc"},
          {"version", kVersion},
          {"config", cfg},
          {"config_hash", config_hash(cfg)},
          {"results", results},
          {"checks", ctx.checks}};
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

VerifyResult verify_report(const json& report) {
  VerifyResult vr;
  for (const char* k : {"config", "config_hash", "results", "checks"}) {
    if (!report.is_object() || !report.contains(k)) {
      vr.field = std::string("/") + k;
      vr.message = "missing";
      return vr;
    }
  }
  json cfg;
  try {
    cfg = normalize_config(report["config"]);
  } catch (const SchemaError& e) {
    vr.field = "/config";
    vr.message = e.what();
    return vr;
  }
  if (cfg != report["config"]) {
    vr.field = "/config" + first_diff(report["config"], cfg, "").value_or("");
    vr.message = "config is not in normalized form";
    return vr;
  }
  if (config_hash(cfg) != report["config_hash"]) {
    vr.field = "/config_hash";
    vr.message = "does not match the embedded config";
    return vr;
  }
  Registry reg;
  json fresh;
  try {
    fresh = run_scenario(cfg, &reg);
  } catch (const std::exception& e) {
    vr.field = "/config";
    vr.message = std::string("re-run failed: ") + e.what();
    return vr;
  }
  if (auto d = first_diff(report, fresh, "")) {
    vr.field = *d;
    vr.message = "differs from the re-run";
    return vr;
  }
  const json& checks = report["checks"];
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const json& c = checks[i];
    const std::string where = "/checks/" + std::to_string(i) + "/value";
    try {
      Rat want = Rat::parse(c["value"].get<std::string>());
      Rat got;
      if (c["kind"] == "ndist") {
        FieldPtr n = reg.at(c["node"]);
        FieldPtr S = reg.at(c["over"]);
        got = ndist_value(parse_element(c["x"], n), lift(parse_element(c["y"], S), *n));
      } else {
        FieldPtr n = reg.at(c["node"]);
        std::vector<FieldElement> el;
        for (const auto& s : c["elements"]) el.push_back(parse_element(s.get<std::string>(), n));
        got = disc_at(make_basis(reg.at(c["base"]), el), parse_element(c["witness"], n));
      }
      if (got != want) {
        vr.field = where;
        vr.message = "recomputed " + got.str() + ", report says " + want.str();
        return vr;
      }
    } catch (const std::exception& e) {
      vr.field = where;
      vr.message = std::string("check failed: ") + e.what();
      return vr;
    }
  }
  vr.ok = true;
  return vr;
}

}  // namespace valdisc::cli

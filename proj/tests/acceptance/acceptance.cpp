// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Every criterion also enforces its wall-clock bound.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sybil/attack.hpp"
#include "sybil/axioms.hpp"
#include "sybil/cli.hpp"
#include "sybil/economy.hpp"
#include "sybil/measures.hpp"
#include "sybil/report.hpp"

using namespace sybil;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

struct CliRun {
  int code = 0;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sybil-audit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

const std::vector<std::string> kCatalog = {"gini", "ge:-1", "ge:0",         "ge:0.5",  "ge:1",
                                           "ge:2", "cv",    "hhi",          "atkinson:0.5",
                                           "const:0", "const:3", "sum", "diag:first", "diag:max"};

Outcome exact_gini_arithmetic() {
  Outcome o;
  const double a = gini({1.0, 0.0});
  const double b = gini({1.0, 1.0});
  o.require(near(a, 0.5, 1e-12), "gini(1,0) = " + fmt(a));
  o.require(near(b, 0.0, 1e-12), "gini(1,1) = " + fmt(b));
  return o;
}

Outcome ge_c1_value() {
  Outcome o;
  const double e = std::numbers::e;
  const double v = ge(GEParams{1.0}, {e / 2.0, 1.5 * e});
  o.require(near(v, 0.75 * std::log(3.0) - std::log(2.0), 1e-9), "ge(1, (e/2, 3e/2)) = " + fmt(v));
  o.require(near(v, 0.13, 0.005), "value does not round to 0.13");
  return o;
}

Outcome ge_closed_form() {
  Outcome o;
  for (double c : {2.0, -1.0, 0.5}) {
    const double v = ge(GEParams{c}, {1.0, 3.0});
    const double closed = ((1.0 + std::pow(3.0, c)) / std::pow(2.0, c + 1.0) - 1.0) / (c * (c - 1.0));
    o.require(near(v, closed, 1e-9), "c = " + fmt(c) + ": " + fmt(v) + " vs " + fmt(closed));
  }
  return o;
}

Outcome ge_c0_differs() {
  Outcome o;
  const double a = ge(GEParams{0.0}, {1.0, 3.0});
  const double b = ge(GEParams{0.0}, {1.0, 5.0});
  o.require(a != b, "ge(0,(1,3)) == ge(0,(1,5))");
  o.require(near(a, 0.143841, 1e-6), "ge(0,(1,3)) = " + fmt(a));
  o.require(near(b, 0.293893, 1e-6), "ge(0,(1,5)) = " + fmt(b));
  return o;
}

const std::vector<std::string> kAuditGini = {"audit", "--measure", "gini", "--seed", "42", "--trials",
                                             "100", "--deterministic"};

Outcome gini_sybil_falsified() {
  Outcome o;
  const auto r = cli(kAuditGini);
  o.require(r.code == 0, "audit exit status " + std::to_string(r.code));
  if (!o.pass) return o;
  const auto doc = Json::parse(r.out);
  const auto& v = doc["results"]["axioms"]["sybil_proofness"];
  o.require(v["status"] == "falsified", "sybil_proofness is " + v["status"].dump());
  if (!o.pass) return o;
  const auto& w = v["witness"];
  o.require(w["gap"].get<double>() >= 0.16, "gap " + w["gap"].dump());
  o.require(w["trial"] == 1, "witness at trial " + w["trial"].dump());
  o.require(w["first"] == Json::array({5.0, 10.0}), "hidden " + w["first"].dump());
  o.require(w["second"] == Json::array({5.0, 5.0, 5.0}), "observable " + w["second"].dump());
  return o;
}

Outcome sybil_iff_aggregation() {
  Outcome o;
  SearchConfig cfg;
  cfg.seed = Seed{42};
  for (const auto& id : kCatalog) {
    const auto m = parse_measure(id);
    const auto s = check_sybil_proofness(m, cfg);
    const auto a = check_aggregation_invariance(m, cfg);
    o.require(s.status == a.status, id + ": sybil " + std::string(status_name(s.status)) +
                                        ", aggregation " + std::string(status_name(a.status)));
  }
  return o;
}

const std::vector<std::string> kAuditSum = {"audit", "--measure", "sum", "--seed", "42", "--deterministic"};
const std::vector<std::string> kAuditConst = {"audit", "--measure", "const:0", "--seed", "42",
                                              "--deterministic"};

Outcome characterization() {
  Outcome o;
  const auto s = cli(kAuditSum);
  o.require(s.code == 0, "sum audit exit status " + std::to_string(s.code));
  const auto sd = Json::parse(s.out)["results"];
  o.require(sd["mismatches"].empty(), "sum mismatches " + sd["mismatches"].dump());
  o.require(sd["axioms"]["sybil_proofness"]["status"] == "unfalsified", "sum sybil falsified");
  o.require(sd["axioms"]["scale_independence"]["status"] == "falsified", "sum scale unfalsified");
  o.require(sd["axioms"]["population_insensitivity"]["status"] == "falsified", "sum population unfalsified");

  const auto c = cli(kAuditConst);
  o.require(c.code == 0, "const:0 audit exit status " + std::to_string(c.code));
  const auto cd = Json::parse(c.out)["results"];
  o.require(cd["mismatches"].empty(), "const:0 mismatches " + cd["mismatches"].dump());
  for (Axiom ax : all_axioms()) {
    if (ax == Axiom::TransferStrict || ax == Axiom::EgalitarianZeroStrict || ax == Axiom::SumDependenceStrict) {
      continue;
    }
    const std::string key(axiom_key(ax));
    o.require(cd["axioms"][key]["status"] == "unfalsified", "const:0 " + key + " falsified");
  }
  return o;
}

Outcome implications() {
  Outcome o;
  SearchConfig cfg;
  cfg.seed = Seed{42};
  std::size_t proof = 0;
  for (const auto& id : kCatalog) {
    const auto m = parse_measure(id);
    if (check_sybil_proofness(m, cfg).status != Status::Unfalsified) continue;
    ++proof;
    o.require(check_symmetry(m, cfg).status == Status::Unfalsified, id + ": symmetry falsified");
    o.require(check_transfer(m, Mode::Weak, cfg).status == Status::Unfalsified, id + ": weak transfer falsified");
  }
  o.require(proof > 0, "no Sybil-unfalsified measure in the catalog");
  return o;
}

const std::vector<std::string> kAttackGini = {"attack",    "--measure",  "gini", "--hidden", "5,10",
                                              "--family",  "pure-sybil", "--identities", "3",
                                              "--budget",  "10000",      "--seed", "7", "--deterministic"};

Outcome attack_bound() {
  Outcome o;
  const auto r = cli(kAttackGini);
  o.require(r.code == 0, "attack exit status " + std::to_string(r.code));
  if (!o.pass) return o;
  const auto result = attack_from_json(Json::parse(r.out)["results"]);
  o.require(result.distortion >= 0.166666, "distortion " + fmt(result.distortion));
  o.require(check_conservation(result.hidden, result.report, result.observable), "witness does not conserve");
  o.require(is_pure_sybil(result.report), "witness is not a pure Sybil report");
  const auto replay = replay_attack(gini_measure(), result, Tolerance{});
  o.require(replay.distortion_matches, "stored distortion does not replay");
  return o;
}

const std::vector<std::string> kWitnessAll = {"witness", "--case", "all", "--deterministic"};

Outcome witness_suite() {
  Outcome o;
  const auto r = cli(kWitnessAll);
  o.require(r.code == 0, "witness exit status " + std::to_string(r.code));
  const auto res = Json::parse(r.out)["results"];
  o.require(res["passed"] == 8 && res["total"] == 8, "passed " + res["passed"].dump() + "/" + res["total"].dump());

  bool chain = false;
  bool condensation = false;
  for (const auto& c : res["cases"]) {
    if (c["case"] == "transfer-chain") {
      double g1 = -1.0, g2 = -1.0, g3 = -1.0;
      for (const auto& a : c["assertions"]) {
        if (a["expression"] == "gini(0.9,0.1)") g1 = a["actual"].get<double>();
        if (a["expression"] == "gini(0.6,0.4)") g2 = a["actual"].get<double>();
        if (a["expression"] == "gini(0.5,0.5)") g3 = a["actual"].get<double>();
      }
      chain = c["pass"] == true && near(g1, 0.4, 1e-12) && near(g2, 0.1, 1e-12) && near(g3, 0.0, 1e-12) && g1 > g2 && g2 > g3;
    }
    if (c["case"] == "aggregation-chain") condensation = c["pass"] == true;
  }
  o.require(chain, "transfer chain does not show 0.4 > 0.1 > 0");
  o.require(condensation, "full-condensation case failed");
  return o;
}

Outcome property_invariants() {
  Outcome o;
  const Tolerance tol;
  const std::vector<double> exponents = {-1.0, 0.0, 0.5, 1.0, 2.0};
  std::size_t failures = 0;
  std::string first;
  auto note = [&](bool ok, const std::string& what, int t) {
    if (ok) return;
    if (failures++ == 0) first = what + " at trial " + std::to_string(t);
  };

  for (int t = 1; t <= 1000; ++t) {
    Rng rng(Seed{42}.derive(static_cast<std::uint64_t>(t)));
    const auto x = sampling::positive(rng, 2, 8);
    const double alpha = rng.log_uniform(1e-3, 1e3);
    const auto ax = scale(x, alpha);
    const auto xx = duplicate(x);
    const auto px = permute(x, rng.permutation(x.size()));
    note(tol.equal(gini(x), gini(ax)), "gini scale", t);
    note(tol.equal(gini(x), gini(xx)), "gini population", t);
    note(gini(x) == gini(px), "gini permutation", t);
    for (double c : exponents) {
      const GEParams p{c};
      note(tol.equal(ge(p, x), ge(p, ax)), "ge scale", t);
      note(tol.equal(ge(p, x), ge(p, xx)), "ge population", t);
      note(ge(p, x) == ge(p, px), "ge permutation", t);
    }
    for (double limit : {0.0, 1.0}) {
      const double at = ge(GEParams{limit}, x);
      for (double offset : {-1e-6, 1e-6}) {
        note(std::abs(ge(GEParams{limit + offset}, x) - at) <= 1e-4, "ge continuity", t);
      }
    }

    const auto hidden = sampling::mixed(rng, 1, 6);
    std::vector<std::size_t> splits(hidden.size());
    for (auto& s : splits) s = rng.between(1, 4);
    const auto r = random_pure_sybil(hidden, splits, Seed{rng.next()});
    note(check_conservation(hidden, r, apply_report(hidden, r)), "report conservation", t);
  }

  // The falsifiers themselves must agree with the direct checks.
  SearchConfig cfg;
  cfg.seed = Seed{42};
  std::vector<Measure> measures = {gini_measure()};
  for (double c : exponents) measures.push_back(ge_measure(GEParams{c}));
  for (const auto& m : measures) {
    note(check_scale_independence(m, cfg).status == Status::Unfalsified, m.id() + " scale verdict", 0);
    note(check_population_insensitivity(m, cfg).status == Status::Unfalsified, m.id() + " population verdict", 0);
    note(check_symmetry(m, cfg).status == Status::Unfalsified, m.id() + " symmetry verdict", 0);
  }
  o.require(failures == 0, std::to_string(failures) + " failures, first: " + first);
  return o;
}

Outcome determinism() {
  Outcome o;
  const std::vector<std::vector<std::string>> commands = {kAuditGini, kAuditSum, kAuditConst, kAttackGini,
                                                          kWitnessAll};
  for (const auto& cmd : commands) {
    const auto a = cli(cmd);
    const auto b = cli(cmd);
    o.require(!a.out.empty() && a.out == b.out, cmd[0] + " " + cmd[2] + " output differs between runs");
  }
  // The in-process criteria 6 and 8 are deterministic too.
  SearchConfig cfg;
  cfg.seed = Seed{42};
  for (const auto& id : kCatalog) {
    const auto m = parse_measure(id);
    const auto a = to_json(check_sybil_proofness(m, cfg)).dump();
    const auto b = to_json(check_sybil_proofness(m, cfg)).dump();
    o.require(a == b, id + " sybil verdict differs between runs");
  }
  return o;
}

struct Criterion {
  int number;
  std::string name;
  double bound_ms;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact gini arithmetic", 1.0, exact_gini_arithmetic},
      {2, "ge c=1 value", 1.0, ge_c1_value},
      {3, "ge closed form for c in {2,-1,0.5}", 1.0, ge_closed_form},
      {4, "ge c=0 values differ", 1.0, ge_c0_differs},
      {5, "gini Sybil falsification", 1000.0, gini_sybil_falsified},
      {6, "Sybil-proofness iff aggregation invariance", 10000.0, sybil_iff_aggregation},
      {7, "sum and const:0 characterization", 5000.0, characterization},
      {8, "Sybil-proofness implies symmetry and weak transfer", 5000.0, implications},
      {9, "attack lower bound", 1000.0, attack_bound},
      {10, "witness suite", 1000.0, witness_suite},
      {11, "property invariants", 20000.0, property_invariants},
      {12, "determinism", 10000.0, determinism},
  };

  int failed = 0;
  double total_ms = 0.0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    total_ms += ms;
    if (o.pass && ms > c.bound_ms) {
      o.pass = false;
      o.detail = "runtime " + fmt(ms) + " ms exceeds " + fmt(c.bound_ms) + " ms";
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %2d: %s (%.3f ms)%s%s\n", o.pass ? "PASS" : "FAIL", c.number, c.name.c_str(), ms,
                o.pass ? "" : " - ", o.detail.c_str());
  }
  const bool within_total = total_ms <= 60000.0;
  std::printf("%s total runtime %.1f ms (bound 60000 ms)\n", within_total ? "PASS" : "FAIL", total_ms);
  return failed == 0 && within_total ? 0 : 1;
}

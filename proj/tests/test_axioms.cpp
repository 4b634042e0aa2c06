#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sybil/axioms.hpp"
#include "sybil/error.hpp"

using namespace sybil;

namespace {

SearchConfig config(std::size_t trials = 1000, std::uint64_t seed = 42) {
  SearchConfig cfg;
  cfg.trials = trials;
  cfg.seed = Seed{seed};
  return cfg;
}

void check_replays(const Measure& m, const Verdict& v) {
  REQUIRE(v.status == Status::Falsified);
  REQUIRE(v.witness.has_value());
  const auto r = replay_counterexample(m, *v.witness, v.tolerance);
  CHECK_MESSAGE(r.reproduced, r.detail);
}

void check_unfalsified(const Verdict& v) {
  CHECK(v.status == Status::Unfalsified);
  CHECK_FALSE(v.witness.has_value());
  CHECK(v.trials > 0);
}

}  // namespace

TEST_SUITE("axioms") {
  TEST_CASE("scale independence") {
    check_unfalsified(check_scale_independence(gini_measure(), config()));
    check_unfalsified(check_scale_independence(constant_measure(0.0), config()));

    const auto v = check_scale_independence(sum_measure(), config());
    check_replays(sum_measure(), v);
    CHECK(v.witness->trial == 1);
    CHECK(v.witness->first == std::vector<double>{1.0, 1.0});
    CHECK(*v.witness->alpha == 2.0);
    CHECK(v.witness->first_value == 2.0);
    CHECK(v.witness->second_value == 4.0);
  }

  TEST_CASE("population insensitivity") {
    check_unfalsified(check_population_insensitivity(gini_measure(), config()));
    check_unfalsified(check_population_insensitivity(constant_measure(3.0), config()));
    const auto v = check_population_insensitivity(sum_measure(), config());
    check_replays(sum_measure(), v);
    CHECK(v.witness->first == std::vector<double>{1.0});
    CHECK(v.witness->second == std::vector<double>{1.0, 1.0});
  }

  TEST_CASE("symmetry") {
    check_unfalsified(check_symmetry(gini_measure(), config()));
    const auto first = diagnostic(Diagnostic::FirstElement);
    const auto v = check_symmetry(first, config());
    check_replays(first, v);
    CHECK(v.witness->first == std::vector<double>{1.0, 2.0});
    CHECK(v.witness->second == std::vector<double>{2.0, 1.0});
  }

  TEST_CASE("transfer principle") {
    check_unfalsified(check_transfer(gini_measure(), Mode::Weak, config()));
    check_unfalsified(check_transfer(sum_measure(), Mode::Weak, config()));
    check_unfalsified(check_transfer(gini_measure(), Mode::Strict, config()));

    const auto strict_sum = check_transfer(sum_measure(), Mode::Strict, config());
    check_replays(sum_measure(), strict_sum);
    CHECK(strict_sum.witness->trial == 1);

    const auto first = diagnostic(Diagnostic::FirstElement);
    const auto weak_first = check_transfer(first, Mode::Weak, config());
    check_replays(first, weak_first);
    CHECK(weak_first.witness->label == "toward-first");
  }

  TEST_CASE("egalitarian zero") {
    check_unfalsified(check_egalitarian_zero(gini_measure(), Mode::Weak, config()));

    const auto strict0 = check_egalitarian_zero(constant_measure(0.0), Mode::Strict, config());
    check_replays(constant_measure(0.0), strict0);
    CHECK(strict0.witness->relation == Relation::NonEgalitarianZero);
    CHECK(strict0.witness->first == std::vector<double>{1.0, 2.0});

    const auto weak3 = check_egalitarian_zero(constant_measure(3.0), Mode::Weak, config());
    check_replays(constant_measure(3.0), weak3);
    CHECK(weak3.witness->first == std::vector<double>{1.0, 1.0});
    CHECK(weak3.witness->first_value == 3.0);
  }

  TEST_CASE("sybil proofness") {
    const auto g = check_sybil_proofness(gini_measure(), config());
    check_replays(gini_measure(), g);
    CHECK(g.witness->trial == 1);
    CHECK(g.witness->label == "egalitarian-split-of-richest");
    CHECK(g.witness->second == std::vector<double>{5.0, 5.0, 5.0});
    CHECK(std::abs(g.witness->gap - 1.0 / 6.0) <= 1e-12);
    CHECK(is_pure_sybil(*g.witness->matrix));

    check_unfalsified(check_sybil_proofness(sum_measure(), config()));
    check_unfalsified(check_sybil_proofness(constant_measure(0.0), config()));
    check_unfalsified(check_sybil_proofness(constant_measure(3.0), config()));
  }

  TEST_CASE("sybil proofness without structured probes still falls to random splits") {
    auto cfg = config();
    cfg.structured = false;
    const auto g = check_sybil_proofness(gini_measure(), cfg);
    check_replays(gini_measure(), g);
    CHECK(g.witness->label.empty());
  }

  TEST_CASE("aggregation invariance") {
    const auto g = check_aggregation_invariance(gini_measure(), config());
    check_replays(gini_measure(), g);
    CHECK(g.witness->first == std::vector<double>{5.0, 10.0});
    CHECK(g.witness->second == std::vector<double>{15.0});
    check_unfalsified(check_aggregation_invariance(sum_measure(), config()));
  }

  TEST_CASE("sum dependence, both readings") {
    check_unfalsified(check_sum_dependence(sum_measure(), Mode::Strict, config()));
    check_unfalsified(check_sum_dependence(constant_measure(0.0), Mode::Weak, config()));

    const auto strict0 = check_sum_dependence(constant_measure(0.0), Mode::Strict, config());
    check_replays(constant_measure(0.0), strict0);
    CHECK(strict0.witness->relation == Relation::UnequalSums);
    CHECK(strict0.witness->first == std::vector<double>{1.0});
    CHECK(strict0.witness->second == std::vector<double>{2.0});

    const auto g = check_sum_dependence(gini_measure(), Mode::Weak, config());
    check_replays(gini_measure(), g);
    CHECK(g.witness->second == std::vector<double>{5.0, 5.0, 5.0});
  }

  TEST_CASE("decomposability") {
    const auto ge2 = check_decomposability(ge_measure(GEParams{2.0}), 2000, config());
    check_unfalsified(ge2);
    CHECK(ge2.evaluated > 100);  // matched pairs really were tested
    check_unfalsified(check_decomposability(constant_measure(0.0), 500, config()));

    const auto g = check_decomposability(gini_measure(), 100000, config());
    check_replays(gini_measure(), g);
    CHECK(g.witness->first.size() == 3);
    CHECK(g.witness->second.size() == 3);

    const auto none = check_decomposability(diagnostic(Diagnostic::FirstElement), 50, config());
    check_unfalsified(none);
    CHECK(none.note.find("SearchBudgetExhausted") != std::string::npos);
  }

  TEST_CASE("domain errors skip trials rather than fail them") {
    const auto v = check_scale_independence(theil_l_measure(), config());
    check_unfalsified(v);
    CHECK(v.domain_errors > 0);
    CHECK(v.evaluated + v.domain_errors == v.trials);
  }

  TEST_CASE("zero trials is rejected") {
    CHECK_THROWS_AS(check_symmetry(gini_measure(), config(0)), Error);
    CHECK_THROWS_AS(check_decomposability(gini_measure(), 0, config()), Error);
  }

  TEST_CASE("verdicts are deterministic under seed") {
    const auto a = check_transfer(diagnostic(Diagnostic::MaxElement), Mode::Strict, config(1000, 5));
    const auto b = check_transfer(diagnostic(Diagnostic::MaxElement), Mode::Strict, config(1000, 5));
    REQUIRE(a.witness.has_value());
    CHECK(a.witness->first == b.witness->first);
    CHECK(a.witness->trial == b.witness->trial);

    auto cfg = config(1000, 5);
    cfg.structured = false;
    const auto c = check_symmetry(diagnostic(Diagnostic::FirstElement), cfg);
    const auto d = check_symmetry(diagnostic(Diagnostic::FirstElement), cfg);
    CHECK(c.witness->first == d.witness->first);
    CHECK(c.witness->permutation == d.witness->permutation);
  }

  TEST_CASE("strict witnesses survive tightening the tolerance tenfold") {
    const std::vector<std::pair<Measure, Verdict>> strict = {
        {sum_measure(), check_transfer(sum_measure(), Mode::Strict, config())},
        {constant_measure(0.0), check_egalitarian_zero(constant_measure(0.0), Mode::Strict, config())},
        {constant_measure(0.0), check_sum_dependence(constant_measure(0.0), Mode::Strict, config())},
        {ge_measure(GEParams{2.0}),
         check_transfer(ge_measure(GEParams{2.0}), Mode::Strict, config())},
    };
    for (const auto& [m, v] : strict) {
      CAPTURE(m.id());
      REQUIRE(v.witness.has_value());
      CHECK(replay_counterexample(m, *v.witness, v.tolerance).reproduced);
      CHECK(replay_counterexample(m, *v.witness, v.tolerance.tightened(10.0)).reproduced);
    }
  }

  TEST_CASE("replay rejects a tampered witness") {
    auto v = check_sybil_proofness(gini_measure(), config());
    REQUIRE(v.witness.has_value());
    Witness w = *v.witness;
    w.second = {5.0, 5.0, 6.0};
    const auto r = replay_counterexample(gini_measure(), w, v.tolerance);
    CHECK_FALSE(r.reproduced);
    CHECK(r.detail.find("conserve") != std::string::npos);

    Witness collusive = *v.witness;
    collusive.matrix = Matrix{{1.0, 0.0, 0.0}, {0.5, 0.25, 0.25}};
    collusive.second = {10.0, 2.5, 2.5};
    CHECK_FALSE(replay_counterexample(gini_measure(), collusive, v.tolerance).reproduced);

    // A genuine invariance under a different measure does not replay.
    CHECK_FALSE(replay_counterexample(sum_measure(), *v.witness, v.tolerance).reproduced);
  }

  TEST_CASE("axiom and relation keys round-trip") {
    for (Axiom a : all_axioms()) CHECK(parse_axiom_key(axiom_key(a)) == a);
    CHECK_FALSE(parse_axiom_key("nope").has_value());
    CHECK(parse_relation("sybil_report") == Relation::SybilReport);
    CHECK_FALSE(parse_relation("nope").has_value());
  }

  TEST_CASE("registry entries") {
    const auto g = expected_verdicts("gini");
    CHECK(g.at(Axiom::SybilProofness) == Status::Falsified);
    CHECK(g.at(Axiom::ScaleIndependence) == Status::Unfalsified);
    CHECK(expected_verdicts("const:3").at(Axiom::EgalitarianZeroWeak) == Status::Falsified);
    CHECK(expected_verdicts("const:0").at(Axiom::EgalitarianZeroWeak) == Status::Unfalsified);
    CHECK(expected_verdicts("ge:0.5").at(Axiom::Decomposability) == Status::Unfalsified);
    CHECK(expected_verdicts("theil-l").at(Axiom::AggregationInvariance) == Status::Falsified);
    CHECK(expected_verdicts("sum").at(Axiom::ScaleIndependence) == Status::Falsified);
    CHECK(expected_verdicts("diag:first").empty());
    CHECK(expected_verdicts("hhi").empty());
  }

  TEST_CASE("audit of registry measures has no mismatches") {
    AuditConfig cfg;
    cfg.search = config(300);
    for (const char* id : {"gini", "ge:2", "theil-t", "const:0", "const:3", "sum"}) {
      CAPTURE(id);
      const auto report = run_audit(parse_measure(id), cfg);
      CHECK(report.measure == id);
      CHECK(report.outcomes.size() == all_axioms().size());
      CHECK(report.mismatches.empty());
    }
  }

  TEST_CASE("mismatches list exactly the disagreements") {
    // A sum-dependent measure under gini's id must disagree wherever the two differ.
    const Measure impostor("gini", [](const WealthDistribution& x) { return x.total(); });
    AuditConfig cfg;
    cfg.search = config(200);
    cfg.decomposition_budget = 200;
    const auto report = run_audit(impostor, cfg);
    for (const auto& [axiom, status] : report.expected) {
      const auto& o = report.outcome(axiom);
      const bool disagrees = !o.verdict || o.verdict->status != status;
      const bool listed =
          std::find(report.mismatches.begin(), report.mismatches.end(), axiom) != report.mismatches.end();
      CAPTURE(axiom_key(axiom));
      CHECK(disagrees == listed);
    }
    CHECK_FALSE(report.mismatches.empty());
  }

  TEST_CASE("checker failures are recorded per axiom") {
    // Throws a non-domain error on every evaluation.
    const Measure broken("broken", [](const WealthDistribution&) -> double {
      throw Error(ErrorCode::InvalidParameter, "always");
    });
    AuditConfig cfg;
    cfg.search = config(10);
    cfg.decomposition_budget = 10;
    const auto report = run_audit(broken, cfg);
    CHECK(report.outcomes.size() == all_axioms().size());
    for (const auto& o : report.outcomes) {
      CHECK_FALSE(o.verdict.has_value());
      CHECK(o.error.find("InvalidParameter") != std::string::npos);
    }
  }
}

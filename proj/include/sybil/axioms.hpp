#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sybil/economy.hpp"
#include "sybil/measures.hpp"
#include "sybil/random.hpp"
#include "sybil/tolerance.hpp"

namespace sybil {

enum class Mode { Weak, Strict };

enum class Axiom {
  ScaleIndependence,
  PopulationInsensitivity,
  Symmetry,
  TransferWeak,
  TransferStrict,
  EgalitarianZeroWeak,
  EgalitarianZeroStrict,
  SybilProofness,
  AggregationInvariance,
  SumDependenceWeak,
  SumDependenceStrict,
  Decomposability,
};

/// Every axiom, in report order.
const std::vector<Axiom>& all_axioms();
std::string_view axiom_key(Axiom axiom) noexcept;
std::optional<Axiom> parse_axiom_key(std::string_view key) noexcept;

enum class Status { Falsified, Unfalsified };
std::string_view status_name(Status status) noexcept;

/// How the two distributions stored in a witness are related.
enum class Relation {
  Scaled,              // second = alpha * first
  Duplicated,          // second = first ++ first
  Permuted,            // second = first[permutation]
  Transferred,         // second = transfer(first, step)
  Egalitarian,         // first is egalitarian, measure is not zero on it
  NonEgalitarianZero,  // first is not egalitarian, measure is zero on it
  SybilReport,         // second = apply_report(first, matrix)
  Aggregated,          // second = aggregate(first, matrix)
  EqualSums,           // totals agree, values do not
  UnequalSums,         // totals differ, values agree
  Decomposition,       // (first, extra) and (second, extra) share summaries
};
std::string_view relation_name(Relation relation) noexcept;
std::optional<Relation> parse_relation(std::string_view name) noexcept;

struct TransferStep {
  std::size_t from = 0;
  std::size_t to = 0;
  double delta = 0.0;
};

/// Concrete counterexample. Only the fields relevant to `relation` are set.
struct Witness {
  Relation relation = Relation::Scaled;
  Mode mode = Mode::Weak;
  std::size_t trial = 0;  // 1-based; structured probes come first
  std::vector<double> first;
  std::vector<double> second;
  std::vector<double> extra;
  std::optional<double> alpha;
  std::vector<std::size_t> permutation;
  std::optional<TransferStep> step;
  std::optional<Matrix> matrix;
  double first_value = 0.0;
  double second_value = 0.0;
  double gap = 0.0;
  std::string label;  // names the structured construction, empty for random trials
};

struct Verdict {
  Axiom axiom = Axiom::ScaleIndependence;
  Status status = Status::Unfalsified;
  std::optional<Witness> witness;
  std::size_t trials = 0;         // trials executed
  std::size_t evaluated = 0;      // trials where the measure was in-domain
  std::size_t domain_errors = 0;  // trials skipped on MeasureDomainError
  Tolerance tolerance;
  Seed seed;
  std::string note;
};

struct SearchConfig {
  std::size_t trials = 1000;
  Seed seed{42};
  Tolerance tol;
  std::size_t min_dim = 2;
  std::size_t max_dim = 8;
  bool structured = true;
};

Verdict check_scale_independence(const Measure& m, const SearchConfig& cfg);
Verdict check_population_insensitivity(const Measure& m, const SearchConfig& cfg);
Verdict check_symmetry(const Measure& m, const SearchConfig& cfg);
Verdict check_transfer(const Measure& m, Mode mode, const SearchConfig& cfg);
Verdict check_egalitarian_zero(const Measure& m, Mode mode, const SearchConfig& cfg);
Verdict check_sybil_proofness(const Measure& m, const SearchConfig& cfg);
Verdict check_aggregation_invariance(const Measure& m, const SearchConfig& cfg);
Verdict check_sum_dependence(const Measure& m, Mode mode, const SearchConfig& cfg);
/// Necessary condition for decomposability: matched (value, mean, size)
/// summaries must yield matched merged values. `budget` counts attempts.
Verdict check_decomposability(const Measure& m, std::size_t budget, const SearchConfig& cfg);

struct ReplayOutcome {
  bool reproduced = false;
  double first_value = 0.0;
  double second_value = 0.0;
  double gap = 0.0;
  std::string detail;
};

/// Re-derives the witness relation and re-evaluates the measure from the
/// stored inputs alone.
ReplayOutcome replay_counterexample(const Measure& m, const Witness& w, Tolerance tol);

/// Matched-summary pairs are rare, so decomposability gets its own budget.
inline constexpr std::size_t kDefaultDecompositionBudget = 20000;

struct AuditConfig {
  SearchConfig search;
  std::optional<std::size_t> decomposition_budget;  // defaults to kDefaultDecompositionBudget
};

struct AxiomOutcome {
  Axiom axiom = Axiom::ScaleIndependence;
  std::optional<Verdict> verdict;
  std::string error;  // set when the checker itself failed
};

struct AuditReport {
  std::string measure;
  std::vector<AxiomOutcome> outcomes;
  std::map<Axiom, Status> expected;
  std::vector<Axiom> mismatches;

  const AxiomOutcome& outcome(Axiom axiom) const;
};

/// Expected verdicts implied by the characterization results for the measure
/// families that have them: gini, ge:*, theil-*, const:*, sum.
std::map<Axiom, Status> expected_verdicts(std::string_view measure_id);

AuditReport run_audit(const Measure& m, const AuditConfig& cfg);

namespace sampling {

/// Length uniform in [lo, hi]; entries from uniform [0,1], log-uniform over
/// [1e-3, 1e3], or sparse with zeros, chosen per draw. Total is positive.
WealthDistribution mixed(Rng& rng, std::size_t lo, std::size_t hi);
/// Strictly positive entries, log-uniform over [1e-2, 1e2].
WealthDistribution positive(Rng& rng, std::size_t lo, std::size_t hi);

}  // namespace sampling

}  // namespace sybil

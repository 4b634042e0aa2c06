#include "sybil/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sybil/error.hpp"

namespace sybil {

// ---------------------------------------------------------------------------
// Names

const std::vector<Axiom>& all_axioms() {
  static const std::vector<Axiom> axioms = {
      Axiom::ScaleIndependence,     Axiom::PopulationInsensitivity, Axiom::Symmetry,
      Axiom::TransferWeak,          Axiom::TransferStrict,          Axiom::EgalitarianZeroWeak,
      Axiom::EgalitarianZeroStrict, Axiom::SybilProofness,          Axiom::AggregationInvariance,
      Axiom::SumDependenceWeak,     Axiom::SumDependenceStrict,     Axiom::Decomposability,
  };
  return axioms;
}

std::string_view axiom_key(Axiom axiom) noexcept {
  switch (axiom) {
    case Axiom::ScaleIndependence: return "scale_independence";
    case Axiom::PopulationInsensitivity: return "population_insensitivity";
    case Axiom::Symmetry: return "symmetry";
    case Axiom::TransferWeak: return "transfer_weak";
    case Axiom::TransferStrict: return "transfer_strict";
    case Axiom::EgalitarianZeroWeak: return "egalitarian_zero_weak";
    case Axiom::EgalitarianZeroStrict: return "egalitarian_zero_strict";
    case Axiom::SybilProofness: return "sybil_proofness";
    case Axiom::AggregationInvariance: return "aggregation_invariance";
    case Axiom::SumDependenceWeak: return "sum_dependence_weak";
    case Axiom::SumDependenceStrict: return "sum_dependence_strict";
    case Axiom::Decomposability: return "decomposability";
  }
  return "unknown";
}

std::optional<Axiom> parse_axiom_key(std::string_view key) noexcept {
  for (Axiom a : all_axioms())
    if (axiom_key(a) == key) return a;
  return std::nullopt;
}

std::string_view status_name(Status status) noexcept {
  return status == Status::Falsified ? "falsified" : "unfalsified";
}

namespace {

constexpr Relation kRelations[] = {
    Relation::Scaled,      Relation::Duplicated,         Relation::Permuted,
    Relation::Transferred, Relation::Egalitarian,        Relation::NonEgalitarianZero,
    Relation::SybilReport, Relation::Aggregated,         Relation::EqualSums,
    Relation::UnequalSums, Relation::Decomposition,
};

}  // namespace

std::string_view relation_name(Relation relation) noexcept {
  switch (relation) {
    case Relation::Scaled: return "scaled";
    case Relation::Duplicated: return "duplicated";
    case Relation::Permuted: return "permuted";
    case Relation::Transferred: return "transferred";
    case Relation::Egalitarian: return "egalitarian";
    case Relation::NonEgalitarianZero: return "non_egalitarian_zero";
    case Relation::SybilReport: return "sybil_report";
    case Relation::Aggregated: return "aggregated";
    case Relation::EqualSums: return "equal_sums";
    case Relation::UnequalSums: return "unequal_sums";
    case Relation::Decomposition: return "decomposition";
  }
  return "unknown";
}

std::optional<Relation> parse_relation(std::string_view name) noexcept {
  for (Relation r : kRelations)
    if (relation_name(r) == name) return r;
  return std::nullopt;
}

const AxiomOutcome& AuditReport::outcome(Axiom axiom) const {
  for (const auto& o : outcomes)
    if (o.axiom == axiom) return o;
  throw Error(ErrorCode::InvalidReport, "axiom not in report: " + std::string(axiom_key(axiom)));
}

// ---------------------------------------------------------------------------
// Sampling

namespace sampling {

WealthDistribution mixed(Rng& rng, std::size_t lo, std::size_t hi) {
  const std::size_t k = rng.between(lo, hi);
  std::vector<double> v(k);
  switch (rng.index(3)) {
    case 0:
      for (auto& e : v) e = rng.uniform01();
      break;
    case 1:
      for (auto& e : v) e = rng.log_uniform(1e-3, 1e3);
      break;
    default:
      for (auto& e : v) e = rng.bernoulli(0.3) ? 0.0 : rng.log_uniform(1e-3, 1e3);
      break;
  }
  if (std::all_of(v.begin(), v.end(), [](double e) { return e == 0.0; })) {
    v[rng.index(k)] = rng.log_uniform(1e-3, 1e3);
  }
  return WealthDistribution(std::move(v));
}

WealthDistribution positive(Rng& rng, std::size_t lo, std::size_t hi) {
  const std::size_t k = rng.between(lo, hi);
  std::vector<double> v(k);
  for (auto& e : v) e = rng.log_uniform(1e-2, 1e2);
  return WealthDistribution(std::move(v));
}

}  // namespace sampling

// ---------------------------------------------------------------------------
// Trial driver

namespace {

enum class Outcome { Held, Violated, Skipped };

struct TrialResult {
  Outcome outcome = Outcome::Held;
  std::optional<Witness> witness;

  static TrialResult held() { return {}; }
  static TrialResult skipped() { return {Outcome::Skipped, std::nullopt}; }
  static TrialResult violated(Witness w) { return {Outcome::Violated, std::move(w)}; }
};

using Probe = std::function<TrialResult()>;
using RandomTrial = std::function<TrialResult(Rng&)>;

/// Runs structured probes first, then seeded random trials, stopping at the
/// first violation. Trial t draws from seed.derive(t), so the reported
/// witness is the lowest-index one regardless of how trials are scheduled.
Verdict run_search(Axiom axiom, const SearchConfig& cfg, std::size_t trials,
                   const std::vector<Probe>& probes, const RandomTrial& random_trial) {
  if (trials == 0) throw Error(ErrorCode::InvalidParameter, "trials must be >= 1");
  Verdict verdict;
  verdict.axiom = axiom;
  verdict.tolerance = cfg.tol;
  verdict.seed = cfg.seed;

  for (std::size_t t = 1; t <= trials; ++t) {
    ++verdict.trials;
    TrialResult result;
    try {
      const std::size_t probe_index = t - 1;
      if (cfg.structured && probe_index < probes.size()) {
        result = probes[probe_index]();
      } else {
        Rng rng(cfg.seed.derive(t));
        result = random_trial(rng);
      }
    } catch (const MeasureDomainError& e) {
      ++verdict.domain_errors;
      if (verdict.note.empty()) verdict.note = std::string("domain: ") + e.what();
      continue;
    }
    if (result.outcome == Outcome::Skipped) continue;
    ++verdict.evaluated;
    if (result.outcome == Outcome::Violated) {
      verdict.status = Status::Falsified;
      verdict.witness = std::move(result.witness);
      verdict.witness->trial = t;
      return verdict;
    }
  }
  verdict.status = Status::Unfalsified;
  return verdict;
}

Witness make_pair_witness(Relation relation, const WealthDistribution& a,
                          const WealthDistribution& b, double va, double vb) {
  Witness w;
  w.relation = relation;
  w.first = a.vector();
  w.second = b.vector();
  w.first_value = va;
  w.second_value = vb;
  w.gap = std::abs(va - vb);
  return w;
}

/// Invariance trial: violation when the values differ beyond tolerance.
TrialResult invariance(const Measure& m, const Tolerance& tol, Relation relation,
                       const WealthDistribution& a, const WealthDistribution& b,
                       const std::function<void(Witness&)>& decorate, std::string label = {}) {
  const double va = m(a);
  const double vb = m(b);
  if (tol.equal(va, vb)) return TrialResult::held();
  Witness w = make_pair_witness(relation, a, b, va, vb);
  w.label = std::move(label);
  if (decorate) decorate(w);
  return TrialResult::violated(std::move(w));
}

std::size_t lower_dim(const SearchConfig& cfg, std::size_t floor) {
  return std::max(cfg.min_dim, floor);
}

std::size_t upper_dim(const SearchConfig& cfg, std::size_t floor) {
  return std::max(cfg.max_dim, lower_dim(cfg, floor));
}

// Strict-mode verdicts only fire when they would also fire under a tolerance
// ten times tighter, so stored witnesses survive tolerance tightening.
constexpr double kStrictMargin = 10.0;

}  // namespace

// ---------------------------------------------------------------------------
// Falsifiers

Verdict check_scale_independence(const Measure& m, const SearchConfig& cfg) {
  const auto probe = [&](WealthDistribution x, double alpha) -> Probe {
    return [&m, &cfg, x = std::move(x), alpha] {
      return invariance(m, cfg.tol, Relation::Scaled, x, scale(x, alpha),
                        [alpha](Witness& w) { w.alpha = alpha; }, "doubling");
    };
  };
  const std::vector<Probe> probes = {probe({1.0, 1.0}, 2.0), probe({5.0, 10.0}, 3.0)};
  return run_search(Axiom::ScaleIndependence, cfg, cfg.trials, probes, [&](Rng& rng) {
    const auto x = sampling::mixed(rng, lower_dim(cfg, 1), upper_dim(cfg, 1));
    const double alpha = rng.log_uniform(1e-3, 1e3);
    return invariance(m, cfg.tol, Relation::Scaled, x, scale(x, alpha),
                      [alpha](Witness& w) { w.alpha = alpha; });
  });
}

Verdict check_population_insensitivity(const Measure& m, const SearchConfig& cfg) {
  const auto probe = [&](WealthDistribution x) -> Probe {
    return [&m, &cfg, x = std::move(x)] {
      return invariance(m, cfg.tol, Relation::Duplicated, x, duplicate(x), {}, "duplication");
    };
  };
  const std::vector<Probe> probes = {probe({1.0}), probe({5.0, 10.0})};
  return run_search(Axiom::PopulationInsensitivity, cfg, cfg.trials, probes, [&](Rng& rng) {
    const auto x = sampling::mixed(rng, lower_dim(cfg, 1), upper_dim(cfg, 1));
    return invariance(m, cfg.tol, Relation::Duplicated, x, duplicate(x), {});
  });
}

Verdict check_symmetry(const Measure& m, const SearchConfig& cfg) {
  const auto permuted = [&](const WealthDistribution& x, std::vector<std::size_t> order,
                            std::string label) {
    const auto px = permute(x, order);
    return invariance(
        m, cfg.tol, Relation::Permuted, x, px,
        [order](Witness& w) { w.permutation = order; }, std::move(label));
  };
  const std::vector<Probe> probes = {
      [&] { return permuted(WealthDistribution{1.0, 2.0}, {1, 0}, "swap"); },
  };
  return run_search(Axiom::Symmetry, cfg, cfg.trials, probes, [&](Rng& rng) {
    const auto x = sampling::mixed(rng, lower_dim(cfg, 2), upper_dim(cfg, 2));
    return permuted(x, rng.permutation(x.size()), {});
  });
}

Verdict check_transfer(const Measure& m, Mode mode, const SearchConfig& cfg) {
  const Tolerance tight = cfg.tol.tightened(kStrictMargin);
  const auto attempt = [&m, &cfg, mode, tight](const WealthDistribution& x, TransferStep step,
                                               std::string label) -> TrialResult {
    const auto after = transfer(x, step.from, step.to, step.delta);
    const double before_value = m(x);
    const double after_value = m(after);
    const bool violated = mode == Mode::Weak
                              ? after_value > before_value + cfg.tol.bound(before_value, after_value)
                              : after_value >= before_value - tight.bound(before_value, after_value);
    if (!violated) return TrialResult::held();
    Witness w = make_pair_witness(Relation::Transferred, x, after, before_value, after_value);
    w.mode = mode;
    w.step = step;
    w.gap = after_value - before_value;
    w.label = std::move(label);
    return TrialResult::violated(std::move(w));
  };

  const std::vector<Probe> probes = {
      [&] { return attempt(WealthDistribution{0.9, 0.1}, {0, 1, 0.3}, "transfer-chain-1"); },
      [&] { return attempt(WealthDistribution{0.6, 0.4}, {0, 1, 0.1}, "transfer-chain-2"); },
      [&] { return attempt(WealthDistribution{1.0, 2.0}, {1, 0, 0.25}, "toward-first"); },
  };
  const Axiom axiom = mode == Mode::Weak ? Axiom::TransferWeak : Axiom::TransferStrict;
  return run_search(axiom, cfg, cfg.trials, probes, [&](Rng& rng) -> TrialResult {
    const auto x = sampling::mixed(rng, lower_dim(cfg, 2), upper_dim(cfg, 2));
    const std::size_t a = rng.index(x.size());
    std::size_t b = rng.index(x.size() - 1);
    if (b >= a) ++b;
    if (x[a] == x[b]) return TrialResult::skipped();
    const std::size_t rich = x[a] > x[b] ? a : b;
    const std::size_t poor = x[a] > x[b] ? b : a;
    const double half_gap = (x[rich] - x[poor]) / 2.0;
    double delta = 0.0;
    if (mode == Mode::Weak) {
      delta = rng.bernoulli(0.2) ? half_gap : half_gap * (1.0 - rng.uniform01());
    } else {
      // Vanishing transfers cannot be told apart from rounding noise.
      const double floor = 100.0 * cfg.tol.bound(x.total(), 0.0);
      if (half_gap < floor) return TrialResult::skipped();
      delta = rng.bernoulli(0.2) ? half_gap : floor + (half_gap - floor) * (1.0 - rng.uniform01());
    }
    return attempt(x, {rich, poor, delta}, {});
  });
}

Verdict check_egalitarian_zero(const Measure& m, Mode mode, const SearchConfig& cfg) {
  const Tolerance tight = cfg.tol.tightened(kStrictMargin);
  const auto egalitarian = [&m, &cfg](const WealthDistribution& x,
                                      std::string label) -> TrialResult {
    const double v = m(x);
    if (cfg.tol.equal(v, 0.0)) return TrialResult::held();
    Witness w;
    w.relation = Relation::Egalitarian;
    w.first = x.vector();
    w.first_value = v;
    w.gap = std::abs(v);
    w.label = std::move(label);
    return TrialResult::violated(std::move(w));
  };
  const auto non_egalitarian = [&m, &cfg, tight](const WealthDistribution& x,
                                                 std::string label) -> TrialResult {
    const double v = m(x);
    if (!tight.equal(v, 0.0)) return TrialResult::held();
    Witness w;
    w.relation = Relation::NonEgalitarianZero;
    w.mode = Mode::Strict;
    w.first = x.vector();
    w.first_value = v;
    w.gap = std::abs(v);
    w.label = std::move(label);
    return TrialResult::violated(std::move(w));
  };

  std::vector<Probe> probes = {
      [&] { return egalitarian(WealthDistribution{1.0, 1.0}, "pair"); },
      [&] { return egalitarian(WealthDistribution{5.0, 5.0, 5.0}, "triple"); },
  };
  if (mode == Mode::Strict) {
    probes.push_back([&] { return non_egalitarian(WealthDistribution{1.0, 2.0}, "unequal-pair"); });
    probes.push_back(
        [&] { return non_egalitarian(WealthDistribution{5.0, 10.0}, "unequal-pair"); });
  }
  const Axiom axiom = mode == Mode::Weak ? Axiom::EgalitarianZeroWeak : Axiom::EgalitarianZeroStrict;
  return run_search(axiom, cfg, cfg.trials, probes, [&](Rng& rng) -> TrialResult {
    const double level = rng.log_uniform(1e-3, 1e3);
    const std::size_t k = rng.between(1, upper_dim(cfg, 1));
    auto result = egalitarian(WealthDistribution(std::vector<double>(k, level)), {});
    if (mode == Mode::Weak || result.outcome == Outcome::Violated) return result;
    const auto x = sampling::mixed(rng, lower_dim(cfg, 2), upper_dim(cfg, 2));
    const auto [lo, hi] = std::minmax_element(x.values().begin(), x.values().end());
    if (*hi - *lo <= 100.0 * cfg.tol.bound(*hi, 0.0)) return TrialResult::held();
    return non_egalitarian(x, {});
  });
}

Verdict check_sybil_proofness(const Measure& m, const SearchConfig& cfg) {
  const auto manipulate = [&m, &cfg](const WealthDistribution& hidden, const ReportMatrix& r,
                                     std::string label) {
    const auto observable = apply_report(hidden, r);
    return invariance(
        m, cfg.tol, Relation::SybilReport, hidden, observable,
        [&r](Witness& w) { w.matrix = r.matrix(); }, std::move(label));
  };

  const std::vector<Probe> probes = {
      // The richer actor splits evenly so every identity holds the poorer's wealth.
      [&] {
        return manipulate(WealthDistribution{5.0, 10.0},
                          ReportMatrix(Matrix{{1.0, 0.0, 0.0}, {0.0, 0.5, 0.5}}),
                          "egalitarian-split-of-richest");
      },
      // A lone actor posing as two identities.
      [&] {
        return manipulate(WealthDistribution{1.0}, ReportMatrix(Matrix{{0.9, 0.1}}),
                          "single-actor-split");
      },
      [&] {
        return manipulate(WealthDistribution{1.0}, ReportMatrix(Matrix{{0.5, 0.5}}),
                          "single-actor-even-split");
      },
      // Lone actor reproducing a distribution and its reversal.
      [&] {
        return manipulate(WealthDistribution{3.0}, ReportMatrix(Matrix{{2.0 / 3.0, 1.0 / 3.0}}),
                          "single-actor-counterfactual");
      },
  };

  return run_search(Axiom::SybilProofness, cfg, cfg.trials, probes, [&](Rng& rng) {
    const std::size_t hi = std::max<std::size_t>(1, upper_dim(cfg, 1) / 2);
    const auto hidden = sampling::mixed(rng, 1, hi);
    std::vector<std::size_t> splits(hidden.size());
    for (auto& s : splits) s = rng.between(1, 3);
    const ReportMatrix base = random_pure_sybil(hidden, splits, Seed{rng.next()});
    if (!rng.bernoulli(0.5)) return manipulate(hidden, base, {});
    // Column shuffles keep the report pure and wealth-conserving.
    const auto order = rng.permutation(base.identities());
    Matrix shuffled(base.actors(), base.identities());
    for (std::size_t i = 0; i < base.actors(); ++i)
      for (std::size_t j = 0; j < base.identities(); ++j) shuffled(i, j) = base(i, order[j]);
    return manipulate(hidden, ReportMatrix(std::move(shuffled)), {});
  });
}

namespace {

/// Merges entry `drop` into entry `keep`; all other entries pass through.
AggregationMatrix merge_matrix(std::size_t k, std::size_t keep, std::size_t drop) {
  Matrix m(k - 1, k);
  std::size_t row = 0;
  std::size_t keep_row = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (j == drop) continue;
    if (j == keep) keep_row = row;
    m(row, j) = 1.0;
    ++row;
  }
  m(keep_row, drop) = 1.0;
  return AggregationMatrix(std::move(m));
}

}  // namespace

Verdict check_aggregation_invariance(const Measure& m, const SearchConfig& cfg) {
  const auto condense = [&m, &cfg](const WealthDistribution& x, const AggregationMatrix& a,
                                   std::string label) {
    return invariance(
        m, cfg.tol, Relation::Aggregated, x, aggregate(x, a),
        [&a](Witness& w) { w.matrix = a.matrix(); }, std::move(label));
  };
  const std::vector<Probe> probes = {
      [&] {
        return condense(WealthDistribution{5.0, 10.0}, AggregationMatrix(Matrix{{1.0, 1.0}}),
                        "full-condensation");
      },
      [&] {
        return condense(WealthDistribution{1.0, 2.0, 3.0},
                        AggregationMatrix(Matrix{{1.0, 0.0, 0.0}, {0.0, 1.0, 1.0}}),
                        "merge-last-two");
      },
  };
  return run_search(Axiom::AggregationInvariance, cfg, cfg.trials, probes, [&](Rng& rng) {
    const auto x = sampling::mixed(rng, lower_dim(cfg, 2), upper_dim(cfg, 2));
    if (rng.bernoulli(1.0 / 3.0)) {
      const std::size_t keep = rng.index(x.size());
      std::size_t drop = rng.index(x.size() - 1);
      if (drop >= keep) ++drop;
      return condense(x, merge_matrix(x.size(), keep, drop), {});
    }
    return condense(x, random_aggregation(x.size(), Seed{rng.next()}), {});
  });
}

Verdict check_sum_dependence(const Measure& m, Mode mode, const SearchConfig& cfg) {
  const Tolerance tight = cfg.tol.tightened(kStrictMargin);
  const auto equal_sums = [&m, &cfg](const WealthDistribution& x, const WealthDistribution& y,
                                     std::string label) {
    return invariance(m, cfg.tol, Relation::EqualSums, x, y, {}, std::move(label));
  };
  const auto unequal_sums = [&m, tight](const WealthDistribution& x, const WealthDistribution& y,
                                        std::string label) -> TrialResult {
    const double vx = m(x);
    const double vy = m(y);
    if (!tight.equal(vx, vy)) return TrialResult::held();
    Witness w = make_pair_witness(Relation::UnequalSums, x, y, vx, vy);
    w.mode = Mode::Strict;
    w.label = std::move(label);
    return TrialResult::violated(std::move(w));
  };
  const auto split = [](Rng& rng, double total, std::size_t k) {
    auto v = rng.simplex(k);
    for (auto& e : v) e *= total;
    return WealthDistribution(std::move(v));
  };

  std::vector<Probe> probes = {
      [&] {
        return equal_sums(WealthDistribution{5.0, 10.0}, WealthDistribution{5.0, 5.0, 5.0},
                          "egalitarian-split-of-richest");
      },
  };
  if (mode == Mode::Strict) {
    probes.push_back([&] {
      return unequal_sums(WealthDistribution{1.0}, WealthDistribution{2.0}, "singletons");
    });
  }
  const Axiom axiom = mode == Mode::Weak ? Axiom::SumDependenceWeak : Axiom::SumDependenceStrict;
  return run_search(axiom, cfg, cfg.trials, probes, [&](Rng& rng) -> TrialResult {
    const std::size_t hi = upper_dim(cfg, 1);
    const double total = rng.log_uniform(1e-2, 1e2);
    auto result = equal_sums(split(rng, total, rng.between(1, hi)),
                             split(rng, total, rng.between(1, hi)), {});
    if (mode == Mode::Weak || result.outcome == Outcome::Violated) return result;
    double other = total * (1.0 + rng.log_uniform(1e-3, 1.0));
    if (rng.bernoulli(0.5)) other = total * total / other;
    return unequal_sums(split(rng, total, rng.between(1, hi)),
                        split(rng, other, rng.between(1, hi)), {});
  });
}

namespace {

struct MatchedTriple {
  WealthDistribution value;
  double measured;
};

/// Finds s with m(a, s, T - a - s) = target on s in [(T-a)/2, T-a), by a
/// bracketing scan followed by bisection.
std::optional<MatchedTriple> solve_matched_triple(const Measure& m, double total, double a,
                                                  double target, const Tolerance& tol) {
  const double rest = total - a;
  const double lo = rest / 2.0;
  const double hi = rest * (1.0 - 1e-6);
  const auto triple = [&](double s) { return WealthDistribution{a, s, rest - s}; };
  const auto residual = [&](double s) { return m(triple(s)) - target; };

  constexpr int kScan = 32;
  double prev_s = lo;
  double prev_f = residual(lo);
  if (std::abs(prev_f) <= tol.bound(target, target + prev_f)) {
    return MatchedTriple{triple(lo), target + prev_f};
  }
  for (int i = 1; i <= kScan; ++i) {
    const double s = lo + (hi - lo) * static_cast<double>(i) / kScan;
    const double f = residual(s);
    if (std::abs(f) <= tol.bound(target, target + f)) return MatchedTriple{triple(s), target + f};
    if ((prev_f < 0.0) != (f < 0.0)) {
      double left = prev_s;
      double right = s;
      double f_left = prev_f;
      for (int iter = 0; iter < 200 && right - left > 0.0; ++iter) {
        const double mid = 0.5 * (left + right);
        if (mid <= left || mid >= right) break;
        const double f_mid = residual(mid);
        if ((f_mid < 0.0) == (f_left < 0.0)) {
          left = mid;
          f_left = f_mid;
        } else {
          right = mid;
        }
      }
      const double f_best = residual(left);
      if (std::abs(f_best) <= tol.bound(target, target + f_best)) {
        return MatchedTriple{triple(left), target + f_best};
      }
      return std::nullopt;
    }
    prev_s = s;
    prev_f = f;
  }
  return std::nullopt;
}

bool same_multiset(const WealthDistribution& x, const WealthDistribution& y, double eps) {
  if (x.size() != y.size()) return false;
  auto a = x.vector();
  auto b = y.vector();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > eps) return false;
  return true;
}

}  // namespace

Verdict check_decomposability(const Measure& m, std::size_t budget, const SearchConfig& cfg) {
  // Summaries must match far more tightly than the merged values are compared,
  // or root-finding residue would masquerade as a violation.
  const Tolerance match_tol = cfg.tol.tightened(100.0);
  SearchConfig unstructured = cfg;
  unstructured.structured = false;
  std::size_t matched = 0;

  Verdict verdict = run_search(
      Axiom::Decomposability, unstructured, budget, {}, [&](Rng& rng) -> TrialResult {
        const auto x = sampling::positive(rng, 3, 3);
        const double total = x.total();
        const double target = m(x);
        const double a = rng.uniform(0.05, 0.6) * total;
        for (double e : x.values())
          if (std::abs(e - a) < 1e-3 * total) return TrialResult::skipped();
        const auto found = solve_matched_triple(m, total, a, target, match_tol);
        if (!found) return TrialResult::skipped();
        const auto& twin = found->value;
        if (same_multiset(x, twin, 1e-6 * total)) return TrialResult::skipped();
        if (!match_tol.equal(x.mean(), twin.mean())) return TrialResult::skipped();
        ++matched;
        const auto y = sampling::positive(rng, 1, 4);
        const auto merged = concat(x, y);
        const auto merged_twin = concat(twin, y);
        return invariance(m, cfg.tol, Relation::Decomposition, merged, merged_twin,
                          [&](Witness& w) {
                            w.first = x.vector();
                            w.second = twin.vector();
                            w.extra = y.vector();
                          });
      });
  if (verdict.status == Status::Unfalsified && matched == 0) {
    verdict.note = "SearchBudgetExhausted: no matched summary pairs found";
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Replay

namespace {

bool vectors_close(std::span<const double> a, std::span<const double> b, const Tolerance& tol) {
  if (a.size() != b.size()) return false;
  double scale = 0.0;
  for (double e : a) scale = std::max(scale, std::abs(e));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol.atol + tol.rtol * scale) return false;
  return true;
}

ReplayOutcome fail(std::string detail) {
  ReplayOutcome out;
  out.detail = std::move(detail);
  return out;
}

}  // namespace

ReplayOutcome replay_counterexample(const Measure& m, const Witness& w, Tolerance tol) {
  try {
    const WealthDistribution first(w.first);
    ReplayOutcome out;
    const auto compare_invariance = [&](const WealthDistribution& a, const WealthDistribution& b) {
      out.first_value = m(a);
      out.second_value = m(b);
      out.gap = std::abs(out.first_value - out.second_value);
      out.reproduced = out.gap > tol.bound(out.first_value, out.second_value);
      if (!out.reproduced) out.detail = "values agree within tolerance";
      return out;
    };

    switch (w.relation) {
      case Relation::Scaled: {
        if (!w.alpha) return fail("missing alpha");
        const WealthDistribution second(w.second);
        if (!vectors_close(scale(first, *w.alpha).values(), second.values(), tol)) {
          return fail("second is not alpha * first");
        }
        return compare_invariance(first, second);
      }
      case Relation::Duplicated: {
        const WealthDistribution second(w.second);
        if (!(duplicate(first) == second)) return fail("second is not first ++ first");
        return compare_invariance(first, second);
      }
      case Relation::Permuted: {
        const WealthDistribution second(w.second);
        if (!(permute(first, w.permutation) == second)) return fail("second is not a permutation");
        return compare_invariance(first, second);
      }
      case Relation::SybilReport: {
        if (!w.matrix) return fail("missing report matrix");
        const WealthDistribution second(w.second);
        if (!check_conservation(first, *w.matrix, second, tol)) {
          return fail("report matrix does not conserve wealth");
        }
        if (!is_pure_sybil(*w.matrix)) return fail("report matrix involves collusion");
        return compare_invariance(first, second);
      }
      case Relation::Aggregated: {
        if (!w.matrix) return fail("missing aggregation matrix");
        const AggregationMatrix a(*w.matrix, tol);
        const WealthDistribution second(w.second);
        if (!vectors_close(aggregate(first, a).values(), second.values(), tol)) {
          return fail("second is not the aggregate of first");
        }
        return compare_invariance(first, second);
      }
      case Relation::EqualSums: {
        const WealthDistribution second(w.second);
        if (!tol.equal(first.total(), second.total())) return fail("totals differ");
        return compare_invariance(first, second);
      }
      case Relation::UnequalSums: {
        const WealthDistribution second(w.second);
        if (tol.equal(first.total(), second.total())) return fail("totals agree");
        out.first_value = m(first);
        out.second_value = m(second);
        out.gap = std::abs(out.first_value - out.second_value);
        out.reproduced = tol.equal(out.first_value, out.second_value);
        if (!out.reproduced) out.detail = "values differ";
        return out;
      }
      case Relation::Transferred: {
        if (!w.step) return fail("missing transfer step");
        const WealthDistribution second(w.second);
        const auto expected = transfer(first, w.step->from, w.step->to, w.step->delta);
        if (!(expected == second)) return fail("second is not the stated transfer");
        out.first_value = m(first);
        out.second_value = m(second);
        out.gap = out.second_value - out.first_value;
        const double slack = tol.bound(out.first_value, out.second_value);
        out.reproduced = w.mode == Mode::Weak ? out.gap > slack : out.gap >= -slack;
        if (!out.reproduced) out.detail = "transfer respects the principle";
        return out;
      }
      case Relation::Egalitarian: {
        if (!is_egalitarian(first)) return fail("input is not egalitarian");
        out.first_value = m(first);
        out.gap = std::abs(out.first_value);
        out.reproduced = !tol.equal(out.first_value, 0.0);
        if (!out.reproduced) out.detail = "value is zero";
        return out;
      }
      case Relation::NonEgalitarianZero: {
        if (is_egalitarian(first)) return fail("input is egalitarian");
        out.first_value = m(first);
        out.gap = std::abs(out.first_value);
        out.reproduced = tol.equal(out.first_value, 0.0);
        if (!out.reproduced) out.detail = "value is not zero";
        return out;
      }
      case Relation::Decomposition: {
        const WealthDistribution twin(w.second);
        const WealthDistribution partner(w.extra);
        const Tolerance match = tol.tightened(100.0);
        if (first.size() != twin.size()) return fail("groups have different sizes");
        if (!match.equal(first.mean(), twin.mean())) return fail("group means differ");
        if (!match.equal(m(first), m(twin))) return fail("group values differ");
        return compare_invariance(concat(first, partner), concat(twin, partner));
      }
    }
  } catch (const Error& e) {
    return fail(e.what());
  }
  return fail("unknown relation");
}

// ---------------------------------------------------------------------------
// Registry and audit

std::map<Axiom, Status> expected_verdicts(std::string_view id) {
  using enum Axiom;
  constexpr Status F = Status::Falsified;
  constexpr Status U = Status::Unfalsified;

  if (id == "gini") {
    return {{ScaleIndependence, U},   {PopulationInsensitivity, U}, {Symmetry, U},
            {TransferWeak, U},        {EgalitarianZeroWeak, U},     {SybilProofness, F},
            {AggregationInvariance, F}, {SumDependenceWeak, F},     {SumDependenceStrict, F},
            {Decomposability, F}};
  }
  if (id.starts_with("ge:") || id == "theil-t" || id == "theil-l") {
    return {{ScaleIndependence, U},     {PopulationInsensitivity, U}, {Symmetry, U},
            {EgalitarianZeroWeak, U},   {SybilProofness, F},          {AggregationInvariance, F},
            {SumDependenceWeak, F},     {SumDependenceStrict, F},     {Decomposability, U}};
  }
  if (id.starts_with("const:")) {
    const bool baseline = parse_measure(id)(WealthDistribution{1.0}) == 0.0;
    return {{ScaleIndependence, U},
            {PopulationInsensitivity, U},
            {Symmetry, U},
            {TransferWeak, U},
            {TransferStrict, F},
            {EgalitarianZeroWeak, baseline ? U : F},
            {EgalitarianZeroStrict, F},
            {SybilProofness, U},
            {AggregationInvariance, U},
            {SumDependenceWeak, U},
            {SumDependenceStrict, F},
            {Decomposability, U}};
  }
  if (id == "sum") {
    return {{ScaleIndependence, F},     {PopulationInsensitivity, F}, {Symmetry, U},
            {TransferWeak, U},          {TransferStrict, F},          {EgalitarianZeroWeak, F},
            {EgalitarianZeroStrict, F}, {SybilProofness, U},          {AggregationInvariance, U},
            {SumDependenceWeak, U},     {SumDependenceStrict, U},     {Decomposability, U}};
  }
  return {};
}

AuditReport run_audit(const Measure& m, const AuditConfig& cfg) {
  AuditReport report;
  report.measure = m.id();
  const auto& s = cfg.search;
  const std::size_t budget = cfg.decomposition_budget.value_or(kDefaultDecompositionBudget);

  for (Axiom axiom : all_axioms()) {
    AxiomOutcome outcome;
    outcome.axiom = axiom;
    try {
      switch (axiom) {
        case Axiom::ScaleIndependence: outcome.verdict = check_scale_independence(m, s); break;
        case Axiom::PopulationInsensitivity:
          outcome.verdict = check_population_insensitivity(m, s);
          break;
        case Axiom::Symmetry: outcome.verdict = check_symmetry(m, s); break;
        case Axiom::TransferWeak: outcome.verdict = check_transfer(m, Mode::Weak, s); break;
        case Axiom::TransferStrict: outcome.verdict = check_transfer(m, Mode::Strict, s); break;
        case Axiom::EgalitarianZeroWeak:
          outcome.verdict = check_egalitarian_zero(m, Mode::Weak, s);
          break;
        case Axiom::EgalitarianZeroStrict:
          outcome.verdict = check_egalitarian_zero(m, Mode::Strict, s);
          break;
        case Axiom::SybilProofness: outcome.verdict = check_sybil_proofness(m, s); break;
        case Axiom::AggregationInvariance:
          outcome.verdict = check_aggregation_invariance(m, s);
          break;
        case Axiom::SumDependenceWeak:
          outcome.verdict = check_sum_dependence(m, Mode::Weak, s);
          break;
        case Axiom::SumDependenceStrict:
          outcome.verdict = check_sum_dependence(m, Mode::Strict, s);
          break;
        case Axiom::Decomposability: outcome.verdict = check_decomposability(m, budget, s); break;
      }
    } catch (const std::exception& e) {
      outcome.error = e.what();
    }
    report.outcomes.push_back(std::move(outcome));
  }

  report.expected = expected_verdicts(m.id());
  for (const auto& [axiom, status] : report.expected) {
    const auto& o = report.outcome(axiom);
    if (!o.verdict || o.verdict->status != status) report.mismatches.push_back(axiom);
  }
  return report;
}

}  // namespace sybil

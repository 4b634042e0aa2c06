#include "sybil/attack.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>

#include "sybil/error.hpp"

namespace sybil {

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::PureSybil: return "pure-sybil";
    case Family::SplitOne: return "split-one";
    case Family::Collusive: return "collusive";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  for (Family f : {Family::PureSybil, Family::SplitOne, Family::Collusive})
    if (family_name(f) == name) return f;
  return std::nullopt;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInitialStep = 0.25;
constexpr double kMinStep = 1e-12;

/// Free parameters of one report: actor i spreads its wealth over columns[i]
/// with weights fractions[i].
struct Layout {
  std::vector<std::vector<std::size_t>> columns;
  std::vector<std::vector<double>> fractions;
};

Matrix to_matrix(const Layout& layout, std::size_t identities) {
  Matrix r(layout.columns.size(), identities);
  for (std::size_t i = 0; i < layout.columns.size(); ++i)
    for (std::size_t p = 0; p < layout.columns[i].size(); ++p)
      r(i, layout.columns[i][p]) = layout.fractions[i][p];
  return r;
}

/// Contiguous blocks of the given sizes, each with uniform weights.
Layout block_layout(const std::vector<std::size_t>& sizes) {
  Layout layout;
  std::size_t col = 0;
  for (std::size_t s : sizes) {
    std::vector<std::size_t> cols(s);
    for (auto& c : cols) c = col++;
    layout.columns.push_back(std::move(cols));
    layout.fractions.emplace_back(s, 1.0 / static_cast<double>(s));
  }
  return layout;
}

std::size_t richest(const WealthDistribution& hidden) {
  return static_cast<std::size_t>(
      std::max_element(hidden.values().begin(), hidden.values().end()) - hidden.values().begin());
}

/// Restart 0 hands every spare identity to the richest actor in equal shares,
/// which is the even split that most proof constructions start from.
Layout initial_layout(const WealthDistribution& hidden, const AttackConfig& cfg, Rng& rng,
                      bool deterministic) {
  const std::size_t n = hidden.size();
  const std::size_t m = cfg.identities;
  std::vector<std::size_t> sizes(n, 1);
  const std::size_t spare = m >= n ? m - n : 0;

  switch (cfg.family) {
    case Family::PureSybil:
      if (deterministic) {
        sizes[richest(hidden)] += spare;
      } else {
        for (std::size_t s = 0; s < spare; ++s) ++sizes[rng.index(n)];
      }
      break;
    case Family::SplitOne:
      sizes[deterministic ? richest(hidden) : rng.index(n)] += spare;
      break;
    case Family::Collusive: {
      if (deterministic && m >= n) {
        sizes[richest(hidden)] += spare;
        Layout blocks = block_layout(sizes);
        Layout full;
        for (std::size_t i = 0; i < n; ++i) {
          std::vector<std::size_t> cols(m);
          std::vector<double> weights(m, 0.0);
          for (std::size_t j = 0; j < m; ++j) cols[j] = j;
          for (std::size_t p = 0; p < blocks.columns[i].size(); ++p)
            weights[blocks.columns[i][p]] = blocks.fractions[i][p];
          full.columns.push_back(std::move(cols));
          full.fractions.push_back(std::move(weights));
        }
        return full;
      }
      Layout full;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> cols(m);
        for (std::size_t j = 0; j < m; ++j) cols[j] = j;
        full.columns.push_back(std::move(cols));
        full.fractions.push_back(deterministic ? std::vector<double>(m, 1.0 / static_cast<double>(m))
                                               : rng.simplex(m));
      }
      return full;
    }
  }

  Layout layout = block_layout(sizes);
  if (!deterministic) {
    for (auto& f : layout.fractions) f = rng.simplex(f.size());
  }
  return layout;
}

struct RestartOutcome {
  Layout layout;
  double distortion = kNegInf;
  std::size_t evaluations = 0;
};

RestartOutcome climb(const Measure& m, const WealthDistribution& hidden, double value_hidden,
                     const AttackConfig& cfg, std::size_t restart, std::size_t budget) {
  Rng rng(cfg.seed.derive(restart));
  RestartOutcome out;
  out.layout = initial_layout(hidden, cfg, rng, restart == 0);

  const auto score = [&](const Layout& layout) {
    ++out.evaluations;
    try {
      const auto observable = apply_report(hidden, ReportMatrix(to_matrix(layout, cfg.identities)));
      const double d = std::abs(m(observable) - value_hidden);
      return std::isnan(d) ? kNegInf : d;
    } catch (const MeasureDomainError&) {
      return kNegInf;
    }
  };

  out.distortion = score(out.layout);

  std::vector<std::pair<std::size_t, std::size_t>> coords;
  for (std::size_t i = 0; i < out.layout.columns.size(); ++i)
    if (out.layout.columns[i].size() > 1)
      for (std::size_t p = 0; p < out.layout.columns[i].size(); ++p) coords.emplace_back(i, p);
  if (coords.empty()) return out;

  double step = kInitialStep;
  while (out.evaluations < budget && step >= kMinStep) {
    bool improved = false;
    for (const auto& [i, p] : coords) {
      for (double sign : {1.0, -1.0}) {
        if (out.evaluations >= budget) break;
        std::vector<double> row = out.layout.fractions[i];
        row[p] = std::clamp(row[p] + sign * step, 0.0, 1.0);
        double total = 0.0;
        for (double e : row) total += e;
        if (!(total > 0.0)) continue;
        for (auto& e : row) e /= total;
        if (row == out.layout.fractions[i]) continue;

        Layout candidate = out.layout;
        candidate.fractions[i] = std::move(row);
        const double d = score(candidate);
        if (d > out.distortion) {
          out.layout = std::move(candidate);
          out.distortion = d;
          improved = true;
        }
      }
    }
    if (!improved) step /= 2.0;
  }
  return out;
}

}  // namespace

AttackResult maximize_distortion(const Measure& m, const WealthDistribution& hidden,
                                 const AttackConfig& cfg) {
  if (cfg.budget == 0) throw Error(ErrorCode::InvalidParameter, "budget must be >= 1");
  if (cfg.restarts == 0) throw Error(ErrorCode::InvalidParameter, "restarts must be >= 1");
  if (cfg.identities == 0) throw Error(ErrorCode::InfeasibleFamily, "no identities");
  if (cfg.family != Family::Collusive && cfg.identities < hidden.size()) {
    throw Error(ErrorCode::InfeasibleFamily,
                std::string(family_name(cfg.family)) + " needs at least one identity per actor: " +
                    std::to_string(cfg.identities) + " identities for " +
                    std::to_string(hidden.size()) + " actors");
  }

  const double value_hidden = m(hidden);
  const std::size_t restarts = std::min(cfg.restarts, cfg.budget);
  std::vector<std::future<RestartOutcome>> jobs;
  for (std::size_t r = 0; r < restarts; ++r) {
    const std::size_t share = cfg.budget / restarts + (r < cfg.budget % restarts ? 1 : 0);
    jobs.push_back(std::async(std::launch::async, climb, std::cref(m), std::cref(hidden),
                              value_hidden, std::cref(cfg), r, share));
  }

  std::vector<RestartOutcome> outcomes;
  for (auto& j : jobs) outcomes.push_back(j.get());

  std::size_t best = 0;
  std::size_t evaluations = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    evaluations += outcomes[r].evaluations;
    if (outcomes[r].distortion > outcomes[best].distortion) best = r;
  }
  if (outcomes[best].distortion == kNegInf) {
    throw Error(ErrorCode::InfeasibleFamily, "measure undefined on every explored observable");
  }

  AttackResult result;
  result.hidden = hidden;
  result.report = to_matrix(outcomes[best].layout, cfg.identities);
  result.observable = apply_report(hidden, ReportMatrix(result.report));
  result.value_hidden = value_hidden;
  result.value_observable = m(result.observable);
  result.change = result.value_observable - value_hidden;
  result.distortion = std::abs(result.change);
  result.evaluations = evaluations;
  result.restart = best;
  result.seed = cfg.seed;
  result.family = cfg.family;
  result.collusive = !is_pure_sybil(result.report);
  return result;
}

AttackReplay replay_attack(const Measure& m, const AttackResult& result, Tolerance tol) {
  AttackReplay out;
  out.conserves = check_conservation(result.hidden, result.report, result.observable, tol);
  out.pure = is_pure_sybil(result.report);
  out.distortion = std::abs(m(result.observable) - m(result.hidden));
  out.distortion_matches = tol.equal(out.distortion, result.distortion);
  return out;
}

// ---------------------------------------------------------------------------
// Proof constructions

bool WitnessCase::passed() const noexcept {
  return !assertions.empty() &&
         std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

namespace {

constexpr double kExact = 1e-12;

class CaseBuilder {
 public:
  CaseBuilder(std::string id, std::string description) {
    case_.id = std::move(id);
    case_.description = std::move(description);
  }

  void equal(std::string expr, double actual, double expected, double tol = kExact) {
    add(std::move(expr), "==", actual, expected, tol, std::abs(actual - expected) <= tol);
  }
  void differ(std::string expr, double actual, double expected, double tol = kExact) {
    add(std::move(expr), "!=", actual, expected, tol, std::abs(actual - expected) > tol);
  }
  void greater(std::string expr, double actual, double expected, double tol = kExact) {
    add(std::move(expr), ">", actual, expected, tol, actual > expected + tol);
  }
  void less(std::string expr, double actual, double expected, double tol = kExact) {
    add(std::move(expr), "<", actual, expected, tol, actual < expected - tol);
  }
  void holds(std::string expr, bool value) {
    add(std::move(expr), "holds", value ? 1.0 : 0.0, 1.0, 0.0, value);
  }
  void same(std::string expr, const WealthDistribution& actual, std::vector<double> expected) {
    bool ok = actual.size() == expected.size();
    double worst = 0.0;
    for (std::size_t i = 0; ok && i < expected.size(); ++i)
      worst = std::max(worst, std::abs(actual[i] - expected[i]));
    ok = ok && worst <= kExact;
    add(std::move(expr), "==", worst, 0.0, kExact, ok);
  }

  WitnessCase take() { return std::move(case_); }

 private:
  void add(std::string expr, std::string rel, double actual, double expected, double tol,
           bool pass) {
    case_.assertions.push_back({std::move(expr), std::move(rel), actual, expected, tol, pass});
  }

  WitnessCase case_;
};

/// Moves the whole balance of `from` onto `to`, regardless of rank.
WealthDistribution merge_into(const WealthDistribution& x, std::size_t from, std::size_t to) {
  std::vector<double> v = x.vector();
  v[to] += v[from];
  v[from] = 0.0;
  return WealthDistribution(std::move(v));
}

/// Single-actor report reproducing `target` from a hidden singleton.
bool reachable_from_singleton(const WealthDistribution& target) {
  const WealthDistribution hidden{target.total()};
  Matrix r(1, target.size());
  for (std::size_t j = 0; j < target.size(); ++j) r(0, j) = target[j] / target.total();
  return is_pure_sybil(r) && check_conservation(hidden, r, target);
}

WitnessCase egalitarian_case() {
  CaseBuilder b("egalitarian", "richer actor splits evenly; observable is egalitarian");
  const WealthDistribution hidden{5.0, 10.0};
  const Matrix r{{1.0, 0.0, 0.0}, {0.0, 0.5, 0.5}};
  const auto observable = apply_report(hidden, ReportMatrix(r));
  b.same("apply_report((5,10), R) == (5,5,5)", observable, {5.0, 5.0, 5.0});
  b.holds("check_conservation((5,10), R, (5,5,5))", check_conservation(hidden, r, observable));
  b.holds("is_pure_sybil(R)", is_pure_sybil(r));
  b.equal("gini(5,10)", gini(hidden), 1.0 / 6.0);
  b.equal("gini(5,5,5)", gini(observable), 0.0);
  b.greater("gini(5,10) - gini(5,5,5)", gini(hidden) - gini(observable), 0.0);
  b.equal("gap", gini(hidden) - gini(observable), 1.0 / 6.0);
  return b.take();
}

WitnessCase transfer_chain_case() {
  CaseBuilder b("transfer-chain",
                "progressive transfers from a single-actor split strictly lower the gini");
  const double eps = 0.1;
  const WealthDistribution hidden{1.0};
  const auto x0 = apply_report(hidden, ReportMatrix(Matrix{{1.0 - eps, eps}}));
  const auto x1 = transfer(x0, 0, 1, 0.5 - 2.0 * eps);
  const auto x2 = transfer(x1, 0, 1, x1[0] - 0.5);
  b.same("apply_report((1), [[0.9, 0.1]]) == (0.9, 0.1)", x0, {0.9, 0.1});
  b.same("transfer((0.9,0.1), 0, 1, 0.3) == (0.6, 0.4)", x1, {0.6, 0.4});
  b.same("transfer((0.6,0.4), 0, 1, 0.1) == (0.5, 0.5)", x2, {0.5, 0.5});
  b.equal("gini(0.9,0.1)", gini(x0), 0.4);
  b.equal("gini(0.6,0.4)", gini(x1), 0.1);
  b.equal("gini(0.5,0.5)", gini(x2), 0.0);
  b.greater("gini(0.9,0.1) - gini(0.6,0.4)", gini(x0) - gini(x1), 0.0);
  b.greater("gini(0.6,0.4) - gini(0.5,0.5)", gini(x1) - gini(x2), 0.0);
  b.equal("gini(1)", gini(hidden), 0.0);
  b.holds("(0.9,0.1) reachable from (1)", reachable_from_singleton(x0));
  b.holds("(0.6,0.4) reachable from (1)", reachable_from_singleton(x1));
  b.holds("(0.5,0.5) reachable from (1)", reachable_from_singleton(x2));
  return b.take();
}

WitnessCase scale_population_case() {
  CaseBuilder b("scale-population",
                "duplicate, halve and reconcile (5,10) into two Sybil-reachable states");
  const WealthDistribution x{5.0, 10.0};
  const std::size_t k = x.size();
  const auto doubled = duplicate(x);
  const auto halved = scale(doubled, 0.5);
  b.same("duplicate(5,10)", doubled, {5.0, 10.0, 5.0, 10.0});
  b.same("halve(5,10,5,10)", halved, {2.5, 5.0, 2.5, 5.0});
  b.equal("gini(5,10,5,10) - gini(5,10)", gini(doubled) - gini(x), 0.0);
  b.equal("gini(2.5,5,2.5,5) - gini(5,10)", gini(halved) - gini(x), 0.0);

  std::size_t j = 0;
  while (halved[j] == 0.0) ++j;
  auto reconciled = halved;
  for (std::size_t jp = 0; jp < k; ++jp)
    if (jp != j) reconciled = merge_into(reconciled, jp + k, jp);
  b.same("reconciled", reconciled, {2.5, 10.0, 2.5, 0.0});

  const auto s1 = merge_into(reconciled, j + k, j);
  const auto s2 = transfer(s1, j, j + k, s1[j] / 4.0);
  b.same("s1", s1, {5.0, 10.0, 0.0, 0.0});
  b.same("s2", s2, {3.75, 10.0, 1.25, 0.0});
  b.equal("gini(s1)", gini(s1), 7.0 / 12.0);
  b.equal("gini(s2)", gini(s2), 13.0 / 24.0);
  b.differ("gini(s1) vs gini(s2)", gini(s1), gini(s2));
  b.less("gini(s2) - gini(s1)", gini(s2) - gini(s1), 0.0);

  const Matrix r1{{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}};
  const Matrix r2{{0.75, 0.0, 0.25, 0.0}, {0.0, 1.0, 0.0, 0.0}};
  b.holds("s1 reachable from (5,10)", is_pure_sybil(r1) && check_conservation(x, r1, s1));
  b.holds("s2 reachable from (5,10)", is_pure_sybil(r2) && check_conservation(x, r2, s2));
  return b.take();
}

WitnessCase gc_nonconstant_case() {
  CaseBuilder b("gc-nonconstant", "gini takes two distinct values");
  b.equal("gini(1,0)", gini({1.0, 0.0}), 0.5);
  b.equal("gini(1,1)", gini({1.0, 1.0}), 0.0);
  b.differ("gini(1,0) vs gini(1,1)", gini({1.0, 0.0}), gini({1.0, 1.0}));
  return b.take();
}

WitnessCase ge_c0_case() {
  CaseBuilder b("ge-c0", "mean log deviation separates (1,3) from (1,5)");
  const double a = ge(GEParams{0.0}, {1.0, 3.0});
  const double c = ge(GEParams{0.0}, {1.0, 5.0});
  b.equal("ge(0, (1,3))", a, 0.5 * std::log(4.0 / 3.0));
  b.equal("ge(0, (1,5))", c, 0.5 * std::log(9.0 / 5.0));
  b.equal("ge(0, (1,3)) to 6 places", a, 0.143841, 1e-6);
  b.equal("ge(0, (1,5)) to 6 places", c, 0.293893, 1e-6);
  b.differ("ge(0, (1,3)) vs ge(0, (1,5))", a, c);
  return b.take();
}

WitnessCase ge_c1_case() {
  CaseBuilder b("ge-c1", "Theil T on (e/2, 3e/2)");
  const double e = std::numbers::e;
  const double v = ge(GEParams{1.0}, {e / 2.0, 1.5 * e});
  b.equal("ge(1, (e/2, 3e/2))", v, 0.75 * std::log(3.0) - std::log(2.0), 1e-9);
  b.equal("ge(1, (e/2, 3e/2)) to 2 places", v, 0.13, 0.005);
  b.equal("ge(1, (2,2,2))", ge(GEParams{1.0}, {2.0, 2.0, 2.0}), 0.0);
  b.differ("ge(1, (e/2, 3e/2)) vs ge(1, (2,2,2))", v, 0.0);
  return b.take();
}

WitnessCase ge_crest_case() {
  CaseBuilder b("ge-crest", "closed form of ge on (1,3) away from c = 0, 1");
  for (double c : {2.0, -1.0, 0.5}) {
    const std::string cs = format_parameter(c);
    const double closed = (1.0 / (c * (c - 1.0))) * ((1.0 + std::pow(3.0, c)) / std::pow(2.0, c + 1.0) - 1.0);
    const double v = ge(GEParams{c}, {1.0, 3.0});
    b.equal("ge(" + cs + ", (1,3))", v, closed, 1e-9);
    b.differ("ge(" + cs + ", (1,3)) vs ge(" + cs + ", (4,4,4))", v, 0.0);
    b.equal("ge(" + cs + ", (4,4,4))", ge(GEParams{c}, {4.0, 4.0, 4.0}), 0.0);
  }
  return b.take();
}

WitnessCase aggregation_chain_case() {
  CaseBuilder b("aggregation-chain", "progressive condensation of (1,2,3) down to (6)");
  const WealthDistribution x{1.0, 2.0, 3.0};
  const auto y = aggregate(x, AggregationMatrix(Matrix{{1.0, 0.0, 0.0}, {0.0, 1.0, 1.0}}));
  const auto z = aggregate(y, AggregationMatrix(Matrix{{1.0, 1.0}}));
  b.same("aggregate((1,2,3), [[1,0,0],[0,1,1]])", y, {1.0, 5.0});
  b.same("aggregate((1,5), [[1,1]])", z, {6.0});
  b.equal("total(1,5)", y.total(), x.total());
  b.equal("total(6)", z.total(), x.total());
  b.holds("single identity remains", z.size() == 1);
  return b.take();
}

}  // namespace

const std::vector<std::string>& witness_case_ids() {
  static const std::vector<std::string> ids = {
      "egalitarian", "transfer-chain", "scale-population", "gc-nonconstant",
      "ge-c0",       "ge-c1",          "ge-crest",         "aggregation-chain",
  };
  return ids;
}

WitnessCase replay_witness(std::string_view case_id) {
  if (case_id == "egalitarian") return egalitarian_case();
  if (case_id == "transfer-chain") return transfer_chain_case();
  if (case_id == "scale-population") return scale_population_case();
  if (case_id == "gc-nonconstant") return gc_nonconstant_case();
  if (case_id == "ge-c0") return ge_c0_case();
  if (case_id == "ge-c1") return ge_c1_case();
  if (case_id == "ge-crest") return ge_crest_case();
  if (case_id == "aggregation-chain") return aggregation_chain_case();
  throw Error(ErrorCode::UnknownCase, "'" + std::string(case_id) + "'");
}

}  // namespace sybil

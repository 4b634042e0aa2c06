#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sybil/economy.hpp"
#include "sybil/measures.hpp"
#include "sybil/random.hpp"
#include "sybil/tolerance.hpp"

namespace sybil {

enum class Family {
  PureSybil,  // every actor owns a disjoint block of identities
  SplitOne,   // a single actor splits, everyone else reports truthfully
  Collusive,  // identities may be funded by several actors
};

std::string_view family_name(Family family) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;

struct AttackConfig {
  Family family = Family::PureSybil;
  std::size_t identities = 2;
  std::size_t budget = 10000;  // measure evaluations across all restarts
  Seed seed{42};
  std::size_t restarts = 20;
  Tolerance tol;
};

struct AttackResult {
  WealthDistribution hidden{0.0};
  Matrix report;
  WealthDistribution observable{0.0};
  double value_hidden = 0.0;
  double value_observable = 0.0;
  double change = 0.0;      // value_observable - value_hidden
  double distortion = 0.0;  // |change|
  std::size_t evaluations = 0;
  std::size_t restart = 0;  // restart that produced the best report
  Seed seed;
  Family family = Family::PureSybil;
  bool collusive = false;  // some identity is funded by two or more actors
};

/// Multistart hill climbing over report matrices of the given family.
///
/// Restart r draws from seed.derive(r) and receives a fixed share of the
/// budget, so the best distortion never decreases as the budget grows.
/// Throws InfeasibleFamily or InvalidParameter.
AttackResult maximize_distortion(const Measure& m, const WealthDistribution& hidden,
                                 const AttackConfig& cfg);

/// Re-evaluates a stored attack: conservation, family shape and distortion.
struct AttackReplay {
  bool conserves = false;
  bool pure = false;
  double distortion = 0.0;
  bool distortion_matches = false;
};
AttackReplay replay_attack(const Measure& m, const AttackResult& result, Tolerance tol);

struct Assertion {
  std::string expression;
  std::string relation;  // "==", "!=", "<", ">", "holds"
  double actual = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct WitnessCase {
  std::string id;
  std::string description;
  std::vector<Assertion> assertions;

  bool passed() const noexcept;
};

/// Ids of the executable proof constructions, in replay order.
const std::vector<std::string>& witness_case_ids();

/// Throws UnknownCase.
WitnessCase replay_witness(std::string_view case_id);

}  // namespace sybil

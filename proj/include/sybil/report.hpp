#pragma once

#include <string>

#include <json.hpp>

#include "sybil/attack.hpp"
#include "sybil/axioms.hpp"

namespace sybil {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kEpochTimestamp = "1970-01-01T00:00:00Z";

// Doubles are written in shortest round-trip form, so every value parses
// back to the identical bit pattern.

Json to_json(const Tolerance& tol);
Json to_json(const Matrix& m);
Json to_json(const Witness& w);
Json to_json(const Verdict& v);
Json to_json(const AuditReport& report);
Json to_json(const AttackResult& result);
Json to_json(const WitnessCase& c);

// Throw InvalidReport on missing or mistyped fields.
Tolerance tolerance_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
Witness witness_from_json(const Json& j);
Verdict verdict_from_json(const Json& j);
AuditReport audit_from_json(const Json& j);
AttackResult attack_from_json(const Json& j);
WitnessCase witness_case_from_json(const Json& j);

/// Top-level report envelope: version, command, config, results, timestamp.
Json make_document(const std::string& command, Json config, Json results, bool deterministic);

/// Current UTC time as ISO 8601, second resolution.
std::string utc_timestamp();

}  // namespace sybil

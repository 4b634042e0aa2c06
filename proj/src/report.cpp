#include "sybil/report.hpp"

#include <chrono>
#include <ctime>

#include "sybil/error.hpp"

namespace sybil {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidReport, std::string(what) + ": " + e.what());
  }
}

Json status_json(Status s) { return std::string(status_name(s)); }

Status parse_status(const std::string& s) {
  if (s == "falsified") return Status::Falsified;
  if (s == "unfalsified") return Status::Unfalsified;
  throw Error(ErrorCode::InvalidReport, "unknown status '" + s + "'");
}

Mode parse_mode(const std::string& s) {
  if (s == "weak") return Mode::Weak;
  if (s == "strict") return Mode::Strict;
  throw Error(ErrorCode::InvalidReport, "unknown mode '" + s + "'");
}

Axiom parse_axiom(const std::string& s) {
  const auto a = parse_axiom_key(s);
  if (!a) throw Error(ErrorCode::InvalidReport, "unknown axiom '" + s + "'");
  return *a;
}

}  // namespace

Json to_json(const Tolerance& tol) { return Json{{"atol", tol.atol}, {"rtol", tol.rtol}}; }

Tolerance tolerance_from_json(const Json& j) {
  return guarded("tolerance", [&] {
    return Tolerance{j.at("atol").get<double>(), j.at("rtol").get<double>()};
  });
}

Json to_json(const Matrix& m) { return Json(m.to_rows()); }

Matrix matrix_from_json(const Json& j) {
  return guarded("matrix", [&] {
    try {
      return Matrix::from_rows(j.get<std::vector<std::vector<double>>>());
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidReport, e.what());
    }
  });
}

Json to_json(const Witness& w) {
  Json j;
  j["relation"] = std::string(relation_name(w.relation));
  j["mode"] = w.mode == Mode::Weak ? "weak" : "strict";
  j["trial"] = w.trial;
  j["label"] = w.label;
  j["first"] = w.first;
  if (!w.second.empty()) j["second"] = w.second;
  if (!w.extra.empty()) j["extra"] = w.extra;
  if (w.alpha) j["alpha"] = *w.alpha;
  if (!w.permutation.empty()) j["permutation"] = w.permutation;
  if (w.step) j["step"] = Json{{"from", w.step->from}, {"to", w.step->to}, {"delta", w.step->delta}};
  if (w.matrix) j["matrix"] = to_json(*w.matrix);
  j["first_value"] = w.first_value;
  j["second_value"] = w.second_value;
  j["gap"] = w.gap;
  return j;
}

Witness witness_from_json(const Json& j) {
  return guarded("witness", [&] {
    Witness w;
    const auto relation = parse_relation(j.at("relation").get<std::string>());
    if (!relation) throw Error(ErrorCode::InvalidReport, "unknown relation");
    w.relation = *relation;
    w.mode = parse_mode(j.at("mode").get<std::string>());
    w.trial = j.at("trial").get<std::size_t>();
    w.label = j.value("label", std::string{});
    w.first = j.at("first").get<std::vector<double>>();
    if (j.contains("second")) w.second = j["second"].get<std::vector<double>>();
    if (j.contains("extra")) w.extra = j["extra"].get<std::vector<double>>();
    if (j.contains("alpha")) w.alpha = j["alpha"].get<double>();
    if (j.contains("permutation")) w.permutation = j["permutation"].get<std::vector<std::size_t>>();
    if (j.contains("step")) {
      const auto& s = j["step"];
      w.step = TransferStep{s.at("from").get<std::size_t>(), s.at("to").get<std::size_t>(),
                            s.at("delta").get<double>()};
    }
    if (j.contains("matrix")) w.matrix = matrix_from_json(j["matrix"]);
    w.first_value = j.at("first_value").get<double>();
    w.second_value = j.at("second_value").get<double>();
    w.gap = j.at("gap").get<double>();
    return w;
  });
}

Json to_json(const Verdict& v) {
  Json j;
  j["status"] = status_json(v.status);
  j["witness"] = v.witness ? to_json(*v.witness) : Json(nullptr);
  j["trials"] = v.trials;
  j["evaluated"] = v.evaluated;
  j["domain_errors"] = v.domain_errors;
  j["tolerance"] = to_json(v.tolerance);
  j["seed"] = v.seed.master;
  j["note"] = v.note;
  return j;
}

Verdict verdict_from_json(const Json& j) {
  return guarded("verdict", [&] {
    Verdict v;
    v.status = parse_status(j.at("status").get<std::string>());
    if (!j.at("witness").is_null()) v.witness = witness_from_json(j["witness"]);
    v.trials = j.at("trials").get<std::size_t>();
    v.evaluated = j.value("evaluated", std::size_t{0});
    v.domain_errors = j.value("domain_errors", std::size_t{0});
    v.tolerance = tolerance_from_json(j.at("tolerance"));
    v.seed = Seed{j.at("seed").get<std::uint64_t>()};
    v.note = j.value("note", std::string{});
    return v;
  });
}

Json to_json(const AuditReport& report) {
  Json axioms = Json::object();
  for (const auto& o : report.outcomes) {
    Json entry = o.verdict ? to_json(*o.verdict) : Json::object();
    if (!o.error.empty()) entry["error"] = o.error;
    axioms[std::string(axiom_key(o.axiom))] = std::move(entry);
  }
  Json expected = Json::object();
  for (Axiom a : all_axioms()) {
    const auto it = report.expected.find(a);
    if (it != report.expected.end()) expected[std::string(axiom_key(a))] = status_json(it->second);
  }
  Json mismatches = Json::array();
  for (Axiom a : report.mismatches) mismatches.push_back(std::string(axiom_key(a)));
  return Json{{"measure", report.measure},
              {"axioms", std::move(axioms)},
              {"expected", std::move(expected)},
              {"mismatches", std::move(mismatches)}};
}

AuditReport audit_from_json(const Json& j) {
  return guarded("audit", [&] {
    AuditReport report;
    report.measure = j.at("measure").get<std::string>();
    for (const auto& [key, entry] : j.at("axioms").items()) {
      AxiomOutcome o;
      o.axiom = parse_axiom(key);
      if (entry.contains("status")) o.verdict = verdict_from_json(entry);
      o.error = entry.value("error", std::string{});
      report.outcomes.push_back(std::move(o));
    }
    for (const auto& [key, status] : j.at("expected").items())
      report.expected[parse_axiom(key)] = parse_status(status.get<std::string>());
    for (const auto& key : j.at("mismatches")) report.mismatches.push_back(parse_axiom(key.get<std::string>()));
    return report;
  });
}

Json to_json(const AttackResult& r) {
  return Json{{"family", std::string(family_name(r.family))},
              {"hidden", r.hidden.vector()},
              {"report", to_json(r.report)},
              {"observable", r.observable.vector()},
              {"value_hidden", r.value_hidden},
              {"value_observable", r.value_observable},
              {"change", r.change},
              {"distortion", r.distortion},
              {"evaluations", r.evaluations},
              {"restart", r.restart},
              {"seed", r.seed.master},
              {"collusive", r.collusive}};
}

AttackResult attack_from_json(const Json& j) {
  return guarded("attack", [&] {
    AttackResult r;
    const auto family = parse_family(j.at("family").get<std::string>());
    if (!family) throw Error(ErrorCode::InvalidReport, "unknown family");
    r.family = *family;
    r.hidden = WealthDistribution(j.at("hidden").get<std::vector<double>>());
    r.report = matrix_from_json(j.at("report"));
    r.observable = WealthDistribution(j.at("observable").get<std::vector<double>>());
    r.value_hidden = j.at("value_hidden").get<double>();
    r.value_observable = j.at("value_observable").get<double>();
    r.change = j.at("change").get<double>();
    r.distortion = j.at("distortion").get<double>();
    r.evaluations = j.at("evaluations").get<std::size_t>();
    r.restart = j.at("restart").get<std::size_t>();
    r.seed = Seed{j.at("seed").get<std::uint64_t>()};
    r.collusive = j.at("collusive").get<bool>();
    return r;
  });
}

Json to_json(const WitnessCase& c) {
  Json assertions = Json::array();
  for (const auto& a : c.assertions) {
    assertions.push_back(Json{{"expression", a.expression},
                              {"relation", a.relation},
                              {"actual", a.actual},
                              {"expected", a.expected},
                              {"tolerance", a.tolerance},
                              {"pass", a.pass}});
  }
  return Json{{"case", c.id},
              {"description", c.description},
              {"pass", c.passed()},
              {"assertions", std::move(assertions)}};
}

WitnessCase witness_case_from_json(const Json& j) {
  return guarded("witness case", [&] {
    WitnessCase c;
    c.id = j.at("case").get<std::string>();
    c.description = j.value("description", std::string{});
    for (const auto& a : j.at("assertions")) {
      c.assertions.push_back({a.at("expression").get<std::string>(),
                              a.at("relation").get<std::string>(), a.at("actual").get<double>(),
                              a.at("expected").get<double>(), a.at("tolerance").get<double>(),
                              a.at("pass").get<bool>()});
    }
    return c;
  });
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json make_document(const std::string& command, Json config, Json results, bool deterministic) {
  return Json{{"version", kToolVersion},
              {"command", command},
              {"config", std::move(config)},
              {"results", std::move(results)},
              {"timestamp", deterministic ? std::string(kEpochTimestamp) : utc_timestamp()}};
}

}  // namespace sybil

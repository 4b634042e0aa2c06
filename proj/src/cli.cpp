#include "sybil/cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sybil/attack.hpp"
#include "sybil/axioms.hpp"
#include "sybil/dataset.hpp"
#include "sybil/error.hpp"
#include "sybil/measures.hpp"
#include "sybil/report.hpp"

namespace sybil {

namespace {

constexpr int kOk = 0;
constexpr int kExpectationFailed = 1;
constexpr int kUsage = 2;

struct SharedOptions {
  std::uint64_t seed = 42;
  double atol = 1e-12;
  double rtol = 1e-9;
  std::size_t trials = 1000;
  std::string dims = "2..8";
  std::string json_path;
  bool deterministic = false;

  Tolerance tolerance() const { return Tolerance{atol, rtol}; }
};

std::pair<std::size_t, std::size_t> parse_dims(const std::string& text) {
  const auto sep = text.find("..");
  std::size_t lo = 0;
  std::size_t hi = 0;
  const auto read = [](std::string_view s, std::size_t& v) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && res.ec == std::errc{} && res.ptr == s.data() + s.size();
  };
  const std::string_view view(text);
  if (sep == std::string::npos || !read(view.substr(0, sep), lo) || !read(view.substr(sep + 2), hi) ||
      lo == 0 || lo > hi) {
    throw Error(ErrorCode::InvalidParameter, "--dims expects lo..hi with 1 <= lo <= hi, got '" + text + "'");
  }
  return {lo, hi};
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first != std::string::npos) items.push_back(item.substr(first, last - first + 1));
  }
  return items;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  for (const auto& item : split_list(text)) {
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
      throw Error(ErrorCode::ParseError, "'" + item + "' is not a number");
    }
    values.push_back(v);
  }
  return values;
}

Json config_json(const SharedOptions& o) {
  const auto [lo, hi] = parse_dims(o.dims);
  return Json{{"seed", o.seed},
              {"atol", o.atol},
              {"rtol", o.rtol},
              {"trials", o.trials},
              {"dims", Json::array({lo, hi})}};
}

void emit(const Json& doc, const SharedOptions& o, std::ostream& out, bool to_stdout) {
  const std::string text = doc.dump(2) + "\n";
  if (to_stdout) out << text;
  if (!o.json_path.empty()) {
    std::ofstream file(o.json_path, std::ios::binary);
    if (!file) throw Error(ErrorCode::FileNotFound, "cannot write " + o.json_path);
    file << text;
  }
}

std::string format_cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// --------------------------------------------------------------------------

struct ComputeOptions {
  std::string input;
  std::string format = "long";
  std::string measures;
};

int cmd_compute(const ComputeOptions& c, const SharedOptions& o, std::ostream& out) {
  if (c.format != "long" && c.format != "row") {
    throw Error(ErrorCode::InvalidParameter, "--format must be long or row");
  }
  const auto ids = split_list(c.measures);
  if (ids.empty()) throw Error(ErrorCode::UnknownMeasureId, "no measures given");
  std::vector<Measure> measures;
  for (const auto& id : ids) measures.push_back(parse_measure(id));
  const Dataset data =
      parse_dataset(c.input, c.format == "long" ? DatasetFormat::Long : DatasetFormat::Row);

  out << "group";
  for (const auto& id : ids) out << ',' << id;
  out << '\n';

  Json groups = Json::array();
  for (const auto& g : data.groups) {
    out << g.name;
    Json cells = Json::object();
    for (std::size_t k = 0; k < measures.size(); ++k) {
      try {
        const double v = measures[k](g.wealth);
        out << ',' << format_cell(v);
        cells[ids[k]] = Json{{"value", v}, {"error", nullptr}};
      } catch (const MeasureDomainError& e) {
        out << ",null";
        cells[ids[k]] = Json{{"value", nullptr}, {"error", std::string(error_name(e.code()))},
                             {"detail", e.what()}};
      }
    }
    out << '\n';
    groups.push_back(Json{{"group", g.name}, {"wealth", g.wealth.vector()}, {"values", std::move(cells)}});
  }

  Json config = config_json(o);
  config["input"] = c.input;
  config["format"] = c.format;
  config["measures"] = ids;
  emit(make_document("compute", std::move(config), Json{{"groups", std::move(groups)}},
                     o.deterministic),
       o, out, false);
  return kOk;
}

// --------------------------------------------------------------------------

struct AuditOptions {
  std::string measure;
  std::optional<std::size_t> decomposition_budget;
  bool no_structured = false;
};

int cmd_audit(const AuditOptions& a, const SharedOptions& o, std::ostream& out) {
  const Measure m = parse_measure(a.measure);
  const auto [lo, hi] = parse_dims(o.dims);
  AuditConfig cfg;
  cfg.search.trials = o.trials;
  cfg.search.seed = Seed{o.seed};
  cfg.search.tol = o.tolerance();
  cfg.search.min_dim = lo;
  cfg.search.max_dim = hi;
  cfg.search.structured = !a.no_structured;
  cfg.decomposition_budget = a.decomposition_budget;
  const AuditReport report = run_audit(m, cfg);

  Json config = config_json(o);
  config["measure"] = a.measure;
  config["structured"] = cfg.search.structured;
  config["decomposition_budget"] = cfg.decomposition_budget.value_or(kDefaultDecompositionBudget);
  emit(make_document("audit", std::move(config), to_json(report), o.deterministic), o, out, true);
  return report.mismatches.empty() ? kOk : kExpectationFailed;
}

// --------------------------------------------------------------------------

struct AttackOptions {
  std::string measure;
  std::string hidden;
  std::string family = "pure-sybil";
  std::optional<std::size_t> identities;
  std::size_t budget = 10000;
  std::size_t restarts = 20;
};

int cmd_attack(const AttackOptions& a, const SharedOptions& o, std::ostream& out) {
  const Measure m = parse_measure(a.measure);
  const auto family = parse_family(a.family);
  if (!family) throw Error(ErrorCode::InvalidParameter, "unknown family '" + a.family + "'");
  const WealthDistribution hidden(parse_values(a.hidden));
  AttackConfig cfg;
  cfg.family = *family;
  cfg.identities = a.identities.value_or(hidden.size() + 1);
  cfg.budget = a.budget;
  cfg.restarts = a.restarts;
  cfg.seed = Seed{o.seed};
  cfg.tol = o.tolerance();
  const AttackResult result = maximize_distortion(m, hidden, cfg);

  Json config = config_json(o);
  config["measure"] = a.measure;
  config["family"] = a.family;
  config["identities"] = cfg.identities;
  config["budget"] = cfg.budget;
  config["restarts"] = cfg.restarts;
  emit(make_document("attack", std::move(config), to_json(result), o.deterministic), o, out, true);
  return kOk;
}

// --------------------------------------------------------------------------

int cmd_witness(const std::string& case_id, const SharedOptions& o, std::ostream& out) {
  std::vector<WitnessCase> cases;
  if (case_id == "all") {
    for (const auto& id : witness_case_ids()) cases.push_back(replay_witness(id));
  } else {
    cases.push_back(replay_witness(case_id));
  }
  Json items = Json::array();
  std::size_t passed = 0;
  for (const auto& c : cases) {
    if (c.passed()) ++passed;
    items.push_back(to_json(c));
  }
  Json config = config_json(o);
  config["case"] = case_id;
  Json results{{"passed", passed}, {"total", cases.size()}, {"cases", std::move(items)}};
  emit(make_document("witness", std::move(config), std::move(results), o.deterministic), o, out,
       true);
  return passed == cases.size() ? kOk : kExpectationFailed;
}

// --------------------------------------------------------------------------

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidReport, path + ": " + e.what());
  }
}

Json replay_audit(const Json& results, bool& ok) {
  const AuditReport report = audit_from_json(results);
  const Measure m = parse_measure(report.measure);
  Json items = Json::array();
  for (const auto& o : report.outcomes) {
    if (!o.verdict || o.verdict->status != Status::Falsified) continue;
    if (!o.verdict->witness) {
      ok = false;
      items.push_back(Json{{"axiom", std::string(axiom_key(o.axiom))}, {"reproduced", false},
                           {"detail", "falsified verdict without witness"}});
      continue;
    }
    const auto r = replay_counterexample(m, *o.verdict->witness, o.verdict->tolerance);
    ok = ok && r.reproduced;
    items.push_back(Json{{"axiom", std::string(axiom_key(o.axiom))},
                         {"reproduced", r.reproduced},
                         {"first_value", r.first_value},
                         {"second_value", r.second_value},
                         {"gap", r.gap},
                         {"detail", r.detail}});
  }
  return items;
}

Json replay_attack_doc(const Json& doc, bool& ok) {
  const AttackResult result = attack_from_json(doc.at("results"));
  const Measure m = parse_measure(doc.at("config").at("measure").get<std::string>());
  const Tolerance tol = tolerance_from_json(doc.at("config"));
  const auto r = replay_attack(m, result, tol);
  const bool pure_ok = result.family == Family::Collusive || r.pure;
  ok = r.conserves && pure_ok && r.distortion_matches;
  return Json::array({Json{{"conserves", r.conserves},
                           {"pure", r.pure},
                           {"distortion", r.distortion},
                           {"distortion_matches", r.distortion_matches},
                           {"reproduced", ok}}});
}

Json replay_witness_doc(const Json& results, bool& ok) {
  Json items = Json::array();
  for (const auto& stored_json : results.at("cases")) {
    const WitnessCase stored = witness_case_from_json(stored_json);
    const WitnessCase fresh = replay_witness(stored.id);
    bool same = fresh.assertions.size() == stored.assertions.size();
    for (std::size_t i = 0; same && i < fresh.assertions.size(); ++i) {
      const auto& a = fresh.assertions[i];
      const auto& b = stored.assertions[i];
      same = a.expression == b.expression && a.pass == b.pass &&
             Tolerance{}.equal(a.actual, b.actual);
    }
    const bool reproduced = same && fresh.passed();
    ok = ok && reproduced;
    items.push_back(Json{{"case", stored.id}, {"pass", fresh.passed()}, {"reproduced", reproduced}});
  }
  return items;
}

Json replay_compute(const Json& results, const Tolerance& tol, bool& ok) {
  Json items = Json::array();
  for (const auto& g : results.at("groups")) {
    const WealthDistribution w(g.at("wealth").get<std::vector<double>>());
    for (const auto& [id, cell] : g.at("values").items()) {
      const Measure m = parse_measure(id);
      bool reproduced = false;
      try {
        const double v = m(w);
        reproduced = cell.at("value").is_number() && tol.equal(v, cell["value"].get<double>());
      } catch (const MeasureDomainError& e) {
        reproduced = cell.at("value").is_null() &&
                     cell.at("error").get<std::string>() == error_name(e.code());
      }
      ok = ok && reproduced;
      items.push_back(Json{{"group", g.at("group")}, {"measure", id}, {"reproduced", reproduced}});
    }
  }
  return items;
}

int cmd_replay(const std::string& path, const SharedOptions& o, std::ostream& out) {
  const Json doc = read_json_file(path);
  std::string command;
  try {
    command = doc.at("command").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidReport, path + ": " + e.what());
  }

  bool ok = true;
  Json items;
  try {
    if (command == "audit") {
      items = replay_audit(doc.at("results"), ok);
    } else if (command == "attack") {
      items = replay_attack_doc(doc, ok);
    } else if (command == "witness") {
      items = replay_witness_doc(doc.at("results"), ok);
    } else if (command == "compute") {
      items = replay_compute(doc.at("results"), tolerance_from_json(doc.at("config")), ok);
    } else {
      throw Error(ErrorCode::InvalidReport, "cannot replay command '" + command + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidReport, path + ": " + e.what());
  }

  Json config = config_json(o);
  config["report"] = path;
  Json results{{"source_command", command}, {"reproduced", ok}, {"items", std::move(items)}};
  emit(make_document("replay", std::move(config), std::move(results), o.deterministic), o, out,
       true);
  return ok ? kOk : kExpectationFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audit inequality measures against their axioms and search for Sybil "
               "manipulations that distort them.",
               "sybil-audit"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  SharedOptions shared;
  app.add_option("--seed", shared.seed, "Master seed")->capture_default_str();
  app.add_option("--atol", shared.atol, "Absolute tolerance")->capture_default_str();
  app.add_option("--rtol", shared.rtol, "Relative tolerance")->capture_default_str();
  app.add_option("--trials", shared.trials, "Trials per falsifier")->capture_default_str();
  app.add_option("--dims", shared.dims, "Sampled distribution lengths, lo..hi")->capture_default_str();
  app.add_option("--json", shared.json_path, "Also write the JSON report to this path");
  app.add_flag("--deterministic", shared.deterministic, "Zero the report timestamp");
  std::string top_replay;
  app.add_option("--replay", top_replay, "Re-check every witness stored in a JSON report");

  ComputeOptions compute;
  auto* c = app.add_subcommand("compute", "Evaluate measures over a dataset; CSV table on stdout");
  c->add_option("--input", compute.input, "Dataset path")->required();
  c->add_option("--format", compute.format, "long or row")->capture_default_str();
  c->add_option("--measures", compute.measures, "Comma-separated measure ids")->required();

  AuditOptions audit;
  auto* a = app.add_subcommand("audit", "Run every axiom falsifier on one measure");
  a->add_option("--measure", audit.measure, "Measure id")->required();
  a->add_option("--decomposition-budget", audit.decomposition_budget,
                "Attempts for the decomposability search");
  a->add_flag("--no-structured", audit.no_structured, "Skip the structured probes");

  AttackOptions attack;
  auto* k = app.add_subcommand("attack", "Maximize measure distortion over report matrices");
  k->add_option("--measure", attack.measure, "Measure id")->required();
  k->add_option("--hidden", attack.hidden, "Hidden wealth, comma-separated")->required();
  k->add_option("--family", attack.family, "pure-sybil, split-one or collusive")
      ->capture_default_str();
  k->add_option("--identities", attack.identities, "Observable identities (default: actors + 1)");
  k->add_option("--budget", attack.budget, "Measure evaluations")->capture_default_str();
  k->add_option("--restarts", attack.restarts, "Hill-climbing restarts")->capture_default_str();

  std::string case_id;
  auto* w = app.add_subcommand("witness", "Replay the executable proof constructions");
  w->add_option("--case", case_id, "Case id or 'all'")->required();

  std::string replay_path;
  auto* r = app.add_subcommand("replay", "Re-check every witness stored in a JSON report");
  r->add_option("report", replay_path, "Report path");
  r->add_option("--replay", replay_path, "Report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c) return cmd_compute(compute, shared, out);
    if (*a) return cmd_audit(audit, shared, out);
    if (*k) return cmd_attack(attack, shared, out);
    if (*w) return cmd_witness(case_id, shared, out);
    if (*r) {
      if (replay_path.empty()) replay_path = top_replay;
      if (replay_path.empty()) throw Error(ErrorCode::InvalidParameter, "replay needs a report path");
      return cmd_replay(replay_path, shared, out);
    }
    if (!top_replay.empty()) return cmd_replay(top_replay, shared, out);
    err << app.help();
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace sybil

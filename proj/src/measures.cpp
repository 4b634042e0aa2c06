#include "sybil/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "sybil/error.hpp"

namespace sybil {

namespace {

// Every symmetric measure below evaluates on the ascending-sorted copy, which
// makes the result bit-identical under any permutation of the input.
std::vector<double> sorted_values(const WealthDistribution& x) {
  std::vector<double> v = x.vector();
  std::sort(v.begin(), v.end());
  return v;
}

double sorted_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v) s += e;
  return s;
}

void require_positive_total(double total, std::string_view measure) {
  if (!(total > 0.0)) {
    throw MeasureDomainError(ErrorCode::ZeroTotalWealth,
                             std::string(measure) + " needs positive total wealth");
  }
}

void require_positive_entries(const WealthDistribution& x, ErrorCode code,
                              std::string_view measure) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      throw MeasureDomainError(code,
                               std::string(measure) + ": entry " + std::to_string(i) + " is zero",
                               i);
    }
  }
}

}  // namespace

double gini(const WealthDistribution& x) {
  const auto v = sorted_values(x);
  const double total = sorted_sum(v);
  require_positive_total(total, "gini");
  if (v.front() == v.back()) return 0.0;
  // sum_i sum_j |x_i - x_j| = 2 sum_i (2i - k - 1) x_(i) over the sorted order.
  const auto k = static_cast<double>(v.size());
  double weighted = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    weighted += (2.0 * static_cast<double>(i + 1) - k - 1.0) * v[i];
  }
  return weighted / (k * total);
}

double ge(GEParams params, const WealthDistribution& x) {
  const double c = params.c;
  if (!std::isfinite(c)) throw Error(ErrorCode::InvalidParameter, "GE exponent must be finite");
  const auto v = sorted_values(x);
  const double total = sorted_sum(v);
  require_positive_total(total, "ge");
  if (c <= 0.0) require_positive_entries(x, ErrorCode::ZeroEntryForNonpositiveC, "ge");
  if (v.front() == v.back()) return 0.0;

  const auto k = static_cast<double>(v.size());
  const double mu = total / k;
  double acc = 0.0;
  if (c == 1.0) {
    for (double e : v) {
      const double r = e / mu;
      if (r > 0.0) acc += r * std::log(r);
    }
    return acc / k;
  }
  if (c == 0.0) {
    for (double e : v) acc += std::log(mu / e);
    return acc / k;
  }
  // r^c - 1 as expm1(c ln r); for r = 0 and c > 0 this is exactly -1.
  for (double e : v) acc += std::expm1(c * std::log(e / mu));
  return acc / (k * c * (c - 1.0));
}

double theil_t(const WealthDistribution& x) { return ge(GEParams{1.0}, x); }

double theil_l(const WealthDistribution& x) {
  require_positive_entries(x, ErrorCode::ZeroEntryForMeasure, "theil-l");
  return ge(GEParams{0.0}, x);
}

double coefficient_of_variation(const WealthDistribution& x) {
  const auto v = sorted_values(x);
  const double total = sorted_sum(v);
  require_positive_total(total, "cv");
  if (v.front() == v.back()) return 0.0;
  const auto k = static_cast<double>(v.size());
  const double mu = total / k;
  double ss = 0.0;
  for (double e : v) ss += (e - mu) * (e - mu);
  return std::sqrt(ss / k) / mu;
}

double hhi(const WealthDistribution& x) {
  const auto v = sorted_values(x);
  const double total = sorted_sum(v);
  require_positive_total(total, "hhi");
  double acc = 0.0;
  for (double e : v) {
    const double share = e / total;
    acc += share * share;
  }
  return acc;
}

double atkinson(double epsilon, const WealthDistribution& x) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw Error(ErrorCode::InvalidParameter, "Atkinson aversion must be finite and positive");
  }
  const auto v = sorted_values(x);
  const double total = sorted_sum(v);
  require_positive_total(total, "atkinson");
  require_positive_entries(x, ErrorCode::ZeroEntryForMeasure, "atkinson");
  if (v.front() == v.back()) return 0.0;
  const auto k = static_cast<double>(v.size());
  const double mu = total / k;
  if (epsilon == 1.0) {
    double log_sum = 0.0;
    for (double e : v) log_sum += std::log(e);
    return 1.0 - std::exp(log_sum / k) / mu;
  }
  const double p = 1.0 - epsilon;
  double acc = 0.0;
  for (double e : v) acc += std::pow(e, p);
  return 1.0 - std::pow(acc / k, 1.0 / p) / mu;
}

std::string format_parameter(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

Measure gini_measure() { return Measure("gini", [](const WealthDistribution& x) { return gini(x); }); }

Measure ge_measure(GEParams params) {
  if (!std::isfinite(params.c)) {
    throw Error(ErrorCode::InvalidParameter, "GE exponent must be finite");
  }
  return Measure("ge:" + format_parameter(params.c),
                 [params](const WealthDistribution& x) { return ge(params, x); });
}

Measure theil_t_measure() {
  return Measure("theil-t", [](const WealthDistribution& x) { return theil_t(x); });
}

Measure theil_l_measure() {
  return Measure("theil-l", [](const WealthDistribution& x) { return theil_l(x); });
}

Measure cv_measure() {
  return Measure("cv", [](const WealthDistribution& x) { return coefficient_of_variation(x); });
}

Measure hhi_measure() { return Measure("hhi", [](const WealthDistribution& x) { return hhi(x); }); }

Measure atkinson_measure(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw Error(ErrorCode::InvalidParameter, "Atkinson aversion must be finite and positive");
  }
  return Measure("atkinson:" + format_parameter(epsilon),
                 [epsilon](const WealthDistribution& x) { return atkinson(epsilon, x); });
}

Measure constant_measure(double c) {
  return Measure("const:" + format_parameter(c), [c](const WealthDistribution&) { return c; });
}

Measure sum_dependent_measure(std::function<double(double)> g, std::string g_id) {
  return Measure(std::move(g_id),
                 [g = std::move(g)](const WealthDistribution& x) { return g(x.total()); });
}

Measure sum_measure() {
  return sum_dependent_measure([](double s) { return s; }, "sum");
}

Measure diagnostic(Diagnostic which) {
  switch (which) {
    case Diagnostic::FirstElement:
      return Measure("diag:first", [](const WealthDistribution& x) { return x[0]; });
    case Diagnostic::MaxElement:
      return Measure("diag:max", [](const WealthDistribution& x) {
        return *std::max_element(x.values().begin(), x.values().end());
      });
  }
  throw Error(ErrorCode::UnknownMeasureId, "unknown diagnostic");
}

namespace {

double parse_real(std::string_view text, std::string_view id) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::UnknownMeasureId,
                "bad parameter '" + std::string(text) + "' in '" + std::string(id) + "'");
  }
  return value;
}

}  // namespace

Measure parse_measure(std::string_view id) {
  if (id == "gini") return gini_measure();
  if (id == "theil-t") return theil_t_measure();
  if (id == "theil-l") return theil_l_measure();
  if (id == "cv") return cv_measure();
  if (id == "hhi") return hhi_measure();
  if (id == "sum") return sum_measure();
  if (id == "diag:first") return diagnostic(Diagnostic::FirstElement);
  if (id == "diag:max") return diagnostic(Diagnostic::MaxElement);

  const auto colon = id.find(':');
  if (colon != std::string_view::npos) {
    const auto head = id.substr(0, colon);
    const auto tail = id.substr(colon + 1);
    if (head == "ge") return ge_measure(GEParams{parse_real(tail, id)});
    if (head == "atkinson") return atkinson_measure(parse_real(tail, id));
    if (head == "const") return constant_measure(parse_real(tail, id));
  }
  throw Error(ErrorCode::UnknownMeasureId, "'" + std::string(id) + "'");
}

std::vector<std::string> catalog_ids() {
  return {"gini", "ge:-1",   "ge:0",       "ge:0.5",  "ge:1",  "ge:2",       "cv",
          "hhi",  "atkinson:0.5", "const:0", "const:3", "sum", "diag:first", "diag:max"};
}

}  // namespace sybil

#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sybil/economy.hpp"

namespace sybil {

/// A named, pure function from a wealth distribution to a real number.
///
/// Evaluation outside the declared domain throws MeasureDomainError. Copies
/// share nothing mutable, so a Measure may be evaluated from several threads.
class Measure {
 public:
  using Eval = std::function<double(const WealthDistribution&)>;

  Measure(std::string id, Eval eval) : id_(std::move(id)), eval_(std::move(eval)) {}

  const std::string& id() const noexcept { return id_; }
  double operator()(const WealthDistribution& x) const { return eval_(x); }

 private:
  std::string id_;
  Eval eval_;
};

struct GEParams {
  double c = 2.0;
};

/// (sum_i sum_j |x_i - x_j|) / (2 k sum_i x_i). Throws ZeroTotalWealth.
double gini(const WealthDistribution& x);

/// Generalized entropy index in its canonical (F = identity) form; branches
/// on c == 0 and c == 1 exactly. For c <= 0 every entry must be positive.
double ge(GEParams params, const WealthDistribution& x);

double theil_t(const WealthDistribution& x);
double theil_l(const WealthDistribution& x);
/// Population standard deviation over the mean.
double coefficient_of_variation(const WealthDistribution& x);
/// Herfindahl-Hirschman index of wealth shares.
double hhi(const WealthDistribution& x);
double atkinson(double epsilon, const WealthDistribution& x);

Measure gini_measure();
Measure ge_measure(GEParams params);
Measure theil_t_measure();
Measure theil_l_measure();
Measure cv_measure();
Measure hhi_measure();
Measure atkinson_measure(double epsilon);

Measure constant_measure(double c);

/// g(sum_i x_i). The caller promises g is injective and monotone on [0, inf).
Measure sum_dependent_measure(std::function<double(double)> g, std::string g_id);
/// sum_dependent_measure with g = identity, exposed under id "sum".
Measure sum_measure();

enum class Diagnostic { FirstElement, MaxElement };
Measure diagnostic(Diagnostic which);

/// Parses the measure grammar: gini, ge:<c>, theil-t, theil-l, cv, hhi,
/// atkinson:<eps>, const:<c>, sum, diag:first, diag:max.
/// Throws UnknownMeasureId or InvalidParameter.
Measure parse_measure(std::string_view id);

/// Shortest round-trip text for a parameter ("0.5", "-1", "2").
std::string format_parameter(double value);

/// Measures used by the catalog-wide meta tests.
std::vector<std::string> catalog_ids();

}  // namespace sybil

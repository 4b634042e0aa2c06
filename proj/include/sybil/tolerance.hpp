#pragma once

#include <algorithm>
#include <cmath>

namespace sybil {

/// Mixed absolute/relative tolerance: |a - b| <= atol + rtol * max(|a|, |b|).
struct Tolerance {
  double atol = 1e-12;
  double rtol = 1e-9;

  double bound(double a, double b) const noexcept {
    return atol + rtol * std::max(std::abs(a), std::abs(b));
  }

  bool equal(double a, double b) const noexcept { return std::abs(a - b) <= bound(a, b); }

  Tolerance tightened(double factor) const noexcept { return {atol / factor, rtol / factor}; }
};

}  // namespace sybil

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "sybil/random.hpp"
#include "sybil/tolerance.hpp"

namespace sybil {

/// Finite, non-negative wealth vector of length >= 1. Immutable once built.
class WealthDistribution {
 public:
  /// Throws EmptyDistribution, NegativeWealth or NonFiniteWealth.
  explicit WealthDistribution(std::vector<double> values);
  WealthDistribution(std::initializer_list<double> values)
      : WealthDistribution(std::vector<double>(values)) {}

  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  double total() const noexcept { return total_; }
  double mean() const noexcept { return total_ / static_cast<double>(values_.size()); }

  friend bool operator==(const WealthDistribution& a, const WealthDistribution& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<double> values_;
  double total_ = 0.0;
};

WealthDistribution make_distribution(std::span<const double> values);

/// Dense row-major matrix with no structural invariant of its own.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Throws InvalidMatrix on ragged or empty input.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  double row_sum(std::size_t r) const;
  double col_sum(std::size_t c) const;
  std::vector<std::vector<double>> to_rows() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Non-negative n x m matrix whose rows sum to 1: entry (i, j) is the fraction
/// of actor i's wealth reported under identity j.
class ReportMatrix {
 public:
  /// Throws InvalidMatrix if an entry is negative or a row sum is off by more
  /// than `tol`.
  explicit ReportMatrix(Matrix entries, Tolerance tol = {});

  static ReportMatrix identity(std::size_t n);

  const Matrix& matrix() const noexcept { return entries_; }
  std::size_t actors() const noexcept { return entries_.rows(); }
  std::size_t identities() const noexcept { return entries_.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

 private:
  Matrix entries_;
};

/// Non-negative (k-1) x k matrix whose columns sum to 1, so the product with
/// any length-k distribution preserves its total.
class AggregationMatrix {
 public:
  explicit AggregationMatrix(Matrix entries, Tolerance tol = {});

  const Matrix& matrix() const noexcept { return entries_; }
  /// Length of the distributions this matrix accepts.
  std::size_t input_size() const noexcept { return entries_.cols(); }

 private:
  Matrix entries_;
};

/// v_j = sum_i R(i, j) * w_i.
WealthDistribution apply_report(const WealthDistribution& hidden, const ReportMatrix& r);

/// Both wealth-conservation conditions: rows of `r` sum to one and the column
/// equation reproduces `observable`.
bool check_conservation(const WealthDistribution& hidden, const Matrix& r,
                        const WealthDistribution& observable, Tolerance tol = {});
bool check_conservation(const WealthDistribution& hidden, const ReportMatrix& r,
                        const WealthDistribution& observable, Tolerance tol = {});

/// True iff no identity receives a strictly positive share from two actors.
bool is_pure_sybil(const Matrix& r);
inline bool is_pure_sybil(const ReportMatrix& r) { return is_pure_sybil(r.matrix()); }

/// Block-structured pure-Sybil report: actor i spreads its wealth over its own
/// `identities_per_actor[i]` consecutive columns with flat-Dirichlet fractions.
ReportMatrix random_pure_sybil(const WealthDistribution& hidden,
                               std::span<const std::size_t> identities_per_actor, Seed seed);

/// Random (k-1) x k column-stochastic matrix, each column flat-Dirichlet.
AggregationMatrix random_aggregation(std::size_t k, Seed seed);

WealthDistribution aggregate(const WealthDistribution& x, const AggregationMatrix& a);

/// Moves `delta` from the richer entry `from` to the poorer entry `to`.
/// Requires x[to] < x[from] and 0 < delta <= (x[from] - x[to]) / 2.
WealthDistribution transfer(const WealthDistribution& x, std::size_t from, std::size_t to,
                            double delta);

/// x concatenated with itself.
WealthDistribution duplicate(const WealthDistribution& x);

WealthDistribution scale(const WealthDistribution& x, double alpha);
WealthDistribution permute(const WealthDistribution& x, std::span<const std::size_t> order);
WealthDistribution concat(const WealthDistribution& x, const WealthDistribution& y);

/// All entries identical.
bool is_egalitarian(const WealthDistribution& x) noexcept;

}  // namespace sybil

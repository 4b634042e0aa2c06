#include "sybil/economy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sybil/error.hpp"

namespace sybil {

namespace {

std::string dims(std::size_t expected, std::size_t actual) {
  return "expected " + std::to_string(expected) + ", got " + std::to_string(actual);
}

}  // namespace

WealthDistribution::WealthDistribution(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::EmptyDistribution, "distribution has no entries");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteWealth, "entry " + std::to_string(i) + " is not finite");
    }
    if (v < 0.0) {
      throw Error(ErrorCode::NegativeWealth,
                  "entry " + std::to_string(i) + " = " + std::to_string(v));
    }
    total_ += v;
  }
}

WealthDistribution make_distribution(std::span<const double> values) {
  return WealthDistribution(std::vector<double>(values.begin(), values.end()));
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> copy;
  for (const auto& r : rows) copy.emplace_back(r);
  *this = from_rows(copy);
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw Error(ErrorCode::InvalidMatrix, "empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) {
      throw Error(ErrorCode::InvalidMatrix, "ragged row " + std::to_string(r));
    }
    std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + static_cast<long>(r * m.cols_));
  }
  return m;
}

double Matrix::row_sum(std::size_t r) const {
  double s = 0.0;
  for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c);
  return s;
}

double Matrix::col_sum(std::size_t c) const {
  double s = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) s += (*this)(r, c);
  return s;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r][c] = (*this)(r, c);
  return out;
}

namespace {

void require_nonnegative(const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!(m(r, c) >= 0.0) || !std::isfinite(m(r, c))) {
        throw Error(ErrorCode::InvalidMatrix, "entry (" + std::to_string(r) + ", " +
                                                  std::to_string(c) + ") is negative or non-finite");
      }
}

}  // namespace

ReportMatrix::ReportMatrix(Matrix entries, Tolerance tol) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.cols() == 0) {
    throw Error(ErrorCode::InvalidMatrix, "report matrix is empty");
  }
  require_nonnegative(entries_);
  for (std::size_t i = 0; i < entries_.rows(); ++i) {
    const double s = entries_.row_sum(i);
    if (!tol.equal(s, 1.0)) {
      throw Error(ErrorCode::InvalidMatrix,
                  "row " + std::to_string(i) + " sums to " + std::to_string(s));
    }
  }
}

ReportMatrix ReportMatrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return ReportMatrix(std::move(m));
}

AggregationMatrix::AggregationMatrix(Matrix entries, Tolerance tol) : entries_(std::move(entries)) {
  if (entries_.cols() < 2 || entries_.rows() + 1 != entries_.cols()) {
    throw Error(ErrorCode::InvalidMatrix, "aggregation matrix must be (k-1) x k with k >= 2, got " +
                                              std::to_string(entries_.rows()) + " x " +
                                              std::to_string(entries_.cols()));
  }
  require_nonnegative(entries_);
  for (std::size_t j = 0; j < entries_.cols(); ++j) {
    const double s = entries_.col_sum(j);
    if (!tol.equal(s, 1.0)) {
      throw Error(ErrorCode::InvalidMatrix,
                  "column " + std::to_string(j) + " sums to " + std::to_string(s));
    }
  }
}

WealthDistribution apply_report(const WealthDistribution& hidden, const ReportMatrix& r) {
  const Matrix& m = r.matrix();
  if (m.rows() != hidden.size()) {
    throw Error(ErrorCode::DimensionMismatch, "report rows: " + dims(hidden.size(), m.rows()));
  }
  std::vector<double> v(m.cols(), 0.0);
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) v[j] += m(i, j) * hidden[i];
  return WealthDistribution(std::move(v));
}

bool check_conservation(const WealthDistribution& hidden, const Matrix& r,
                        const WealthDistribution& observable, Tolerance tol) {
  if (r.rows() != hidden.size()) {
    throw Error(ErrorCode::DimensionMismatch, "report rows: " + dims(hidden.size(), r.rows()));
  }
  if (r.cols() != observable.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "report columns: " + dims(observable.size(), r.cols()));
  }
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t j = 0; j < r.cols(); ++j)
      if (r(i, j) < 0.0) return false;
    if (!tol.equal(r.row_sum(i), 1.0)) return false;
  }
  const double scale = std::max(hidden.total(), observable.total());
  for (std::size_t j = 0; j < r.cols(); ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < r.rows(); ++i) v += r(i, j) * hidden[i];
    // Entries are compared on the scale of the economy so that tiny identities
    // carry the same absolute slack as large ones.
    if (std::abs(v - observable[j]) > tol.atol + tol.rtol * scale) return false;
  }
  return true;
}

bool check_conservation(const WealthDistribution& hidden, const ReportMatrix& r,
                        const WealthDistribution& observable, Tolerance tol) {
  return check_conservation(hidden, r.matrix(), observable, tol);
}

bool is_pure_sybil(const Matrix& r) {
  for (std::size_t j = 0; j < r.cols(); ++j) {
    std::size_t funders = 0;
    for (std::size_t i = 0; i < r.rows(); ++i)
      if (r(i, j) > 0.0) ++funders;
    if (funders > 1) return false;
  }
  return true;
}

ReportMatrix random_pure_sybil(const WealthDistribution& hidden,
                               std::span<const std::size_t> identities_per_actor, Seed seed) {
  if (identities_per_actor.size() != hidden.size()) {
    throw Error(ErrorCode::InvalidSplitCount,
                "one split count per actor required: " +
                    dims(hidden.size(), identities_per_actor.size()));
  }
  std::size_t cols = 0;
  for (std::size_t i = 0; i < identities_per_actor.size(); ++i) {
    if (identities_per_actor[i] == 0) {
      throw Error(ErrorCode::InvalidSplitCount, "actor " + std::to_string(i) + " has 0 identities");
    }
    cols += identities_per_actor[i];
  }
  Matrix m(hidden.size(), cols);
  std::size_t col = 0;
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    const std::size_t parts = identities_per_actor[i];
    if (parts == 1) {
      m(i, col) = 1.0;
    } else {
      Rng rng(seed.derive(i));
      const auto fractions = rng.simplex(parts);
      for (std::size_t p = 0; p < parts; ++p) m(i, col + p) = fractions[p];
    }
    col += parts;
  }
  return ReportMatrix(std::move(m));
}

AggregationMatrix random_aggregation(std::size_t k, Seed seed) {
  if (k < 2) throw Error(ErrorCode::KTooSmall, "k = " + std::to_string(k));
  Matrix m(k - 1, k);
  for (std::size_t j = 0; j < k; ++j) {
    if (k == 2) {
      m(0, j) = 1.0;
      continue;
    }
    Rng rng(seed.derive(j));
    const auto column = rng.simplex(k - 1);
    for (std::size_t i = 0; i + 1 < k; ++i) m(i, j) = column[i];
  }
  return AggregationMatrix(std::move(m));
}

WealthDistribution aggregate(const WealthDistribution& x, const AggregationMatrix& a) {
  const Matrix& m = a.matrix();
  if (m.cols() != x.size()) {
    throw Error(ErrorCode::DimensionMismatch, "aggregation columns: " + dims(x.size(), m.cols()));
  }
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * x[j];
  return WealthDistribution(std::move(out));
}

WealthDistribution transfer(const WealthDistribution& x, std::size_t from, std::size_t to,
                            double delta) {
  if (from >= x.size() || to >= x.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "indices " + std::to_string(from) + ", " + std::to_string(to) + " for length " +
                    std::to_string(x.size()));
  }
  if (!(x[to] < x[from])) {
    throw Error(ErrorCode::NotProgressive, "receiver is not strictly poorer than sender");
  }
  const double half_gap = (x[from] - x[to]) / 2.0;
  // A few ulps of slack so exact equalizing transfers survive rounding of x.
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() * x[from];
  if (!(delta > 0.0) || delta > half_gap + slack) {
    throw Error(ErrorCode::NotProgressive,
                "delta " + std::to_string(delta) + " outside (0, " + std::to_string(half_gap) + "]");
  }
  std::vector<double> v = x.vector();
  v[from] -= delta;
  v[to] += delta;
  return WealthDistribution(std::move(v));
}

WealthDistribution duplicate(const WealthDistribution& x) { return concat(x, x); }

WealthDistribution scale(const WealthDistribution& x, double alpha) {
  std::vector<double> v = x.vector();
  for (auto& e : v) e *= alpha;
  return WealthDistribution(std::move(v));
}

WealthDistribution permute(const WealthDistribution& x, std::span<const std::size_t> order) {
  if (order.size() != x.size()) {
    throw Error(ErrorCode::DimensionMismatch, "permutation: " + dims(x.size(), order.size()));
  }
  std::vector<double> v(x.size());
  std::vector<bool> seen(x.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= x.size() || seen[order[i]]) {
      throw Error(ErrorCode::IndexOutOfRange, "not a permutation");
    }
    seen[order[i]] = true;
    v[i] = x[order[i]];
  }
  return WealthDistribution(std::move(v));
}

WealthDistribution concat(const WealthDistribution& x, const WealthDistribution& y) {
  std::vector<double> v = x.vector();
  v.insert(v.end(), y.values().begin(), y.values().end());
  return WealthDistribution(std::move(v));
}

bool is_egalitarian(const WealthDistribution& x) noexcept {
  const auto [lo, hi] = std::minmax_element(x.values().begin(), x.values().end());
  return *lo == *hi;
}

}  // namespace sybil

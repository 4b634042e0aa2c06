#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sybil {

enum class ErrorCode {
  EmptyDistribution,
  NegativeWealth,
  NonFiniteWealth,
  DimensionMismatch,
  InvalidMatrix,
  InvalidSplitCount,
  KTooSmall,
  NotProgressive,
  IndexOutOfRange,
  ZeroTotalWealth,
  ZeroEntryForNonpositiveC,
  ZeroEntryForMeasure,
  InvalidParameter,
  UnknownMeasureId,
  InfeasibleFamily,
  UnknownCase,
  FileNotFound,
  ParseError,
  InvalidReport,
};

/// Stable identifier used in reports and diagnostics ("ZeroTotalWealth", ...).
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by a measure evaluated outside its declared domain. Falsifiers
/// catch this type (and only this type) to skip a trial.
class MeasureDomainError : public Error {
 public:
  MeasureDomainError(ErrorCode code, const std::string& detail, std::size_t index = 0)
      : Error(code, detail), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Dataset parse failure with 1-based line and column (field) position.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, std::size_t column, const std::string& detail)
      : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                        ": " + detail),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace sybil

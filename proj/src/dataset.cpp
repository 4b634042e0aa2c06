#include "sybil/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sybil/error.hpp"

namespace sybil {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_wealth(std::string_view field, std::size_t line, std::size_t column) {
  if (field.empty()) throw ParseError(ErrorCode::ParseError, line, column, "empty wealth field");
  double value = 0.0;
  const auto* last = field.data() + field.size();
  const auto res = std::from_chars(field.data(), last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ParseError(ErrorCode::ParseError, line, column,
                     "'" + std::string(field) + "' is not a number");
  }
  if (!std::isfinite(value)) {
    throw ParseError(ErrorCode::NonFiniteWealth, line, column, "wealth must be finite");
  }
  if (value < 0.0) {
    throw ParseError(ErrorCode::NegativeWealth, line, column,
                     "wealth " + std::string(field) + " is negative");
  }
  return value;
}

}  // namespace

Dataset parse_dataset_text(std::string_view text, DatasetFormat format) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  const auto group_index = [&](std::string_view name) {
    for (std::size_t g = 0; g < names.size(); ++g)
      if (names[g] == name) return g;
    names.emplace_back(name);
    values.emplace_back();
    return names.size() - 1;
  };

  bool header_seen = format == DatasetFormat::Row;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto newline = text.find('\n', start);
    const auto raw = text.substr(start, newline == std::string_view::npos ? text.npos : newline - start);
    start = newline == std::string_view::npos ? text.size() + 1 : newline + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    if (!header_seen) {
      if (fields.size() != 2) {
        throw ParseError(ErrorCode::ParseError, line_no, 1, "header must have two columns");
      }
      header_seen = true;
      continue;
    }
    if (format == DatasetFormat::Long) {
      if (fields.size() != 2) {
        throw ParseError(ErrorCode::ParseError, line_no, std::min<std::size_t>(fields.size(), 3),
                         "expected 2 fields, got " + std::to_string(fields.size()));
      }
      if (fields[0].empty()) throw ParseError(ErrorCode::ParseError, line_no, 1, "empty group name");
      const double w = parse_wealth(fields[1], line_no, 2);
      values[group_index(fields[0])].push_back(w);
    } else {
      const std::size_t g = group_index(std::to_string(line_no));
      for (std::size_t c = 0; c < fields.size(); ++c)
        values[g].push_back(parse_wealth(fields[c], line_no, c + 1));
    }
  }

  if (names.empty()) throw Error(ErrorCode::EmptyDistribution, "dataset has no records");
  Dataset dataset;
  for (std::size_t g = 0; g < names.size(); ++g)
    dataset.groups.push_back({names[g], WealthDistribution(std::move(values[g]))});
  return dataset;
}

Dataset parse_dataset(const std::filesystem::path& path, DatasetFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset_text(buffer.str(), format);
}

}  // namespace sybil

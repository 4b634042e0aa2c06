#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sybil/economy.hpp"

namespace sybil {

enum class DatasetFormat {
  Long,  // header line, then "group,wealth" records
  Row,   // one comma-separated distribution per line, named by line number
};

struct Group {
  std::string name;
  WealthDistribution wealth;
};

/// Groups in order of first appearance.
struct Dataset {
  std::vector<Group> groups;
};

/// Line numbers in diagnostics are 1-based physical lines, header included.
/// Throws FileNotFound, or ParseError carrying ParseError / NegativeWealth /
/// NonFiniteWealth / EmptyDistribution codes.
Dataset parse_dataset(const std::filesystem::path& path, DatasetFormat format);
Dataset parse_dataset_text(std::string_view text, DatasetFormat format);

}  // namespace sybil

#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

// Rectangular numeric tables with unit-suffixed column names and a metadata
// block that echoes the configuration and every assumed (non-derived)
// parameter. CSV values are written with shortest round-trip precision so
// identical configurations produce bit-identical files.

namespace spincav {

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json metadata;

  void add_row(std::vector<double> row);
  std::string to_csv() const;
  static ResultTable from_csv(const std::string& text);

  /// Writes <stem>.csv and <stem>.meta.json.
  void write(const std::string& stem) const;
};

std::string format_double(double value);

}  // namespace spincav

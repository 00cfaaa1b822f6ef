#include "spincav/result_table.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spincav {

std::string format_double(double value) {
  // Shortest representation that parses back to the same double.
  char buffer[32];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
    double parsed = 0;
    std::sscanf(buffer, "%lf", &parsed);
    if (parsed == value) return buffer;
  }
  return buffer;
}

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("row width does not match the column count");
  rows.push_back(std::move(row));
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  for (size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << "\n";
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << "\n";
  }
  return out.str();
}

ResultTable ResultTable::from_csv(const std::string& text) {
  ResultTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  std::istringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) table.columns.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    while (std::getline(cells, cell, ',')) {
      double value = 0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (res.ec != std::errc()) throw std::invalid_argument("bad CSV number: " + cell);
      row.push_back(value);
    }
    table.add_row(std::move(row));
  }
  return table;
}

void ResultTable::write(const std::string& stem) const {
  {
    std::ofstream out(stem + ".csv");
    if (!out) throw std::runtime_error("cannot open " + stem + ".csv");
    out << to_csv();
  }
  std::ofstream meta(stem + ".meta.json");
  if (!meta) throw std::runtime_error("cannot open " + stem + ".meta.json");
  meta << metadata.dump(2) << "\n";
}

}  // namespace spincav

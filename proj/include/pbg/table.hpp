#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace pbg {

using Cell = std::variant<double, std::int64_t, std::string>;

/// A fixed-schema result table. Emitted as CSV (header + LF rows, doubles at
/// 9 significant digits) or as JSON {"spec": ..., "rows": [...]}.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// "%.9g" rendering used by both writers.
std::string format_double(double value);

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, const nlohmann::ordered_json& spec, std::ostream& out);

}  // namespace pbg

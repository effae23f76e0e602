#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mbrisk/model.hpp"

namespace mbrisk::cli {

enum class Format { kTable, kCsv, kStructured };

/// %.12g
std::string num(double v);

/// One line of a result table; csv columns are n,x,method,value,stderr.
struct Row {
  std::optional<long> n;
  std::optional<double> x;
  std::string method;
  double value = 0.0;
  std::optional<double> stderr_value;
};

/// Named matrix shown after the table (table format only).
struct MatrixBlock {
  std::string title;
  Matrix value;
};

struct TableDoc {
  std::vector<std::string> notes;
  std::vector<Row> rows;
  std::vector<MatrixBlock> matrices;
};

void write_table(std::ostream& out, const TableDoc& doc);
void write_csv(std::ostream& out, const std::vector<Row>& rows);

}  // namespace mbrisk::cli

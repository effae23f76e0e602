#include "mbrisk_cli/output.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <ostream>

namespace mbrisk::cli {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string cell(const std::optional<long>& v) { return v ? std::to_string(*v) : ""; }
std::string cell(const std::optional<double>& v) { return v ? num(*v) : ""; }

}  // namespace

void write_table(std::ostream& out, const TableDoc& doc) {
  for (const auto& note : doc.notes) out << note << '\n';
  if (!doc.rows.empty()) {
    std::vector<std::array<std::string, 5>> cells;
    cells.push_back({"n", "x", "method", "value", "stderr"});
    for (const Row& r : doc.rows) cells.push_back({cell(r.n), cell(r.x), r.method, num(r.value), cell(r.stderr_value)});
    std::array<std::size_t, 5> width{};
    for (const auto& c : cells) {
      for (std::size_t k = 0; k < 5; ++k) width[k] = std::max(width[k], c[k].size());
    }
    for (const auto& c : cells) {
      std::string line;
      for (std::size_t k = 0; k < 5; ++k) {
        if (k) line += "  ";
        line += c[k] + std::string(width[k] - c[k].size(), ' ');
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << '\n';
    }
  }
  for (const MatrixBlock& m : doc.matrices) {
    out << m.title << '\n';
    for (Eigen::Index i = 0; i < m.value.rows(); ++i) {
      out << ' ';
      for (Eigen::Index j = 0; j < m.value.cols(); ++j) out << ' ' << num(m.value(i, j));
      out << '\n';
    }
  }
}

void write_csv(std::ostream& out, const std::vector<Row>& rows) {
  out << "n,x,method,value,stderr\n";
  for (const Row& r : rows) {
    out << cell(r.n) << ',' << cell(r.x) << ',' << r.method << ',' << num(r.value) << ',' << cell(r.stderr_value)
        << '\n';
  }
}

}  // namespace mbrisk::cli

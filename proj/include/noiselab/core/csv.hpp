#pragma once

// Plain CSV output: UTF-8, '\n' line endings, '.' decimal separator, reals
// printed with 17 significant digits so values round-trip exactly.

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace noiselab {

inline std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvRow {
 public:
  CsvRow& add(const std::string& s) {
    cells_.push_back(s);
    return *this;
  }
  CsvRow& add(const char* s) { return add(std::string(s)); }
  CsvRow& add(double x) { return add(fmt_real(x)); }
  CsvRow& add(int x) { return add(std::to_string(x)); }
  CsvRow& add(long x) { return add(std::to_string(x)); }
  CsvRow& add(long long x) { return add(std::to_string(x)); }
  CsvRow& add(unsigned x) { return add(std::to_string(x)); }
  CsvRow& add(unsigned long x) { return add(std::to_string(x)); }
  CsvRow& add(unsigned long long x) { return add(std::to_string(x)); }
  CsvRow& add(bool b) { return add(std::string(b ? "1" : "0")); }
  CsvRow& empty() { return add(std::string()); }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (i) out += ',';
      out += cells_[i];
    }
    return out;
  }

  std::size_t size() const { return cells_.size(); }

 private:
  std::vector<std::string> cells_;
};

// Writes a header once and flushes after every row, so an interrupted run
// leaves a parseable prefix.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::vector<std::string> header) : os_(&os), columns_(header.size()) {
    CsvRow h;
    for (auto& c : header) h.add(c);
    *os_ << h.str() << '\n';
    os_->flush();
  }

  void write(const CsvRow& row) {
    if (row.size() != columns_) {
      throw std::invalid_argument("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                                  std::to_string(columns_));
    }
    *os_ << row.str() << '\n';
    os_->flush();
    ++rows_;
  }

  std::size_t rows() const { return rows_; }

 private:
  std::ostream* os_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace noiselab

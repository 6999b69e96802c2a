#pragma once

#include <string>
#include <vector>

#include "qpm/types.hpp"

namespace qpm {

// Deterministic text formatting for reports and TSV tables: fixed "%.12g"
// rendering so identical inputs give byte-identical output.
std::string fmt_g(double x);
std::string fmt_complex(const Complex& z);
std::string fmt_mat(const Mat& A, const std::string& indent = "  ");

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_tsv() const;
};

// A report is an ordered list of "key: value" lines plus named tables.
struct Report {
  std::vector<std::string> lines;
  std::vector<std::pair<std::string, Table>> tables;

  void kv(const std::string& key, const std::string& value);
  void kv(const std::string& key, bool value);
  void kv(const std::string& key, double value);
  std::string render() const;
};

}  // namespace qpm

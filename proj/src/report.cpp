#include "qpm/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace qpm {

std::string fmt_g(double x) {
  if (std::isnan(x)) return "nan";
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string fmt_complex(const Complex& z) {
  if (z.imag() == 0.0) return fmt_g(z.real());
  return fmt_g(z.real()) + (z.imag() < 0 ? "-" : "+") +
         fmt_g(std::abs(z.imag())) + "i";
}

std::string fmt_mat(const Mat& A, const std::string& indent) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    out << indent << "[";
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (j) out << ", ";
      out << fmt_complex(A(i, j));
    }
    out << "]\n";
  }
  return out.str();
}

std::string Table::to_tsv() const {
  std::ostringstream out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out << "\t";
    out << header[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << "\t";
      out << row[i];
    }
    out << "\n";
  }
  return out.str();
}

void Report::kv(const std::string& key, const std::string& value) {
  lines.push_back(key + ": " + value);
}

void Report::kv(const std::string& key, bool value) {
  kv(key, std::string(value ? "true" : "false"));
}

void Report::kv(const std::string& key, double value) { kv(key, fmt_g(value)); }

std::string Report::render() const {
  std::ostringstream out;
  for (const auto& line : lines) out << line << "\n";
  for (const auto& [name, table] : tables) {
    out << "\n# " << name << "\n" << table.to_tsv();
  }
  return out.str();
}

}  // namespace qpm

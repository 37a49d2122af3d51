#include "expfit/csv.hpp"

#include <charconv>
#include <cmath>

namespace expfit {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_int(long long x) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void CsvBuilder::metadata(const std::string& key, const std::string& value) {
  out_ += "# ";
  out_ += key;
  out_ += "=";
  out_ += value;
  out_ += "\n";
}

void CsvBuilder::header(const std::vector<std::string>& names) { row(names); }

void CsvBuilder::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ += ",";
    out_ += fields[i];
  }
  out_ += "\n";
}

}  // namespace expfit

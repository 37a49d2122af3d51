#pragma once

#include <complex>
#include <string>
#include <vector>

namespace expfit {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

std::string format_int(long long x);

/// Line-oriented CSV builder: "\n" endings, values joined with ",", optional
/// leading "# key=value" metadata lines. Field values are expected to be
/// already formatted (format_double keeps them comma-free).
class CsvBuilder {
 public:
  void metadata(const std::string& key, const std::string& value);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

}  // namespace expfit

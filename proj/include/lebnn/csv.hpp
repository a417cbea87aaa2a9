#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lebnn/distance.hpp"
#include "lebnn/widefloat.hpp"

namespace lebnn {

// Header row, data rows, then "# key=value" lines in insertion order.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  void add_meta(const std::string& key, const std::string& value);
  std::string render() const;
  // "-" writes to stdout.
  void write(const std::string& path) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

// Round-trip formatting: %.17g for doubles, WideFloat in its own notation.
std::string cell(double v);
std::string cell(const WideFloat& v);
std::string cell(std::uint64_t v);
std::string cell(const Distance& d);
std::string cell(bool v);

}  // namespace lebnn

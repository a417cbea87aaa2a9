#include "lebnn/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace lebnn {

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += quote(cells[i]);
  }
  out += '\n';
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::logic_error("CSV row width differs from header");
  rows_.push_back(std::move(cells));
}

void CsvTable::add_meta(const std::string& key, const std::string& value) {
  std::string v = value;
  for (char& c : v) {
    if (c == '\n') c = ' ';
  }
  meta_.emplace_back(key, v);
}

std::string CsvTable::render() const {
  std::string out;
  append_line(out, header_);
  for (const auto& r : rows_) append_line(out, r);
  for (const auto& [k, v] : meta_) out += "# " + k + "=" + v + "\n";
  return out;
}

void CsvTable::write(const std::string& path) const {
  const std::string text = render();
  if (path == "-" || path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

std::string cell(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell(const WideFloat& v) {
  const double d = v.to_double();
  if (d != 0.0 && std::isfinite(d) && std::fpclassify(d) == FP_NORMAL) return cell(d);
  if (v.is_zero()) return "0";
  return v.to_string(17);
}

std::string cell(std::uint64_t v) { return std::to_string(v); }

std::string cell(const Distance& d) { return d.to_string(); }

std::string cell(bool v) { return v ? "true" : "false"; }

}  // namespace lebnn

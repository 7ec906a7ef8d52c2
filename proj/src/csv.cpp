#include "fch/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fch/errors.hpp"

namespace fch::csv {

std::string format(double v) {
  // to_chars is locale independent; %.17g semantics via the general format.
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::span<const double>>& columns) {
  if (header.size() != columns.size()) throw InvalidArgument("csv: header and column count differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw InvalidArgument("csv: columns of unequal length");

  std::string out;
  out.reserve((rows + 1) * columns.size() * 24);
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out += ',';
    out += header[j];
  }
  out += '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out += ',';
      out += format(columns[j][i]);
    }
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw ConfigError("write failed for '" + path.string() + "'");
}

const std::vector<double>& Table::column(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == name) return columns[j];
  throw ConfigError("csv: no column '" + name + "'");
}

Table read(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path.string() + "'");
  Table t;
  std::string line;
  std::size_t lineno = 0;
  auto where = [&] { return path.string() + ":" + std::to_string(lineno) + ": "; };
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (t.header.empty()) {
      while (std::getline(ss, cell, ',')) t.header.push_back(cell);
      t.columns.assign(t.header.size(), {});
      continue;
    }
    std::size_t j = 0;
    while (std::getline(ss, cell, ',')) {
      if (j >= t.columns.size()) throw ConfigError(where() + "too many fields");
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw ConfigError(where() + "not a number: '" + cell + "'");
      t.columns[j++].push_back(v);
    }
    if (j != t.columns.size()) throw ConfigError(where() + "expected " + std::to_string(t.columns.size()) + " fields");
  }
  if (t.header.empty()) throw ConfigError(path.string() + ": empty file");
  return t;
}

}  // namespace fch::csv

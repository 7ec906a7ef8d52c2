#pragma once

// Minimal CSV I/O for run artifacts: 17 significant digits, '.' decimal
// separator, '\n' line endings, one header row.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace fch::csv {

/// %.17g, independent of the global locale.
std::string format(double v);

/// Writes equally long columns under `header`. Throws ConfigError if the
/// file cannot be written, InvalidArgument on a shape mismatch.
void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::span<const double>>& columns);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  /// Throws ConfigError if the column is absent.
  const std::vector<double>& column(const std::string& name) const;
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Throws ConfigError with file:line diagnostics on malformed input.
Table read(const std::filesystem::path& path);

}  // namespace fch::csv

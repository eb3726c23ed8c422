#ifndef FKT_IO_HPP
#define FKT_IO_HPP

// CSV ingestion for point clouds (with optional trailing target / noise
// columns) and result-record emission for the CLI.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fkt/tree.hpp"

namespace fkt {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct CsvTable {
  std::vector<std::string> header;  // empty when no header row was present
  std::vector<std::vector<double>> rows;
  std::size_t columns = 0;
};

// Reads a numeric CSV. A non-numeric first row is treated as a header; ragged
// or non-numeric data rows raise ParseError naming the offending line.
CsvTable readCsv(const std::string& path);

struct IngestedPoints {
  PointCloud cloud;
  // Columns beyond the coordinate block, in file order (e.g. target, noise).
  std::vector<std::vector<double>> extraColumns;
};

// First `dims` columns become coordinates (all columns when dims is omitted).
IngestedPoints ingestPoints(const std::string& path, std::optional<int> dims = std::nullopt);

void writeVectorCsv(const std::string& path, std::span<const double> values,
                    const std::string& columnName = "value");

// A flat, self-describing record: every row repeats the configuration columns.
struct ResultRecord {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void writeCsv(std::ostream& os) const;
  void writeCsv(const std::string& path) const;
  std::string toJson(int schemaVersion = 1) const;
};

std::string formatDouble(double v);

}  // namespace fkt

#endif

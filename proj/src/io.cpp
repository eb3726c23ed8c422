#include "fkt/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace fkt {

namespace {

std::vector<std::string> splitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

std::optional<double> parseDouble(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return std::nullopt;
  std::size_t end = s.find_last_not_of(" \t") + 1;
  double value = 0.0;
  const char* first = s.data() + begin;
  const char* last = s.data() + end;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

}  // namespace

CsvTable readCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  std::size_t lineNumber = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineNumber;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = splitCsvLine(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (const auto& f : fields) {
      if (auto v = parseDouble(f)) {
        row.push_back(*v);
      } else {
        numeric = false;
        break;
      }
    }
    if (first) {
      first = false;
      if (!numeric) {
        table.header.assign(fields.begin(), fields.end());
        table.columns = fields.size();
        continue;
      }
      table.columns = fields.size();
    }
    if (!numeric) throw ParseError(path, lineNumber, "non-numeric field in data row");
    if (fields.size() != table.columns)
      throw ParseError(path, lineNumber,
                       "expected " + std::to_string(table.columns) + " fields, got " +
                           std::to_string(fields.size()));
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw ParseError(path, lineNumber, "no data rows");
  return table;
}

IngestedPoints ingestPoints(const std::string& path, std::optional<int> dims) {
  CsvTable table = readCsv(path);
  const int cols = static_cast<int>(table.columns);
  const int d = dims.value_or(cols);
  if (d < 1 || d > cols)
    throw ParseError(path + ": requested " + std::to_string(d) + " coordinate columns, file has " +
                     std::to_string(cols));
  IngestedPoints out;
  out.cloud = PointCloud(static_cast<int>(table.rows.size()), d);
  out.extraColumns.resize(static_cast<std::size_t>(cols - d));
  for (auto& col : out.extraColumns) col.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (int a = 0; a < d; ++a) out.cloud.pointData(static_cast<int>(i))[a] = table.rows[i][static_cast<std::size_t>(a)];
    for (int c = d; c < cols; ++c)
      out.extraColumns[static_cast<std::size_t>(c - d)].push_back(table.rows[i][static_cast<std::size_t>(c)]);
  }
  return out;
}

std::string formatDouble(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void writeVectorCsv(const std::string& path, std::span<const double> values,
                    const std::string& columnName) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << columnName << "\n";
  for (double v : values) out << formatDouble(v) << "\n";
}

void ResultRecord::writeCsv(std::ostream& os) const {
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << "\n";
  }
}

void ResultRecord::writeCsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  writeCsv(out);
}

std::string ResultRecord::toJson(int schemaVersion) const {
  nlohmann::json j;
  j["schema_version"] = schemaVersion;
  j["columns"] = columns;
  nlohmann::json rowsJson = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json obj;
    for (std::size_t c = 0; c < row.size() && c < columns.size(); ++c) obj[columns[c]] = row[c];
    rowsJson.push_back(std::move(obj));
  }
  j["rows"] = std::move(rowsJson);
  return j.dump(2);
}

}  // namespace fkt

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "fkt/io.hpp"

using namespace fkt;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fkt-io-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("ingest: plain numeric csv") {
  TempDir tmp;
  writeFile(tmp.file("p.csv"), "0.5,1.5\n1.0,2.0\n-1.0,0.25\n");
  const auto pts = ingestPoints(tmp.file("p.csv"));
  CHECK(pts.cloud.n == 3);
  CHECK(pts.cloud.d == 2);
  CHECK(pts.cloud.point(2)[1] == doctest::Approx(0.25));
  CHECK(pts.extraColumns.empty());
}

TEST_CASE("ingest: header auto-detection") {
  TempDir tmp;
  writeFile(tmp.file("p.csv"), "x,y,value\n0.0,1.0,7.5\n2.0,3.0,-1.0\n");
  const auto pts = ingestPoints(tmp.file("p.csv"), 2);
  CHECK(pts.cloud.n == 2);
  CHECK(pts.cloud.d == 2);
  REQUIRE(pts.extraColumns.size() == 1);
  CHECK(pts.extraColumns[0][0] == doctest::Approx(7.5));
}

TEST_CASE("ingest: ragged rows name the offending line") {
  TempDir tmp;
  writeFile(tmp.file("bad.csv"), "1.0,2.0,3.0\n4.0,5.0\n");
  try {
    (void)ingestPoints(tmp.file("bad.csv"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
}

TEST_CASE("ingest: non-numeric data row and empty file fail") {
  TempDir tmp;
  writeFile(tmp.file("bad.csv"), "1.0,2.0\npotato,2.0\n");
  CHECK_THROWS_AS((void)ingestPoints(tmp.file("bad.csv")), ParseError);
  writeFile(tmp.file("empty.csv"), "\n");
  CHECK_THROWS_AS((void)ingestPoints(tmp.file("empty.csv")), ParseError);
  CHECK_THROWS_AS((void)ingestPoints(tmp.file("missing.csv")), IoError);
}

TEST_CASE("result records round-trip through csv text") {
  ResultRecord record;
  record.columns = {"kernel", "n", "error"};
  record.rows.push_back({"exponential", "1000", formatDouble(1.2345678901234567e-5)});
  record.rows.push_back({"cauchy", "2000", formatDouble(0.25)});
  std::ostringstream os;
  record.writeCsv(os);

  // Re-parse and compare the numeric fields exactly.
  TempDir tmp;
  writeFile(tmp.file("r.csv"), os.str());
  const auto table = readCsv(tmp.file("r.csv"));
  REQUIRE(table.header.size() == 3);
  CHECK(table.header[0] == "kernel");
  // The kernel column is non-numeric, so rows fail numeric parsing; compare
  // the numeric columns through a numbers-only record instead.
  ResultRecord numeric;
  numeric.columns = {"n", "error"};
  numeric.rows.push_back({"1000", formatDouble(1.2345678901234567e-5)});
  std::ostringstream osNum;
  numeric.writeCsv(osNum);
  writeFile(tmp.file("n.csv"), osNum.str());
  const auto parsed = readCsv(tmp.file("n.csv"));
  CHECK(parsed.rows[0][1] == 1.2345678901234567e-5);
}

TEST_CASE("json record carries a schema version and all columns") {
  ResultRecord record;
  record.columns = {"n", "error"};
  record.rows.push_back({"10", "0.5"});
  const std::string json = record.toJson();
  CHECK(json.find("\"schema_version\": 1") != std::string::npos);
  CHECK(json.find("\"error\": \"0.5\"") != std::string::npos);
}

TEST_CASE("vector csv writes one value per line") {
  TempDir tmp;
  std::vector<double> values = {1.0, -2.5, 3.25};
  writeVectorCsv(tmp.file("v.csv"), values, "z");
  const auto parsed = readCsv(tmp.file("v.csv"));
  CHECK(parsed.header == std::vector<std::string>{"z"});
  REQUIRE(parsed.rows.size() == 3);
  CHECK(parsed.rows[1][0] == -2.5);
}

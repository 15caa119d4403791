#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "ingest.hpp"

namespace {

std::string temp_path(const std::string& name) {
  return std::string("/tmp/sl_ingest_test_") + name;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("csv: one value per line") {
  const std::string p = temp_path("basic.csv");
  write_file(p, "0.1\n-0.2\n0.3\n");
  auto r = cli::ingest_array(p, "csv");
  CHECK(r.values == std::vector<double>{0.1, -0.2, 0.3});
  CHECK(r.non_finite == 0);
  std::remove(p.c_str());
}

TEST_CASE("csv: single header line is auto-detected") {
  const std::string p = temp_path("header.csv");
  write_file(p, "weight\n1.5\n2.5\n");
  auto r = cli::ingest_array(p, "csv");
  CHECK(r.values == std::vector<double>{1.5, 2.5});
  std::remove(p.c_str());
}

TEST_CASE("csv: a malformed later line names its line number") {
  const std::string p = temp_path("bad.csv");
  write_file(p, "1.0\n2.0\noops\n4.0\n");
  try {
    cli::ingest_array(p, "csv");
    CHECK(false);
  } catch (const cli::ingest_error& e) {
    CHECK(e.kind() == cli::ingest_errc::parse);
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
  std::remove(p.c_str());
}

TEST_CASE("csv: non-finite entries are counted, finite order preserved") {
  const std::string p = temp_path("nonfinite.csv");
  write_file(p, "1.0\ninf\n2.0\nnan\n3.0\n");
  auto r = cli::ingest_array(p, "csv");
  CHECK(r.values == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(r.non_finite == 2);
  std::remove(p.c_str());
}

TEST_CASE("bin: little-endian doubles round trip") {
  const std::string p = temp_path("one.bin");
  const double v = 1.0;
  {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
  }
  auto r = cli::ingest_array(p, "bin");
  CHECK(r.values == std::vector<double>{1.0});
  std::remove(p.c_str());
}

TEST_CASE("bin: trailing partial value is a parse error") {
  const std::string p = temp_path("trunc.bin");
  write_file(p, std::string(12, '\x42'));
  CHECK_THROWS_AS(cli::ingest_array(p, "bin"), cli::ingest_error);
  std::remove(p.c_str());
}

TEST_CASE("empty and missing inputs") {
  const std::string p = temp_path("empty.csv");
  write_file(p, "\n\n");
  try {
    cli::ingest_array(p, "csv");
    CHECK(false);
  } catch (const cli::ingest_error& e) {
    CHECK(e.kind() == cli::ingest_errc::empty);
  }
  std::remove(p.c_str());
  try {
    cli::ingest_array("/nonexistent/nope.csv", "csv");
    CHECK(false);
  } catch (const cli::ingest_error& e) {
    CHECK(e.kind() == cli::ingest_errc::io);
    CHECK(std::string(e.what()).find("/nonexistent/nope.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(cli::ingest_array(p, "parquet"), cli::ingest_error);
}

}  // TEST_SUITE

#include "ingest.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace cli {

namespace {

bool parse_double(const std::string& s, double* out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  if (*end != '\0') return false;
  *out = v;
  return true;
}

IngestResult ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ingest_error(ingest_errc::io, "cannot open '" + path + "' for reading");
  IngestResult result;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = line;
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' '))
      trimmed.pop_back();
    if (trimmed.empty()) continue;
    double v;
    if (!parse_double(trimmed, &v)) {
      if (first_content_line) {  // single header line is fine
        first_content_line = false;
        continue;
      }
      throw ingest_error(ingest_errc::parse,
                         path + ":" + std::to_string(line_no) + ": unparseable value '" +
                             trimmed + "'");
    }
    first_content_line = false;
    if (std::isfinite(v))
      result.values.push_back(v);
    else
      ++result.non_finite;
  }
  if (result.values.empty() && result.non_finite == 0)
    throw ingest_error(ingest_errc::empty, "no numeric values found in '" + path + "'");
  return result;
}

IngestResult ingest_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ingest_error(ingest_errc::io, "cannot open '" + path + "' for reading");
  IngestResult result;
  char buf[sizeof(double)];
  while (in.read(buf, sizeof(buf))) {
    std::uint64_t bits;
    std::memcpy(&bits, buf, sizeof(bits));
    if constexpr (std::endian::native == std::endian::big) {
      std::uint64_t swapped = 0;
      for (int i = 0; i < 8; ++i) swapped = (swapped << 8) | ((bits >> (8 * i)) & 0xFF);
      bits = swapped;
    }
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    if (std::isfinite(v))
      result.values.push_back(v);
    else
      ++result.non_finite;
  }
  if (in.gcount() != 0)
    throw ingest_error(ingest_errc::parse,
                       path + ": trailing " + std::to_string(in.gcount()) +
                           " bytes are not a full 8-byte float");
  if (result.values.empty() && result.non_finite == 0)
    throw ingest_error(ingest_errc::empty, "no values found in '" + path + "'");
  return result;
}

}  // namespace

IngestResult ingest_array(const std::string& path, const std::string& format) {
  if (format == "csv") return ingest_csv(path);
  if (format == "bin") return ingest_bin(path);
  throw ingest_error(ingest_errc::io, "unknown format '" + format + "' (expected csv|bin)");
}

}  // namespace cli

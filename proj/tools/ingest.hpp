#ifndef STABLE_LIMITS_TOOLS_INGEST_HPP
#define STABLE_LIMITS_TOOLS_INGEST_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

enum class ingest_errc { io, parse, empty };

class ingest_error : public std::runtime_error {
 public:
  ingest_error(ingest_errc kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ingest_errc kind() const { return kind_; }

 private:
  ingest_errc kind_;
};

struct IngestResult {
  std::vector<double> values;  // finite values, input order preserved
  std::size_t non_finite = 0;  // dropped inf/nan entries
};

// Reads a flat parameter array. format "csv": one numeric value per line, an
// optional single header line is auto-detected; any later unparseable line is
// a parse error naming the line number. format "bin": raw little-endian
// 64-bit floats. Zero parseable values is an error.
IngestResult ingest_array(const std::string& path, const std::string& format);

}  // namespace cli

#endif

#pragma once

// CSV output with a '#'-prefixed manifest header. The body below the
// comments is plain RFC-4180 rows; comparisons for reproducibility strip
// the comment lines first.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace modsum::csv {

struct Manifest {
  std::string subcommand;
  std::string schema;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;
  bool with_timestamp = true;
};

void write_manifest(std::ostream& out, const Manifest& manifest);

std::string format_double(double value, int precision = 9);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

// Drop '#' comment lines; used when comparing output bodies byte for byte.
std::string strip_comments(const std::string& text);

}  // namespace modsum::csv

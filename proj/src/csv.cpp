#include "modsum/csv.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "modsum/version.hpp"

namespace modsum::csv {

namespace {

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char ch : field) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_manifest(std::ostream& out, const Manifest& manifest) {
  out << "# tool=modsum version=" << kVersion << " schema=" << manifest.schema << "\n";
  out << "# subcommand=" << manifest.subcommand << "\n";
  out << "# seed=" << manifest.seed << "\n";
  for (const auto& [key, value] : manifest.config) {
    out << "# config." << key << "=" << value << "\n";
  }
  if (manifest.with_timestamp) out << "# timestamp=" << utc_timestamp() << "\n";
}

std::string format_double(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

void Writer::header(const std::vector<std::string>& columns) { row(columns); }

void Writer::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << quote_if_needed(fields[i]);
  }
  out_ << "\n";
}

std::string strip_comments(const std::string& text) {
  std::stringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace modsum::csv

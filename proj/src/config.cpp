#include "modsum/config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

namespace modsum::config {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

const std::string& require(const Section& section, const std::string& key) {
  auto it = section.find(key);
  if (it == section.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
  }
}

std::int64_t to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  }
}

std::vector<double> to_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::vector<int> to_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<int>(to_int(key, trim(item))));
  }
  return out;
}

}  // namespace

Document parse_text(const std::string& text) {
  Document doc;
  std::string current;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      }
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) {
        throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      }
      doc[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    if (current.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    doc[current][key] = value;
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str());
}

channel::MacModel load_channel(const Section& section) {
  const std::string kind = require(section, "kind");
  try {
    if (kind == "real-gaussian") {
      return channel::MacModel::real_gaussian(
          to_double("E", require(section, "E")), to_double("v", require(section, "v")),
          static_cast<int>(to_int("p", require(section, "p"))),
          static_cast<int>(to_int("c", require(section, "c"))));
    }
    if (kind == "complex-gaussian") {
      std::vector<int> labels;
      if (auto it = section.find("labels"); it != section.end()) {
        labels = to_int_list("labels", it->second);
      }
      return channel::MacModel::complex_gaussian(
          to_double("E", require(section, "E")), to_double("v", require(section, "v")),
          static_cast<int>(to_int("c", require(section, "c"))), std::move(labels));
    }
    if (kind == "additive") {
      return channel::MacModel::additive(
          static_cast<std::uint32_t>(to_int("q", require(section, "q"))),
          static_cast<int>(to_int("l", require(section, "l"))),
          static_cast<int>(to_int("c", require(section, "c"))),
          to_double_list("noise", require(section, "noise")));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid channel block: ") + e.what());
  }
  throw ConfigError("unknown channel kind '" + kind + "'");
}

sim::ProtocolConfig load_protocol(const Document& doc) {
  auto proto_it = doc.find("protocol");
  if (proto_it == doc.end()) throw ConfigError("missing [protocol] section");
  auto chan_it = doc.find("channel");
  if (chan_it == doc.end()) throw ConfigError("missing [channel] section");
  const Section& p = proto_it->second;

  sim::ProtocolConfig cfg{
      static_cast<std::uint32_t>(to_int("q", require(p, "q"))),
      static_cast<int>(to_int("l", require(p, "l"))),
      static_cast<int>(to_int("n", require(p, "n"))),
      static_cast<int>(to_int("k", require(p, "k"))),
      static_cast<int>(to_int("kprime", require(p, "kprime"))),
      static_cast<int>(to_int("c", require(p, "c"))),
      to_int("trials", require(p, "trials")),
      0,
      static_cast<std::uint64_t>(to_int("seed", require(p, "seed"))),
      load_channel(chan_it->second)};
  if (auto it = p.find("leakage_samples"); it != p.end()) {
    cfg.leakage_samples = to_int("leakage_samples", it->second);
  }
  try {
    sim::validate_config(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid protocol config: ") + e.what());
  }
  return cfg;
}

std::string canonical_section(const Section& section) {
  std::string out;
  for (const auto& [key, value] : section) {
    if (!out.empty()) out += ' ';
    out += key + "=" + value;
  }
  return out;
}

std::string config_hash(const Document& doc) {
  std::uint64_t hash = 1469598103934665603ull;
  const auto feed = [&](const std::string& s) {
    for (unsigned char ch : s) {
      hash ^= ch;
      hash *= 1099511628211ull;
    }
  };
  for (const auto& [name, section] : doc) {
    feed("[" + name + "]");
    feed(canonical_section(section));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace modsum::config

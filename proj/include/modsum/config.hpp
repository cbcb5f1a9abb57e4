#pragma once

// Flat key-value config files with [protocol] and [channel] sections.
// '#' starts a comment; keys are case-sensitive.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "modsum/channel.hpp"
#include "modsum/sim.hpp"

namespace modsum::config {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Section = std::map<std::string, std::string>;
using Document = std::map<std::string, Section>;

Document parse_file(const std::string& path);
Document parse_text(const std::string& text);

// [channel] section:
//   kind = real-gaussian | complex-gaussian | additive
//   real-gaussian:    E, v, p, c
//   complex-gaussian: E, v, c, optional labels = comma permutation of 0..6
//   additive:         q, l, c, noise = comma pmf with q^l entries
channel::MacModel load_channel(const Section& section);

// [protocol] section: q, l, n, k, kprime, c, trials, seed, optional
// leakage_samples; the [channel] section supplies the channel block.
sim::ProtocolConfig load_protocol(const Document& doc);

// Canonical one-line rendering of a section, used for manifests and hashing.
std::string canonical_section(const Section& section);

// FNV-1a over the canonical text of the whole document.
std::string config_hash(const Document& doc);

}  // namespace modsum::config

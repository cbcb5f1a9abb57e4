#pragma once

// Desk-scale end-to-end simulation of the coded modulo-sum protocol:
// shared code construction, per-player encoding, channel transmission,
// exact MAP decoding of the message sum, and Monte Carlo measurement of
// decoding error and per-coalition leakage.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "modsum/channel.hpp"
#include "modsum/gf.hpp"
#include "modsum/mixture.hpp"

namespace modsum::sim {

struct ProtocolConfig {
  std::uint32_t q = 2;
  int l = 1;
  int n = 2;
  int k = 1;
  int kprime = 1;
  int senders = 2;
  std::int64_t trials = 1000;
  std::int64_t leakage_samples = 0;  // 0: reuse the trial count
  std::uint64_t seed = 1;
  channel::MacModel channel;
};

// Exact posteriors enumerate all q^{c(k+k')} payload tuples; configs above
// this are rejected rather than approximated.
inline constexpr std::int64_t kTupleCap = 1 << 16;

// Throws std::invalid_argument when dimensions, caps, or the channel block
// are inconsistent.
void validate_config(const ProtocolConfig& config);

struct CodeInstance {
  gf::CodePair code;
  std::vector<gf::FieldVector> coset_vectors;  // one per player
  ProtocolConfig config;
};

CodeInstance build_code(const ProtocolConfig& config, std::mt19937_64& rng);

// Player's channel block: g1(g3(message || scramble) || coset_i) in F_q^{nl}.
gf::FieldVector encode(const CodeInstance& instance, int player,
                       const gf::FieldVector& message, const gf::FieldVector& scramble);

// Split a length-nl block into n alphabet indices of F_q^l.
std::vector<int> codeword_symbols(const gf::FieldVector& codeword, std::uint32_t q, int l);

// Exact MAP estimate of the message sum given the n channel outputs; ties
// are broken uniformly with the supplied generator.
gf::FieldVector decode_modulo_sum(const CodeInstance& instance,
                                  const channel::MacModel& mac,
                                  std::span<const channel::OutputPoint> outputs,
                                  std::mt19937_64& rng);

// Per-instance leakage I(Y^n ; M_J | code) in nats: Monte Carlo average of
// log p(y | m_J) / p(y), both densities computed by exact enumeration of the
// remaining payload variables.
info::InfoEstimate estimate_leakage(const CodeInstance& instance,
                                    const channel::MacModel& mac,
                                    std::span<const int> coalition, std::int64_t samples,
                                    std::mt19937_64& rng);

struct SimResult {
  double error_rate = 0.0;
  double ci_low = 0.0;   // 95% Wilson interval
  double ci_high = 0.0;
  std::int64_t trials = 0;
  std::vector<std::pair<std::vector<int>, info::InfoEstimate>> leakage;
};

// Builds the code from the config seed, measures the decoding error over
// `trials` runs, then estimates leakage for every nonempty proper coalition.
// Deterministic: identical configs give identical results.
SimResult run_experiment(const ProtocolConfig& config);

std::pair<double, double> wilson_interval(std::int64_t errors, std::int64_t trials,
                                          double z = 1.959963984540054);

// Stream derivation for reproducible substreams: hashes (master, stream,
// index) through splitmix64.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

}  // namespace modsum::sim

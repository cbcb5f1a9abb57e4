#include "modsum/sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace modsum::sim {

namespace {

using channel::MacModel;
using channel::OutputPoint;

gf::FieldVector vector_from_index(std::int64_t index, int digits, std::uint32_t q) {
  gf::FieldVector v(static_cast<std::size_t>(digits), q);
  for (int t = 0; t < digits; ++t) {
    v.set(static_cast<std::size_t>(t), static_cast<std::uint32_t>(index % q));
    index /= q;
  }
  return v;
}

// Precomputed per-tuple channel statistics: for Gaussian families the
// per-symbol mean, for additive models the per-symbol shift index.
class TupleLikelihood {
 public:
  TupleLikelihood(const CodeInstance& inst, const MacModel& mac) {
    const auto& cfg = inst.config;
    senders_ = cfg.senders;
    l_ = cfg.l;
    const std::int64_t payloads = static_cast<std::int64_t>(
        gf::pow_u64(cfg.q, static_cast<std::uint32_t>(cfg.k + cfg.kprime)));
    std::int64_t tuple_count = 1;
    for (int i = 0; i < cfg.senders; ++i) tuple_count *= payloads;
    payloads_ = payloads;
    tuple_count_ = tuple_count;
    n_ = cfg.n;
    q_ = cfg.q;
    k_ = cfg.k;

    // Symbols of every payload codeword of every player.
    const std::int64_t scrambles =
        static_cast<std::int64_t>(gf::pow_u64(cfg.q, static_cast<std::uint32_t>(cfg.kprime)));
    player_symbols_.resize(static_cast<std::size_t>(cfg.senders));
    for (int i = 0; i < cfg.senders; ++i) {
      auto& rows = player_symbols_[static_cast<std::size_t>(i)];
      rows.resize(static_cast<std::size_t>(payloads));
      for (std::int64_t f = 0; f < payloads; ++f) {
        const std::int64_t m_index = f / scrambles;
        const std::int64_t l_index = f % scrambles;
        const auto codeword = encode(inst, i, vector_from_index(m_index, cfg.k, cfg.q),
                                     vector_from_index(l_index, cfg.kprime, cfg.q));
        rows[static_cast<std::size_t>(f)] = codeword_symbols(codeword, cfg.q, cfg.l);
      }
    }

    gaussian_ = mac.is_gaussian_family();
    if (gaussian_) {
      variance_ = mac.gaussian_variance();
      if (mac.output_space() == channel::OutputSpace::ComplexPlane) {
        planar_ = true;
        points_ = mac.constellation();
      }
      means_.resize(static_cast<std::size_t>(tuple_count_ * n_));
    } else {
      shifts_.resize(static_cast<std::size_t>(tuple_count_ * n_));
      noise_ = mac.as_additive()->noise;
    }
    msum_.resize(static_cast<std::size_t>(tuple_count_));
    player_m_.resize(static_cast<std::size_t>(tuple_count_ * cfg.senders));

    std::vector<std::int64_t> payload(static_cast<std::size_t>(cfg.senders));
    for (std::int64_t t = 0; t < tuple_count_; ++t) {
      std::int64_t rest = t;
      int msum = 0;
      for (int i = 0; i < cfg.senders; ++i) {
        payload[static_cast<std::size_t>(i)] = rest % payloads;
        rest /= payloads;
        const int m_index = static_cast<int>(payload[static_cast<std::size_t>(i)] / scrambles);
        player_m_[static_cast<std::size_t>(t * cfg.senders + i)] = m_index;
        msum = gf::index_add(msum, m_index, cfg.q, cfg.k);
      }
      msum_[static_cast<std::size_t>(t)] = msum;
      for (int sym = 0; sym < n_; ++sym) {
        if (gaussian_) {
          std::complex<double> mean{0.0, 0.0};
          for (int i = 0; i < cfg.senders; ++i) {
            const int x = player_symbols_[static_cast<std::size_t>(i)]
                                         [static_cast<std::size_t>(payload[static_cast<std::size_t>(i)])]
                                         [static_cast<std::size_t>(sym)];
            if (planar_) {
              mean += points_[static_cast<std::size_t>(x)];
            } else {
              mean += mac.as_real()->amplitude * static_cast<double>(x);
            }
          }
          means_[static_cast<std::size_t>(t * n_ + sym)] = mean;
        } else {
          int shift = 0;
          for (int i = 0; i < cfg.senders; ++i) {
            const int x = player_symbols_[static_cast<std::size_t>(i)]
                                         [static_cast<std::size_t>(payload[static_cast<std::size_t>(i)])]
                                         [static_cast<std::size_t>(sym)];
            shift = gf::index_add(shift, x, cfg.q, inst.config.l);
          }
          shifts_[static_cast<std::size_t>(t * n_ + sym)] = shift;
        }
      }
    }
  }

  std::int64_t tuple_count() const { return tuple_count_; }
  int msum_of(std::int64_t tuple) const { return msum_[static_cast<std::size_t>(tuple)]; }
  int message_of(std::int64_t tuple, int player) const {
    return player_m_[static_cast<std::size_t>(tuple * senders_ + player)];
  }
  const std::vector<int>& symbols(int player, std::int64_t payload) const {
    return player_symbols_[static_cast<std::size_t>(player)][static_cast<std::size_t>(payload)];
  }
  std::int64_t payload_count() const { return payloads_; }

  double likelihood(std::int64_t tuple, std::span<const OutputPoint> y) const {
    double prod = 1.0;
    if (gaussian_ && !planar_) {
      const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * variance_);
      for (int sym = 0; sym < n_; ++sym) {
        const double d = std::get<double>(y[static_cast<std::size_t>(sym)]) -
                         means_[static_cast<std::size_t>(tuple * n_ + sym)].real();
        prod *= norm * std::exp(-0.5 * d * d / variance_);
      }
    } else if (gaussian_) {
      const double norm = 1.0 / (std::numbers::pi * variance_);
      for (int sym = 0; sym < n_; ++sym) {
        const double d2 = std::norm(std::get<std::complex<double>>(y[static_cast<std::size_t>(sym)]) -
                                    means_[static_cast<std::size_t>(tuple * n_ + sym)]);
        prod *= norm * std::exp(-d2 / variance_);
      }
    } else {
      for (int sym = 0; sym < n_; ++sym) {
        const int yi = std::get<int>(y[static_cast<std::size_t>(sym)]);
        const int noise_idx =
            gf::index_sub(yi, shifts_[static_cast<std::size_t>(tuple * n_ + sym)], q_, l_);
        prod *= noise_[static_cast<std::size_t>(noise_idx)];
        if (prod == 0.0) return 0.0;
      }
    }
    return prod;
  }

  int msum_count() const { return static_cast<int>(gf::pow_u64(q_, static_cast<std::uint32_t>(k_))); }

 private:
  std::vector<std::vector<std::vector<int>>> player_symbols_;
  std::vector<std::complex<double>> means_;
  std::vector<int> shifts_;
  std::vector<double> noise_;
  std::vector<int> msum_;
  std::vector<int> player_m_;
  std::vector<std::complex<double>> points_;
  std::int64_t tuple_count_ = 0;
  std::int64_t payloads_ = 0;
  int n_ = 0;
  int k_ = 0;
  int l_ = 1;
  int senders_ = 0;
  std::uint32_t q_ = 2;
  double variance_ = 1.0;
  bool gaussian_ = false;
  bool planar_ = false;
};

}  // namespace

void validate_config(const ProtocolConfig& config) {
  if (!gf::is_prime(config.q)) throw std::invalid_argument("protocol: q must be prime");
  if (config.l < 1 || config.n < 1 || config.k < 1 || config.kprime < 1 || config.senders < 1) {
    throw std::invalid_argument("protocol: dimensions must be positive");
  }
  if (config.k + config.kprime > config.n * config.l) {
    throw std::invalid_argument("protocol: k + k' must not exceed n*l");
  }
  if (config.trials < 1) throw std::invalid_argument("protocol: trials must be positive");
  const double log_tuples = config.senders * (config.k + config.kprime) *
                            std::log2(static_cast<double>(config.q));
  if (log_tuples > std::log2(static_cast<double>(kTupleCap)) + 1e-9) {
    throw std::invalid_argument(
        "protocol: q^{c(k+k')} exceeds the enumeration cap of " + std::to_string(kTupleCap) +
        "; shrink k, k' or the number of senders");
  }
  const std::int64_t alphabet = static_cast<std::int64_t>(
      gf::pow_u64(config.q, static_cast<std::uint32_t>(config.l)));
  if (config.channel.senders() != config.senders) {
    throw std::invalid_argument("protocol: channel sender count mismatch");
  }
  if (config.channel.alphabet_size() != alphabet) {
    throw std::invalid_argument("protocol: channel alphabet must have q^l points");
  }
}

CodeInstance build_code(const ProtocolConfig& config, std::mt19937_64& rng) {
  validate_config(config);
  CodeInstance inst{gf::make_code_pair(config.n, config.l, config.k, config.kprime, config.q, rng),
                    {},
                    config};
  const auto coset_len = static_cast<std::size_t>(inst.code.dims.coset_len());
  inst.coset_vectors.reserve(static_cast<std::size_t>(config.senders));
  for (int i = 0; i < config.senders; ++i) {
    inst.coset_vectors.push_back(gf::sample_vector(coset_len, config.q, rng));
  }
  return inst;
}

gf::FieldVector encode(const CodeInstance& instance, int player,
                       const gf::FieldVector& message, const gf::FieldVector& scramble) {
  const auto& dims = instance.code.dims;
  if (player < 0 || player >= instance.config.senders) {
    throw std::invalid_argument("encode: player index out of range");
  }
  if (static_cast<int>(message.size()) != dims.k ||
      static_cast<int>(scramble.size()) != dims.kprime) {
    throw std::invalid_argument("encode: message or scramble dimension mismatch");
  }
  const gf::FieldVector payload =
      instance.code.g3 * gf::FieldVector::concat(message, scramble);
  return instance.code.g1 *
         gf::FieldVector::concat(payload, instance.coset_vectors[static_cast<std::size_t>(player)]);
}

std::vector<int> codeword_symbols(const gf::FieldVector& codeword, std::uint32_t q, int l) {
  if (codeword.size() % static_cast<std::size_t>(l) != 0) {
    throw std::invalid_argument("codeword_symbols: length not a multiple of l");
  }
  const int n = static_cast<int>(codeword.size()) / l;
  std::vector<int> symbols(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    std::int64_t idx = 0;
    for (int d = l; d-- > 0;) {
      idx = idx * static_cast<std::int64_t>(q) +
            codeword[static_cast<std::size_t>(t * l + d)];
    }
    symbols[static_cast<std::size_t>(t)] = static_cast<int>(idx);
  }
  return symbols;
}

namespace {

int map_decode(const TupleLikelihood& table, std::span<const OutputPoint> outputs,
               std::mt19937_64& rng) {
  const int classes = table.msum_count();
  std::vector<double> posterior(static_cast<std::size_t>(classes), 0.0);
  for (std::int64_t t = 0; t < table.tuple_count(); ++t) {
    posterior[static_cast<std::size_t>(table.msum_of(t))] += table.likelihood(t, outputs);
  }
  double best = -1.0;
  for (double v : posterior) best = std::max(best, v);
  std::vector<int> winners;
  for (int m = 0; m < classes; ++m) {
    if (posterior[static_cast<std::size_t>(m)] == best) winners.push_back(m);
  }
  if (winners.size() == 1) return winners.front();
  return winners[static_cast<std::size_t>(rng() % winners.size())];
}

}  // namespace

gf::FieldVector decode_modulo_sum(const CodeInstance& instance, const MacModel& mac,
                                  std::span<const channel::OutputPoint> outputs,
                                  std::mt19937_64& rng) {
  if (static_cast<int>(outputs.size()) != instance.config.n) {
    throw std::invalid_argument("decode: expected n channel outputs");
  }
  TupleLikelihood table(instance, mac);
  const int chosen = map_decode(table, outputs, rng);
  return vector_from_index(chosen, instance.config.k, instance.config.q);
}

namespace {

info::InfoEstimate leakage_from_table(const CodeInstance& instance, const MacModel& mac,
                                      const TupleLikelihood& table,
                                      std::span<const int> coalition, std::int64_t samples,
                                      std::mt19937_64& rng) {
  const auto& cfg = instance.config;
  for (int j : coalition) {
    if (j < 0 || j >= cfg.senders) throw std::invalid_argument("leakage: bad coalition index");
  }
  if (coalition.empty() || static_cast<int>(coalition.size()) >= cfg.senders) {
    throw std::invalid_argument("leakage: coalition must be a nonempty proper subset");
  }
  if (samples < 2) throw std::invalid_argument("leakage: need at least 2 samples");

  const std::int64_t payloads = table.payload_count();
  const std::int64_t tuple_count = table.tuple_count();
  double count_j = static_cast<double>(tuple_count);
  for (std::size_t i = 0; i < coalition.size(); ++i) {
    count_j /= static_cast<double>(gf::pow_u64(cfg.q, static_cast<std::uint32_t>(cfg.k)));
  }

  std::vector<std::int64_t> payload(static_cast<std::size_t>(cfg.senders));
  std::vector<OutputPoint> y(static_cast<std::size_t>(cfg.n));
  std::vector<int> x(static_cast<std::size_t>(cfg.senders));
  std::vector<int> observed_m(coalition.size());

  double mean = 0.0, m2 = 0.0;
  std::int64_t used = 0;
  for (std::int64_t sample = 0; sample < samples; ++sample) {
    for (int i = 0; i < cfg.senders; ++i) {
      payload[static_cast<std::size_t>(i)] =
          static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(payloads));
    }
    for (int sym = 0; sym < cfg.n; ++sym) {
      for (int i = 0; i < cfg.senders; ++i) {
        x[static_cast<std::size_t>(i)] =
            table.symbols(i, payload[static_cast<std::size_t>(i)])[static_cast<std::size_t>(sym)];
      }
      y[static_cast<std::size_t>(sym)] = mac.sample(x, rng);
    }
    for (std::size_t ci = 0; ci < coalition.size(); ++ci) {
      const std::int64_t scr =
          static_cast<std::int64_t>(gf::pow_u64(cfg.q, static_cast<std::uint32_t>(cfg.kprime)));
      observed_m[ci] =
          static_cast<int>(payload[static_cast<std::size_t>(coalition[ci])] / scr);
    }

    double s_all = 0.0, s_coalition = 0.0;
    for (std::int64_t t = 0; t < tuple_count; ++t) {
      const double lik = table.likelihood(t, y);
      s_all += lik;
      bool match = true;
      for (std::size_t ci = 0; ci < coalition.size(); ++ci) {
        if (table.message_of(t, coalition[ci]) != observed_m[ci]) {
          match = false;
          break;
        }
      }
      if (match) s_coalition += lik;
    }
    if (!(s_all > 0.0) || !(s_coalition > 0.0)) continue;
    const double log_ratio = std::log(s_coalition / count_j) -
                             std::log(s_all / static_cast<double>(tuple_count));
    ++used;
    const double delta = log_ratio - mean;
    mean += delta / static_cast<double>(used);
    m2 += delta * (log_ratio - mean);
  }

  info::InfoEstimate est;
  est.method = info::Method::MonteCarlo;
  est.value = mean;
  est.evaluations = used;
  est.error_bar = used > 1 ? std::sqrt(m2 / static_cast<double>(used - 1) /
                                       static_cast<double>(used))
                           : 0.0;
  est.within_tolerance = used == samples;
  return est;
}

}  // namespace

info::InfoEstimate estimate_leakage(const CodeInstance& instance, const MacModel& mac,
                                    std::span<const int> coalition, std::int64_t samples,
                                    std::mt19937_64& rng) {
  TupleLikelihood table(instance, mac);
  return leakage_from_table(instance, mac, table, coalition, samples, rng);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1) + index * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

SimResult run_experiment(const ProtocolConfig& config) {
  validate_config(config);
  std::mt19937_64 build_rng(derive_seed(config.seed, 0, 0));
  const CodeInstance instance = build_code(config, build_rng);
  TupleLikelihood table(instance, config.channel);

  const std::int64_t payloads = table.payload_count();
  std::vector<std::int64_t> payload(static_cast<std::size_t>(config.senders));
  std::vector<OutputPoint> y(static_cast<std::size_t>(config.n));
  std::vector<int> x(static_cast<std::size_t>(config.senders));

  std::int64_t errors = 0;
  for (std::int64_t trial = 0; trial < config.trials; ++trial) {
    std::mt19937_64 rng(derive_seed(config.seed, 1, static_cast<std::uint64_t>(trial)));
    int msum = 0;
    for (int i = 0; i < config.senders; ++i) {
      payload[static_cast<std::size_t>(i)] =
          static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(payloads));
      const std::int64_t scr =
          static_cast<std::int64_t>(gf::pow_u64(config.q, static_cast<std::uint32_t>(config.kprime)));
      msum = gf::index_add(msum,
                           static_cast<int>(payload[static_cast<std::size_t>(i)] / scr),
                           config.q, config.k);
    }
    for (int sym = 0; sym < config.n; ++sym) {
      for (int i = 0; i < config.senders; ++i) {
        x[static_cast<std::size_t>(i)] =
            table.symbols(i, payload[static_cast<std::size_t>(i)])[static_cast<std::size_t>(sym)];
      }
      y[static_cast<std::size_t>(sym)] = config.channel.sample(x, rng);
    }
    if (map_decode(table, y, rng) != msum) ++errors;
  }

  SimResult result;
  result.trials = config.trials;
  result.error_rate = static_cast<double>(errors) / static_cast<double>(config.trials);
  std::tie(result.ci_low, result.ci_high) = wilson_interval(errors, config.trials);

  const std::int64_t samples =
      config.leakage_samples > 0 ? config.leakage_samples : config.trials;
  std::uint64_t coalition_stream = 2;
  for (const auto& coalition : [&] {
         std::vector<std::vector<int>> out;
         const unsigned full = (1u << config.senders) - 1u;
         for (unsigned mask = 1u; mask < full; ++mask) {
           std::vector<int> j;
           for (int i = 0; i < config.senders; ++i)
             if (mask & (1u << i)) j.push_back(i);
           out.push_back(std::move(j));
         }
         return out;
       }()) {
    std::mt19937_64 rng(derive_seed(config.seed, coalition_stream++, 0));
    result.leakage.emplace_back(coalition,
                                leakage_from_table(instance, config.channel, table, coalition,
                                                   samples, rng));
  }
  return result;
}

std::pair<double, double> wilson_interval(std::int64_t errors, std::int64_t trials, double z) {
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace modsum::sim

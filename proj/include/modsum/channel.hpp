#pragma once

// Multiple access channel models. Every model is an immutable value: c
// senders share one input alphabet, indexed 0..alphabet_size()-1, and the
// output is a point on the real line, in the complex plane, or in a finite
// set. Alphabets with a field structure F_q^l map an index to its
// little-endian base-q digit vector.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "modsum/mixture.hpp"

namespace modsum::channel {

enum class OutputSpace { RealLine, ComplexPlane, Discrete };

using OutputPoint = std::variant<double, std::complex<double>, int>;

// Y = amplitude * (x_1 + ... + x_c) + N over the reals, inputs in {0..p-1}
// with integer addition in the mean; N is centered Gaussian with the given
// variance.
struct RealGaussianMac {
  double amplitude = 1.0;
  double noise_variance = 1.0;
  int p = 2;
  int senders = 2;
};

// Y = u(x_1) + ... + u(x_c) + N on the complex plane. The constellation is
// the origin plus the six points amplitude * exp(i k pi / 3); labels may be
// permuted. N is circularly symmetric with total variance noise_variance.
struct ComplexGaussianMac {
  double amplitude = 1.0;
  double noise_variance = 1.0;
  int senders = 2;
  std::vector<int> labels;  // label -> point index, size 7; empty = identity
};

// Y = x_1 + ... + x_c + N over F_q^l with noise pmf over the q^l points.
struct AdditiveSymmetricMac {
  std::uint32_t q = 2;
  int l = 1;
  int senders = 2;
  std::vector<double> noise;
};

// Arbitrary finite-output conditional table: row per input tuple (odometer
// order, first sender fastest), column per output point.
struct TableMac {
  int senders = 2;
  int alphabet = 2;
  int outputs = 2;
  std::vector<double> table;
};

// Largest input-tuple enumeration handled by the exact evaluators.
inline constexpr std::int64_t kEnumerationCap = 16384;

class MacModel {
 public:
  static MacModel real_gaussian(double amplitude, double noise_variance, int p, int senders);
  static MacModel complex_gaussian(double amplitude, double noise_variance, int senders,
                                   std::vector<int> labels = {});
  static MacModel additive(std::uint32_t q, int l, int senders, std::vector<double> noise);
  static MacModel table(int senders, int alphabet, int outputs, std::vector<double> table);

  int senders() const;
  int alphabet_size() const;
  OutputSpace output_space() const;

  // Field structure of the input alphabet, when it has one (prime q).
  bool has_field_structure() const;
  std::uint32_t field_order() const;  // q
  int field_dim() const;              // l

  bool is_gaussian_family() const;
  double gaussian_variance() const;
  std::complex<double> mean_of(std::span<const int> inputs) const;

  double density(const OutputPoint& y, std::span<const int> inputs) const;
  OutputPoint sample(std::span<const int> inputs, std::mt19937_64& rng) const;

  // Discrete kinds: conditional pmf over output indices.
  std::vector<double> output_pmf(std::span<const int> inputs) const;
  int discrete_output_count() const;

  const RealGaussianMac* as_real() const { return std::get_if<RealGaussianMac>(&model_); }
  const ComplexGaussianMac* as_complex() const { return std::get_if<ComplexGaussianMac>(&model_); }
  const AdditiveSymmetricMac* as_additive() const {
    return std::get_if<AdditiveSymmetricMac>(&model_);
  }
  const TableMac* as_table() const { return std::get_if<TableMac>(&model_); }

  std::vector<std::complex<double>> constellation() const;  // complex model only

 private:
  explicit MacModel(std::variant<RealGaussianMac, ComplexGaussianMac, AdditiveSymmetricMac,
                                 TableMac> m)
      : model_(std::move(m)) {}
  std::variant<RealGaussianMac, ComplexGaussianMac, AdditiveSymmetricMac, TableMac> model_;
};

// sum_i coeffs[i] * x_i == rhs over F_q^l (componentwise). coeffs has one
// entry per sender. Fixing input i to value a is the constraint e_i * x = a.
struct LinearConstraint {
  std::vector<std::uint32_t> coeffs;
  int rhs;
};

LinearConstraint fix_input(int sender, int value, int senders);

// All input tuples consistent with the constraints, each as a vector of c
// alphabet indices. Throws when p^c exceeds the enumeration cap.
std::vector<std::vector<int>> enumerate_inputs(const MacModel& mac,
                                               std::span<const LinearConstraint> constraints = {});

// Exact output mixture of a Gaussian-family model with unconstrained inputs
// uniform. Components with equal means are merged.
info::GaussianMixture output_mixture(const MacModel& mac,
                                     std::span<const LinearConstraint> constraints = {});

// Family of output maps indexed by the input alphabet. Continuous actions
// translate by shift[x]; discrete actions permute output indices.
struct SymmetryAction {
  std::vector<std::complex<double>> shifts;       // continuous translation
  std::vector<std::vector<int>> permutations;     // discrete relabeling
  bool discrete = false;

  static SymmetryAction translation(std::vector<std::complex<double>> shifts);
  static SymmetryAction additive_translation(std::uint32_t q, int l);
  static SymmetryAction identity_continuous(int alphabet);

  OutputPoint apply(int x, const OutputPoint& y) const;

  // max over x1, x2 of the defect in f_{x1} o f_{x2} = f_{x1+x2}; exact zero
  // for group translations.
  double composition_residual(std::uint32_t q, int l) const;
};

struct SymmetryGrid {
  int cells = 48;
  double pad_sigmas = 8.0;
};

struct SymmetryReport {
  bool symmetric = true;
  double worst_violation = 0.0;
};

// Checks, for every input tuple, every shift x and every grid cell B, that
// the probability of the translated cell under the unshifted inputs matches
// the probability of B after adding x to any single coordinate.
SymmetryReport is_symmetric(const MacModel& mac, const SymmetryAction& action,
                            const SymmetryGrid& grid = {}, double tol = 1e-9);

}  // namespace modsum::channel

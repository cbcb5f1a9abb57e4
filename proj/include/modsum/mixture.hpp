#pragma once

// Finite Gaussian mixtures over the real line or the complex plane, discrete
// probability vectors, and their entropy estimators.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "modsum/quadrature.hpp"

namespace modsum::info {

enum class Method { Quadrature, MonteCarlo };

// One numeric answer plus how it was obtained. Quadrature estimates carry
// the summed panel error, Monte Carlo estimates carry a standard error.
struct InfoEstimate {
  double value = 0.0;
  Method method = Method::Quadrature;
  double error_bar = 0.0;
  std::int64_t evaluations = 0;
  bool within_tolerance = true;
};

struct QuadratureOptions {
  double abs_tol = 1e-8;
  int max_panels_1d = 20000;
  int max_panels_2d = 60000;
  double pad_sigmas = 10.0;  // integration window padding around the means
};

struct MixtureComponent {
  double weight = 1.0;
  std::complex<double> mean{0.0, 0.0};
  double variance = 1.0;
};

class GaussianMixture {
 public:
  // planar = false: density on the real line, (2*pi*v)^{-1/2} exp(-(y-m)^2/(2v)).
  // planar = true: circularly symmetric density on C with total variance v,
  // (pi*v)^{-1} exp(-|y-m|^2 / v).
  GaussianMixture(std::vector<MixtureComponent> components, bool planar = false);

  static GaussianMixture single(double mean, double variance);

  const std::vector<MixtureComponent>& components() const noexcept { return components_; }
  bool planar() const noexcept { return planar_; }

  double pdf(double y) const;
  double pdf(std::complex<double> y) const;
  double cdf(double y) const;  // line mixtures only

  // [lo, hi] covering all means padded by pad_sigmas * max std deviation.
  void window(double pad_sigmas, double& lo, double& hi) const;                   // line
  void window2d(double pad_sigmas, double& re_lo, double& re_hi, double& im_lo,
                double& im_hi) const;                                             // plane

  double sample_line(std::mt19937_64& rng) const;
  std::complex<double> sample_plane(std::mt19937_64& rng) const;

  // Translate every mean by the same offset (entropy is invariant under this).
  GaussianMixture translated(std::complex<double> offset) const;

 private:
  std::vector<MixtureComponent> components_;
  bool planar_ = false;
};

// Collapse components with identical means (exact comparison) into one
// weighted component. Inputs from finite enumerations hit this path.
std::vector<MixtureComponent> merge_equal_means(std::vector<MixtureComponent> comps);

// Differential entropy in nats by adaptive quadrature.
InfoEstimate mixture_entropy(const GaussianMixture& gm,
                             const QuadratureOptions& opts = {});

// Differential entropy in nats by stratified Monte Carlo: samples are
// allocated to components proportionally to their weights.
InfoEstimate mixture_entropy_mc(const GaussianMixture& gm, std::int64_t samples,
                                std::mt19937_64& rng);

// -sum p_i ln p_i with 0 ln 0 = 0.
double discrete_entropy(std::span<const double> dist);

// Uniform double in [0, 1) and a standard normal draw, both built directly
// from the generator output so streams are reproducible.
double uniform_unit(std::mt19937_64& rng);
double normal_draw(std::mt19937_64& rng);

}  // namespace modsum::info

#include "modsum/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace modsum::info {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate(const std::vector<MixtureComponent>& comps) {
  if (comps.empty()) throw std::invalid_argument("GaussianMixture: no components");
  double total = 0.0;
  for (const auto& c : comps) {
    if (!(c.weight >= 0.0)) throw std::invalid_argument("GaussianMixture: negative weight");
    if (!(c.variance > 0.0)) throw std::invalid_argument("GaussianMixture: variance must be positive");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("GaussianMixture: weights must sum to 1");
  }
}

}  // namespace

GaussianMixture::GaussianMixture(std::vector<MixtureComponent> components, bool planar)
    : components_(std::move(components)), planar_(planar) {
  validate(components_);
  if (!planar_) {
    for (const auto& c : components_) {
      if (c.mean.imag() != 0.0) {
        throw std::invalid_argument("GaussianMixture: line mixture with complex mean");
      }
    }
  }
}

GaussianMixture GaussianMixture::single(double mean, double variance) {
  return GaussianMixture({{1.0, {mean, 0.0}, variance}}, false);
}

double GaussianMixture::pdf(double y) const {
  double f = 0.0;
  for (const auto& c : components_) {
    const double d = y - c.mean.real();
    f += c.weight * std::exp(-0.5 * d * d / c.variance) / std::sqrt(kTwoPi * c.variance);
  }
  return f;
}

double GaussianMixture::pdf(std::complex<double> y) const {
  double f = 0.0;
  for (const auto& c : components_) {
    const double d2 = std::norm(y - c.mean);
    f += c.weight * std::exp(-d2 / c.variance) / (std::numbers::pi * c.variance);
  }
  return f;
}

double GaussianMixture::cdf(double y) const {
  double f = 0.0;
  for (const auto& c : components_) {
    const double z = (y - c.mean.real()) / std::sqrt(2.0 * c.variance);
    f += c.weight * 0.5 * std::erfc(-z);
  }
  return f;
}

void GaussianMixture::window(double pad_sigmas, double& lo, double& hi) const {
  double max_sigma = 0.0;
  lo = components_.front().mean.real();
  hi = lo;
  for (const auto& c : components_) {
    lo = std::min(lo, c.mean.real());
    hi = std::max(hi, c.mean.real());
    max_sigma = std::max(max_sigma, std::sqrt(c.variance));
  }
  lo -= pad_sigmas * max_sigma;
  hi += pad_sigmas * max_sigma;
}

void GaussianMixture::window2d(double pad_sigmas, double& re_lo, double& re_hi,
                               double& im_lo, double& im_hi) const {
  double max_sigma = 0.0;
  re_lo = re_hi = components_.front().mean.real();
  im_lo = im_hi = components_.front().mean.imag();
  for (const auto& c : components_) {
    re_lo = std::min(re_lo, c.mean.real());
    re_hi = std::max(re_hi, c.mean.real());
    im_lo = std::min(im_lo, c.mean.imag());
    im_hi = std::max(im_hi, c.mean.imag());
    max_sigma = std::max(max_sigma, std::sqrt(c.variance));
  }
  re_lo -= pad_sigmas * max_sigma;
  re_hi += pad_sigmas * max_sigma;
  im_lo -= pad_sigmas * max_sigma;
  im_hi += pad_sigmas * max_sigma;
}

double GaussianMixture::sample_line(std::mt19937_64& rng) const {
  const double u = uniform_unit(rng);
  double acc = 0.0;
  const MixtureComponent* chosen = &components_.back();
  for (const auto& c : components_) {
    acc += c.weight;
    if (u < acc) {
      chosen = &c;
      break;
    }
  }
  return chosen->mean.real() + std::sqrt(chosen->variance) * normal_draw(rng);
}

std::complex<double> GaussianMixture::sample_plane(std::mt19937_64& rng) const {
  const double u = uniform_unit(rng);
  double acc = 0.0;
  const MixtureComponent* chosen = &components_.back();
  for (const auto& c : components_) {
    acc += c.weight;
    if (u < acc) {
      chosen = &c;
      break;
    }
  }
  const double axis_sigma = std::sqrt(0.5 * chosen->variance);
  return chosen->mean +
         std::complex<double>(axis_sigma * normal_draw(rng), axis_sigma * normal_draw(rng));
}

GaussianMixture GaussianMixture::translated(std::complex<double> offset) const {
  std::vector<MixtureComponent> comps = components_;
  for (auto& c : comps) c.mean += offset;
  return GaussianMixture(std::move(comps), planar_);
}

std::vector<MixtureComponent> merge_equal_means(std::vector<MixtureComponent> comps) {
  std::sort(comps.begin(), comps.end(), [](const MixtureComponent& a, const MixtureComponent& b) {
    if (a.mean.real() != b.mean.real()) return a.mean.real() < b.mean.real();
    if (a.mean.imag() != b.mean.imag()) return a.mean.imag() < b.mean.imag();
    return a.variance < b.variance;
  });
  std::vector<MixtureComponent> out;
  for (const auto& c : comps) {
    if (!out.empty() && out.back().mean == c.mean && out.back().variance == c.variance) {
      out.back().weight += c.weight;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

InfoEstimate mixture_entropy(const GaussianMixture& gm, const QuadratureOptions& opts) {
  InfoEstimate est;
  est.method = Method::Quadrature;
  const auto integrand_value = [](double f) { return f > 0.0 ? -f * std::log(f) : 0.0; };
  quad::QuadResult qr;
  if (!gm.planar()) {
    double lo, hi;
    gm.window(opts.pad_sigmas, lo, hi);
    qr = quad::integrate([&](double y) { return integrand_value(gm.pdf(y)); }, lo, hi,
                         opts.abs_tol, opts.max_panels_1d);
  } else {
    double re_lo, re_hi, im_lo, im_hi;
    gm.window2d(opts.pad_sigmas, re_lo, re_hi, im_lo, im_hi);
    qr = quad::integrate_2d(
        [&](double re, double im) { return integrand_value(gm.pdf({re, im})); }, re_lo,
        re_hi, im_lo, im_hi, opts.abs_tol, opts.max_panels_2d);
  }
  est.value = qr.value;
  est.error_bar = qr.error_estimate;
  est.evaluations = qr.evaluations;
  est.within_tolerance = qr.converged;
  return est;
}

InfoEstimate mixture_entropy_mc(const GaussianMixture& gm, std::int64_t samples,
                                std::mt19937_64& rng) {
  if (samples < 2) throw std::invalid_argument("mixture_entropy_mc: need at least 2 samples");
  InfoEstimate est;
  est.method = Method::MonteCarlo;
  const auto& comps = gm.components();

  // Proportional allocation, remainders to the largest weights.
  std::vector<std::int64_t> alloc(comps.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    alloc[i] = static_cast<std::int64_t>(comps[i].weight * static_cast<double>(samples));
    assigned += alloc[i];
  }
  std::size_t spill = 0;
  while (assigned < samples) {
    alloc[spill % comps.size()] += 1;
    ++assigned;
    ++spill;
  }

  double value = 0.0;
  double variance_sum = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (alloc[i] == 0) continue;
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t s = 0; s < alloc[i]; ++s) {
      double logf;
      if (!gm.planar()) {
        const double y =
            comps[i].mean.real() + std::sqrt(comps[i].variance) * normal_draw(rng);
        logf = -std::log(gm.pdf(y));
      } else {
        const double axis_sigma = std::sqrt(0.5 * comps[i].variance);
        const std::complex<double> y =
            comps[i].mean +
            std::complex<double>(axis_sigma * normal_draw(rng), axis_sigma * normal_draw(rng));
        logf = -std::log(gm.pdf(y));
      }
      const double delta = logf - mean;
      mean += delta / static_cast<double>(s + 1);
      m2 += delta * (logf - mean);
    }
    value += comps[i].weight * mean;
    if (alloc[i] > 1) {
      const double var = m2 / static_cast<double>(alloc[i] - 1);
      variance_sum += comps[i].weight * comps[i].weight * var / static_cast<double>(alloc[i]);
    }
  }
  est.value = value;
  est.error_bar = std::sqrt(variance_sum);
  est.evaluations = samples;
  return est;
}

double discrete_entropy(std::span<const double> dist) {
  double h = 0.0;
  for (double p : dist) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double normal_draw(std::mt19937_64& rng) {
  // Box-Muller; uses two fresh uniforms per draw so the stream layout stays
  // independent of call history.
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace modsum::info

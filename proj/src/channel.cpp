#include "modsum/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "modsum/gf.hpp"

namespace modsum::channel {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_inputs(int senders, int alphabet, std::span<const int> inputs) {
  if (static_cast<int>(inputs.size()) != senders) {
    throw std::invalid_argument("channel: expected " + std::to_string(senders) +
                                " inputs, got " + std::to_string(inputs.size()));
  }
  for (int x : inputs) {
    if (x < 0 || x >= alphabet) {
      throw std::invalid_argument("channel: input symbol " + std::to_string(x) +
                                  " outside alphabet of size " + std::to_string(alphabet));
    }
  }
}

std::vector<std::complex<double>> hex_constellation(double amplitude) {
  std::vector<std::complex<double>> pts;
  pts.reserve(7);
  pts.emplace_back(0.0, 0.0);
  for (int k = 0; k < 6; ++k) {
    // Listed in the order: 0 deg, 120, 60, 240, 300, 180.
    static constexpr int order[6] = {0, 2, 1, 4, 5, 3};
    const double angle = order[k] * std::numbers::pi / 3.0;
    pts.emplace_back(amplitude * std::cos(angle), amplitude * std::sin(angle));
  }
  return pts;
}

}  // namespace

MacModel MacModel::real_gaussian(double amplitude, double noise_variance, int p, int senders) {
  if (p < 2 || senders < 1) throw std::invalid_argument("real_gaussian: bad dimensions");
  if (!(noise_variance > 0.0)) throw std::invalid_argument("real_gaussian: variance must be positive");
  if (amplitude < 0.0) throw std::invalid_argument("real_gaussian: amplitude must be nonnegative");
  return MacModel(RealGaussianMac{amplitude, noise_variance, p, senders});
}

MacModel MacModel::complex_gaussian(double amplitude, double noise_variance, int senders,
                                    std::vector<int> labels) {
  if (senders < 1) throw std::invalid_argument("complex_gaussian: bad sender count");
  if (!(noise_variance > 0.0)) throw std::invalid_argument("complex_gaussian: variance must be positive");
  if (!labels.empty()) {
    if (labels.size() != 7) throw std::invalid_argument("complex_gaussian: label permutation needs 7 entries");
    std::vector<int> seen(7, 0);
    for (int v : labels) {
      if (v < 0 || v >= 7 || seen[v]++) {
        throw std::invalid_argument("complex_gaussian: labels must be a permutation of 0..6");
      }
    }
  }
  return MacModel(ComplexGaussianMac{amplitude, noise_variance, senders, std::move(labels)});
}

MacModel MacModel::additive(std::uint32_t q, int l, int senders, std::vector<double> noise) {
  if (!gf::is_prime(q)) throw std::invalid_argument("additive: q must be prime");
  if (l < 1 || senders < 1) throw std::invalid_argument("additive: bad dimensions");
  const std::uint64_t points = gf::pow_u64(q, static_cast<std::uint32_t>(l));
  if (noise.size() != points) {
    throw std::invalid_argument("additive: noise table needs q^l entries");
  }
  double total = 0.0;
  for (double w : noise) {
    if (w < 0.0) throw std::invalid_argument("additive: negative noise probability");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("additive: noise pmf must sum to 1");
  return MacModel(AdditiveSymmetricMac{q, l, senders, std::move(noise)});
}

MacModel MacModel::table(int senders, int alphabet, int outputs, std::vector<double> table) {
  if (senders < 1 || alphabet < 2 || outputs < 1) throw std::invalid_argument("table: bad dimensions");
  std::uint64_t rows = 1;
  for (int i = 0; i < senders; ++i) rows *= static_cast<std::uint64_t>(alphabet);
  if (table.size() != rows * static_cast<std::uint64_t>(outputs)) {
    throw std::invalid_argument("table: size must be alphabet^senders * outputs");
  }
  for (std::uint64_t r = 0; r < rows; ++r) {
    double total = 0.0;
    for (int y = 0; y < outputs; ++y) {
      const double v = table[r * outputs + y];
      if (v < 0.0) throw std::invalid_argument("table: negative probability");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("table: rows must sum to 1");
  }
  return MacModel(TableMac{senders, alphabet, outputs, std::move(table)});
}

int MacModel::senders() const {
  return std::visit([](const auto& m) { return m.senders; }, model_);
}

int MacModel::alphabet_size() const {
  if (const auto* r = as_real()) return r->p;
  if (as_complex()) return 7;
  if (const auto* a = as_additive())
    return static_cast<int>(gf::pow_u64(a->q, static_cast<std::uint32_t>(a->l)));
  return as_table()->alphabet;
}

OutputSpace MacModel::output_space() const {
  if (as_real()) return OutputSpace::RealLine;
  if (as_complex()) return OutputSpace::ComplexPlane;
  return OutputSpace::Discrete;
}

bool MacModel::has_field_structure() const {
  if (const auto* r = as_real()) return gf::is_prime(static_cast<std::uint32_t>(r->p));
  if (as_complex()) return true;
  if (as_additive()) return true;
  return gf::is_prime(static_cast<std::uint32_t>(as_table()->alphabet));
}

std::uint32_t MacModel::field_order() const {
  if (!has_field_structure()) {
    throw std::invalid_argument("channel: alphabet has no prime field structure");
  }
  if (const auto* r = as_real()) return static_cast<std::uint32_t>(r->p);
  if (as_complex()) return 7;
  if (const auto* a = as_additive()) return a->q;
  return static_cast<std::uint32_t>(as_table()->alphabet);
}

int MacModel::field_dim() const {
  if (const auto* a = as_additive()) return a->l;
  (void)field_order();
  return 1;
}

bool MacModel::is_gaussian_family() const { return as_real() || as_complex(); }

double MacModel::gaussian_variance() const {
  if (const auto* r = as_real()) return r->noise_variance;
  if (const auto* c = as_complex()) return c->noise_variance;
  throw std::invalid_argument("channel: not a Gaussian-family model");
}

std::vector<std::complex<double>> MacModel::constellation() const {
  const auto* c = as_complex();
  if (!c) throw std::invalid_argument("channel: constellation only defined for the complex model");
  auto pts = hex_constellation(c->amplitude);
  if (c->labels.empty()) return pts;
  std::vector<std::complex<double>> mapped(7);
  for (int label = 0; label < 7; ++label) mapped[label] = pts[c->labels[label]];
  return mapped;
}

std::complex<double> MacModel::mean_of(std::span<const int> inputs) const {
  check_inputs(senders(), alphabet_size(), inputs);
  if (const auto* r = as_real()) {
    long sum = 0;
    for (int x : inputs) sum += x;
    return {r->amplitude * static_cast<double>(sum), 0.0};
  }
  if (as_complex()) {
    const auto pts = constellation();
    std::complex<double> mean{0.0, 0.0};
    for (int x : inputs) mean += pts[x];
    return mean;
  }
  throw std::invalid_argument("channel: mean only defined for Gaussian-family models");
}

double MacModel::density(const OutputPoint& y, std::span<const int> inputs) const {
  check_inputs(senders(), alphabet_size(), inputs);
  if (const auto* r = as_real()) {
    const double* yv = std::get_if<double>(&y);
    if (!yv) throw std::invalid_argument("channel: real model expects a real output point");
    const double d = *yv - mean_of(inputs).real();
    return std::exp(-0.5 * d * d / r->noise_variance) /
           std::sqrt(kTwoPi * r->noise_variance);
  }
  if (const auto* c = as_complex()) {
    const std::complex<double>* yv = std::get_if<std::complex<double>>(&y);
    if (!yv) throw std::invalid_argument("channel: complex model expects a complex output point");
    const double d2 = std::norm(*yv - mean_of(inputs));
    return std::exp(-d2 / c->noise_variance) / (std::numbers::pi * c->noise_variance);
  }
  const int* yv = std::get_if<int>(&y);
  if (!yv) throw std::invalid_argument("channel: discrete model expects an output index");
  const auto pmf = output_pmf(inputs);
  if (*yv < 0 || *yv >= static_cast<int>(pmf.size())) {
    throw std::invalid_argument("channel: output index out of range");
  }
  return pmf[static_cast<std::size_t>(*yv)];
}

std::vector<double> MacModel::output_pmf(std::span<const int> inputs) const {
  check_inputs(senders(), alphabet_size(), inputs);
  if (const auto* a = as_additive()) {
    const int points = alphabet_size();
    int shift = 0;
    for (int x : inputs) shift = gf::index_add(shift, x, a->q, a->l);
    std::vector<double> pmf(static_cast<std::size_t>(points));
    for (int y = 0; y < points; ++y) {
      pmf[static_cast<std::size_t>(y)] =
          a->noise[static_cast<std::size_t>(gf::index_sub(y, shift, a->q, a->l))];
    }
    return pmf;
  }
  if (const auto* t = as_table()) {
    std::uint64_t row = 0;
    std::uint64_t stride = 1;
    for (int i = 0; i < t->senders; ++i) {
      row += stride * static_cast<std::uint64_t>(inputs[static_cast<std::size_t>(i)]);
      stride *= static_cast<std::uint64_t>(t->alphabet);
    }
    const auto* base = t->table.data() + row * static_cast<std::uint64_t>(t->outputs);
    return {base, base + t->outputs};
  }
  throw std::invalid_argument("channel: output_pmf requires a discrete model");
}

int MacModel::discrete_output_count() const {
  if (as_additive()) return alphabet_size();
  if (const auto* t = as_table()) return t->outputs;
  throw std::invalid_argument("channel: not a discrete model");
}

OutputPoint MacModel::sample(std::span<const int> inputs, std::mt19937_64& rng) const {
  check_inputs(senders(), alphabet_size(), inputs);
  if (const auto* r = as_real()) {
    return mean_of(inputs).real() + std::sqrt(r->noise_variance) * info::normal_draw(rng);
  }
  if (const auto* c = as_complex()) {
    const double axis_sigma = std::sqrt(0.5 * c->noise_variance);
    return mean_of(inputs) + std::complex<double>(axis_sigma * info::normal_draw(rng),
                                                  axis_sigma * info::normal_draw(rng));
  }
  const auto pmf = output_pmf(inputs);
  const double u = info::uniform_unit(rng);
  double acc = 0.0;
  for (std::size_t y = 0; y < pmf.size(); ++y) {
    acc += pmf[y];
    if (u < acc) return static_cast<int>(y);
  }
  return static_cast<int>(pmf.size()) - 1;
}

LinearConstraint fix_input(int sender, int value, int senders) {
  LinearConstraint c;
  c.coeffs.assign(static_cast<std::size_t>(senders), 0u);
  c.coeffs[static_cast<std::size_t>(sender)] = 1u;
  c.rhs = value;
  return c;
}

std::vector<std::vector<int>> enumerate_inputs(const MacModel& mac,
                                               std::span<const LinearConstraint> constraints) {
  const int c = mac.senders();
  const int p = mac.alphabet_size();
  std::int64_t tuples = 1;
  for (int i = 0; i < c; ++i) {
    tuples *= p;
    if (tuples > kEnumerationCap) {
      throw std::invalid_argument("channel: input alphabet too large to enumerate (cap " +
                                  std::to_string(kEnumerationCap) + ")");
    }
  }
  std::uint32_t q = 0;
  int l = 1;
  if (!constraints.empty()) {
    q = mac.field_order();
    l = mac.field_dim();
    for (const auto& con : constraints) {
      if (static_cast<int>(con.coeffs.size()) != c) {
        throw std::invalid_argument("channel: constraint has wrong coefficient count");
      }
      if (con.rhs < 0 || con.rhs >= p) {
        throw std::invalid_argument("channel: constraint value outside alphabet");
      }
    }
  }

  std::vector<std::vector<int>> out;
  std::vector<int> x(static_cast<std::size_t>(c), 0);
  for (std::int64_t t = 0; t < tuples; ++t) {
    std::int64_t rest = t;
    for (int i = 0; i < c; ++i) {
      x[static_cast<std::size_t>(i)] = static_cast<int>(rest % p);
      rest /= p;
    }
    bool ok = true;
    for (const auto& con : constraints) {
      int acc = 0;
      for (int i = 0; i < c; ++i) {
        acc = gf::index_add(acc,
                            gf::index_scale(con.coeffs[static_cast<std::size_t>(i)],
                                            x[static_cast<std::size_t>(i)], q, l),
                            q, l);
      }
      if (acc != con.rhs) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(x);
  }
  return out;
}

info::GaussianMixture output_mixture(const MacModel& mac,
                                     std::span<const LinearConstraint> constraints) {
  if (!mac.is_gaussian_family()) {
    throw std::invalid_argument("channel: output_mixture requires a Gaussian-family model");
  }
  const auto tuples = enumerate_inputs(mac, constraints);
  if (tuples.empty()) throw std::invalid_argument("channel: constraints are unsatisfiable");
  const double w = 1.0 / static_cast<double>(tuples.size());
  const double v = mac.gaussian_variance();
  std::vector<info::MixtureComponent> comps;
  comps.reserve(tuples.size());
  for (const auto& x : tuples) comps.push_back({w, mac.mean_of(x), v});
  return info::GaussianMixture(merge_equal_means(std::move(comps)),
                               mac.output_space() == OutputSpace::ComplexPlane);
}

SymmetryAction SymmetryAction::translation(std::vector<std::complex<double>> shifts) {
  SymmetryAction a;
  a.shifts = std::move(shifts);
  return a;
}

SymmetryAction SymmetryAction::additive_translation(std::uint32_t q, int l) {
  SymmetryAction a;
  a.discrete = true;
  const int points = static_cast<int>(gf::pow_u64(q, static_cast<std::uint32_t>(l)));
  a.permutations.resize(static_cast<std::size_t>(points));
  for (int x = 0; x < points; ++x) {
    auto& perm = a.permutations[static_cast<std::size_t>(x)];
    perm.resize(static_cast<std::size_t>(points));
    for (int y = 0; y < points; ++y) perm[static_cast<std::size_t>(y)] = gf::index_add(y, x, q, l);
  }
  return a;
}

SymmetryAction SymmetryAction::identity_continuous(int alphabet) {
  SymmetryAction a;
  a.shifts.assign(static_cast<std::size_t>(alphabet), {0.0, 0.0});
  return a;
}

OutputPoint SymmetryAction::apply(int x, const OutputPoint& y) const {
  if (discrete) {
    const int* yi = std::get_if<int>(&y);
    if (!yi) throw std::invalid_argument("SymmetryAction: expected discrete output");
    return permutations[static_cast<std::size_t>(x)][static_cast<std::size_t>(*yi)];
  }
  const std::complex<double> s = shifts[static_cast<std::size_t>(x)];
  if (const double* yr = std::get_if<double>(&y)) return *yr + s.real();
  return std::get<std::complex<double>>(y) + s;
}

double SymmetryAction::composition_residual(std::uint32_t q, int l) const {
  const int points = discrete ? static_cast<int>(permutations.size())
                              : static_cast<int>(shifts.size());
  double worst = 0.0;
  for (int x1 = 0; x1 < points; ++x1) {
    for (int x2 = 0; x2 < points; ++x2) {
      const int x12 = gf::index_add(x1, x2, q, l);
      if (discrete) {
        for (int y = 0; y < points; ++y) {
          const int composed = permutations[static_cast<std::size_t>(x1)][static_cast<std::size_t>(
              permutations[static_cast<std::size_t>(x2)][static_cast<std::size_t>(y)])];
          const int direct = permutations[static_cast<std::size_t>(x12)][static_cast<std::size_t>(y)];
          if (composed != direct) worst = 1.0;
        }
      } else {
        const double defect = std::abs(shifts[static_cast<std::size_t>(x1)] +
                                       shifts[static_cast<std::size_t>(x2)] -
                                       shifts[static_cast<std::size_t>(x12)]);
        worst = std::max(worst, defect);
      }
    }
  }
  return worst;
}

namespace {

double gaussian_interval_prob(double mean, double variance, double lo, double hi) {
  const double s = std::sqrt(2.0 * variance);
  return 0.5 * (std::erf((hi - mean) / s) - std::erf((lo - mean) / s));
}

// Probability of the axis-aligned cell under the model, inputs fixed.
double cell_probability(const MacModel& mac, std::span<const int> inputs, double re_lo,
                        double re_hi, double im_lo, double im_hi) {
  const std::complex<double> mean = mac.mean_of(inputs);
  if (mac.output_space() == OutputSpace::RealLine) {
    return gaussian_interval_prob(mean.real(), mac.gaussian_variance(), re_lo, re_hi);
  }
  const double axis_var = 0.5 * mac.gaussian_variance();
  return gaussian_interval_prob(mean.real(), axis_var, re_lo, re_hi) *
         gaussian_interval_prob(mean.imag(), axis_var, im_lo, im_hi);
}

}  // namespace

SymmetryReport is_symmetric(const MacModel& mac, const SymmetryAction& action,
                            const SymmetryGrid& grid, double tol) {
  SymmetryReport report;
  const int c = mac.senders();
  const int p = mac.alphabet_size();
  const auto tuples = enumerate_inputs(mac);

  if (mac.output_space() == OutputSpace::Discrete) {
    if (!action.discrete) throw std::invalid_argument("is_symmetric: action kind mismatch");
    const int ny = mac.discrete_output_count();
    std::vector<int> shifted(static_cast<std::size_t>(c));
    for (const auto& x : tuples) {
      const auto base_pmf = mac.output_pmf(x);
      for (int shift = 0; shift < p; ++shift) {
        const auto& perm = action.permutations[static_cast<std::size_t>(shift)];
        for (int j = 0; j < c; ++j) {
          shifted.assign(x.begin(), x.end());
          shifted[static_cast<std::size_t>(j)] =
              gf::index_add(x[static_cast<std::size_t>(j)], shift, mac.field_order(),
                            mac.field_dim());
          const auto moved_pmf = mac.output_pmf(shifted);
          for (int y = 0; y < ny; ++y) {
            // W_{x + shift e_j}({y}) vs W_x({f_shift(y)})
            const double lhs = moved_pmf[static_cast<std::size_t>(y)];
            const double rhs = base_pmf[static_cast<std::size_t>(perm[static_cast<std::size_t>(y)])];
            report.worst_violation = std::max(report.worst_violation, std::abs(lhs - rhs));
          }
        }
      }
    }
    report.symmetric = report.worst_violation <= tol;
    return report;
  }

  if (action.discrete) throw std::invalid_argument("is_symmetric: action kind mismatch");
  if (!mac.is_gaussian_family()) {
    throw std::invalid_argument("is_symmetric: unsupported continuous model");
  }

  // Grid window covering all channel means plus padding.
  double re_lo = 0, re_hi = 0, im_lo = 0, im_hi = 0;
  bool first = true;
  for (const auto& x : tuples) {
    const auto m = mac.mean_of(x);
    if (first) {
      re_lo = re_hi = m.real();
      im_lo = im_hi = m.imag();
      first = false;
    }
    re_lo = std::min(re_lo, m.real());
    re_hi = std::max(re_hi, m.real());
    im_lo = std::min(im_lo, m.imag());
    im_hi = std::max(im_hi, m.imag());
  }
  double max_shift = 0.0;
  for (const auto& s : action.shifts) {
    max_shift = std::max({max_shift, std::abs(s.real()), std::abs(s.imag())});
  }
  const double pad = grid.pad_sigmas * std::sqrt(mac.gaussian_variance()) + max_shift;
  re_lo -= pad;
  re_hi += pad;
  im_lo -= pad;
  im_hi += pad;

  const bool planar = mac.output_space() == OutputSpace::ComplexPlane;
  const int cells_re = grid.cells;
  const int cells_im = planar ? grid.cells : 1;
  const double dre = (re_hi - re_lo) / cells_re;
  const double dim = planar ? (im_hi - im_lo) / cells_im : 1.0;

  std::vector<int> shifted(static_cast<std::size_t>(c));
  for (const auto& x : tuples) {
    for (int shift = 0; shift < p; ++shift) {
      const std::complex<double> offset = action.shifts[static_cast<std::size_t>(shift)];
      for (int ci = 0; ci < cells_re; ++ci) {
        const double a = re_lo + ci * dre, b = a + dre;
        for (int cj = 0; cj < cells_im; ++cj) {
          const double ia = planar ? im_lo + cj * dim : -1.0;
          const double ib = planar ? ia + dim : 1.0;
          // W_x(B_{f,shift})
          const double rhs = cell_probability(mac, x, a + offset.real(), b + offset.real(),
                                              ia + offset.imag(), ib + offset.imag());
          for (int j = 0; j < c; ++j) {
            shifted.assign(x.begin(), x.end());
            shifted[static_cast<std::size_t>(j)] =
                gf::index_add(x[static_cast<std::size_t>(j)], shift, mac.field_order(),
                              mac.field_dim());
            const double lhs = cell_probability(mac, shifted, a, b, ia, ib);
            report.worst_violation = std::max(report.worst_violation, std::abs(lhs - rhs));
          }
        }
      }
    }
  }
  report.symmetric = report.worst_violation <= tol;
  return report;
}

}  // namespace modsum::channel

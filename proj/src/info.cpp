#include "modsum/info.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "modsum/gf.hpp"

namespace modsum::info {

Variable Variable::input(int sender, int senders) {
  Variable v;
  v.coeffs.assign(static_cast<std::size_t>(senders), 0u);
  v.coeffs[static_cast<std::size_t>(sender)] = 1u;
  return v;
}

Variable Variable::total_sum(int senders) {
  Variable v;
  v.coeffs.assign(static_cast<std::size_t>(senders), 1u);
  return v;
}

Variable Variable::difference(int sender_a, int sender_b, int senders, std::uint32_t q) {
  Variable v;
  v.coeffs.assign(static_cast<std::size_t>(senders), 0u);
  v.coeffs[static_cast<std::size_t>(sender_a)] = 1u;
  v.coeffs[static_cast<std::size_t>(sender_b)] = q - 1u;
  return v;
}

namespace {

int eval_variable(const Variable& var, std::span<const int> tuple, std::uint32_t q, int l) {
  int acc = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    acc = gf::index_add(acc, gf::index_scale(var.coeffs[i], tuple[i], q, l), q, l);
  }
  return acc;
}

// Tuples partitioned by conditioner labels, then by target labels.
struct TargetClass {
  std::vector<int> tuple_ids;
};

struct CondClass {
  std::vector<int> tuple_ids;
  std::map<std::vector<int>, TargetClass> targets;
};

struct ClassSystem {
  std::vector<std::vector<int>> tuples;
  std::map<std::vector<int>, CondClass> classes;
  double tuple_weight = 0.0;  // 1 / #tuples
};

ClassSystem build_classes(const channel::MacModel& mac, std::span<const Variable> targets,
                          std::span<const Variable> conditioners) {
  for (const auto& v : targets) {
    if (static_cast<int>(v.coeffs.size()) != mac.senders()) {
      throw std::invalid_argument("info: variable arity mismatch");
    }
  }
  for (const auto& v : conditioners) {
    if (static_cast<int>(v.coeffs.size()) != mac.senders()) {
      throw std::invalid_argument("info: variable arity mismatch");
    }
  }
  const bool needs_field = !targets.empty() || !conditioners.empty();
  std::uint32_t q = 2;
  int l = 1;
  if (needs_field) {
    q = mac.field_order();
    l = mac.field_dim();
  }

  ClassSystem sys;
  sys.tuples = channel::enumerate_inputs(mac);
  sys.tuple_weight = 1.0 / static_cast<double>(sys.tuples.size());
  for (int id = 0; id < static_cast<int>(sys.tuples.size()); ++id) {
    const auto& x = sys.tuples[static_cast<std::size_t>(id)];
    std::vector<int> cond_label(conditioners.size());
    for (std::size_t j = 0; j < conditioners.size(); ++j) {
      cond_label[j] = eval_variable(conditioners[j], x, q, l);
    }
    std::vector<int> target_label(targets.size());
    for (std::size_t j = 0; j < targets.size(); ++j) {
      target_label[j] = eval_variable(targets[j], x, q, l);
    }
    auto& cls = sys.classes[cond_label];
    cls.tuple_ids.push_back(id);
    cls.targets[target_label].tuple_ids.push_back(id);
  }
  return sys;
}

GaussianMixture class_mixture(const channel::MacModel& mac, const ClassSystem& sys,
                              const std::vector<int>& ids) {
  const double w = 1.0 / static_cast<double>(ids.size());
  const double v = mac.gaussian_variance();
  std::vector<MixtureComponent> comps;
  comps.reserve(ids.size());
  for (int id : ids) {
    comps.push_back({w, mac.mean_of(sys.tuples[static_cast<std::size_t>(id)]), v});
  }
  return GaussianMixture(merge_equal_means(std::move(comps)),
                         mac.output_space() == channel::OutputSpace::ComplexPlane);
}

std::vector<double> class_pmf(const channel::MacModel& mac, const ClassSystem& sys,
                              const std::vector<int>& ids) {
  std::vector<double> pmf(static_cast<std::size_t>(mac.discrete_output_count()), 0.0);
  const double w = 1.0 / static_cast<double>(ids.size());
  for (int id : ids) {
    const auto row = mac.output_pmf(sys.tuples[static_cast<std::size_t>(id)]);
    for (std::size_t y = 0; y < pmf.size(); ++y) pmf[y] += w * row[y];
  }
  return pmf;
}

void accumulate(InfoEstimate& into, const InfoEstimate& part, double weight, int sign) {
  into.value += sign * weight * part.value;
  into.error_bar += weight * part.error_bar;
  into.evaluations += part.evaluations;
  into.within_tolerance = into.within_tolerance && part.within_tolerance;
}

quad::QuadResult integrate_over_outputs(const channel::MacModel& mac,
                                        const GaussianMixture& window_mix,
                                        const std::function<double(double)>& f_line,
                                        const std::function<double(double, double)>& f_plane,
                                        const QuadratureOptions& opts) {
  if (mac.output_space() == channel::OutputSpace::RealLine) {
    double lo, hi;
    window_mix.window(opts.pad_sigmas, lo, hi);
    return quad::integrate(f_line, lo, hi, opts.abs_tol, opts.max_panels_1d);
  }
  double re_lo, re_hi, im_lo, im_hi;
  window_mix.window2d(opts.pad_sigmas, re_lo, re_hi, im_lo, im_hi);
  return quad::integrate_2d(f_plane, re_lo, re_hi, im_lo, im_hi, opts.abs_tol,
                            opts.max_panels_2d);
}

double validate_order(double s, double max_s, const char* what) {
  if (!(s > 0.0) || s > max_s) {
    throw std::invalid_argument(std::string(what) + ": order parameter out of range");
  }
  return s;
}

}  // namespace

InfoEstimate EntropyCache::entropy(const GaussianMixture& gm, const QuadratureOptions& opts) {
  // Normalize out the translation: shift so the first component mean is 0.
  const auto& comps = gm.components();
  std::vector<double> key;
  key.reserve(comps.size() * 4 + 2);
  key.push_back(gm.planar() ? 1.0 : 0.0);
  key.push_back(opts.abs_tol);
  const std::complex<double> base = comps.front().mean;
  for (const auto& c : comps) {
    key.push_back(c.weight);
    key.push_back(c.mean.real() - base.real());
    key.push_back(c.mean.imag() - base.imag());
    key.push_back(c.variance);
  }
  auto it = cache_.find(key);
  if (it != cache_.end()) {
    InfoEstimate hit = it->second;
    hit.evaluations = 0;
    return hit;
  }
  InfoEstimate est = mixture_entropy(gm, opts);
  cache_.emplace(std::move(key), est);
  return est;
}

InfoEstimate conditional_mi(const channel::MacModel& mac, std::span<const Variable> targets,
                            std::span<const Variable> conditioners,
                            const QuadratureOptions& opts, EntropyCache* cache) {
  const ClassSystem sys = build_classes(mac, targets, conditioners);
  InfoEstimate est;
  est.method = Method::Quadrature;

  const bool discrete = mac.output_space() == channel::OutputSpace::Discrete;
  EntropyCache local_cache;
  EntropyCache& ec = cache ? *cache : local_cache;

  for (const auto& [cond_label, cls] : sys.classes) {
    const double w_c = sys.tuple_weight * static_cast<double>(cls.tuple_ids.size());
    if (discrete) {
      const auto pmf = class_pmf(mac, sys, cls.tuple_ids);
      est.value += w_c * discrete_entropy(pmf);
    } else {
      accumulate(est, ec.entropy(class_mixture(mac, sys, cls.tuple_ids), opts), w_c, +1);
    }
    for (const auto& [target_label, sub] : cls.targets) {
      const double w_tc = sys.tuple_weight * static_cast<double>(sub.tuple_ids.size());
      if (discrete) {
        const auto pmf = class_pmf(mac, sys, sub.tuple_ids);
        est.value -= w_tc * discrete_entropy(pmf);
      } else {
        accumulate(est, ec.entropy(class_mixture(mac, sys, sub.tuple_ids), opts), w_tc, -1);
      }
    }
  }
  return est;
}

InfoEstimate renyi_cmi(double s, const channel::MacModel& mac,
                       std::span<const Variable> targets,
                       std::span<const Variable> conditioners,
                       const QuadratureOptions& opts) {
  validate_order(s, 0.5, "renyi_cmi");
  const ClassSystem sys = build_classes(mac, targets, conditioners);
  const bool discrete = mac.output_space() == channel::OutputSpace::Discrete;

  InfoEstimate est;
  est.method = Method::Quadrature;
  double outer = 0.0;
  double outer_err = 0.0;

  for (const auto& [cond_label, cls] : sys.classes) {
    if (discrete) {
      const auto pmf_c = class_pmf(mac, sys, cls.tuple_ids);
      for (const auto& [target_label, sub] : cls.targets) {
        const double w_tc = sys.tuple_weight * static_cast<double>(sub.tuple_ids.size());
        const auto pmf_tc = class_pmf(mac, sys, sub.tuple_ids);
        double inner = 0.0;
        for (std::size_t y = 0; y < pmf_tc.size(); ++y) {
          if (pmf_tc[y] > 0.0) {
            inner += std::pow(pmf_tc[y], 1.0 + s) / std::pow(pmf_c[y], s);
          }
        }
        outer += w_tc * inner;
      }
    } else {
      const GaussianMixture mix_c = class_mixture(mac, sys, cls.tuple_ids);
      for (const auto& [target_label, sub] : cls.targets) {
        const double w_tc = sys.tuple_weight * static_cast<double>(sub.tuple_ids.size());
        const GaussianMixture mix_tc = class_mixture(mac, sys, sub.tuple_ids);
        const auto ratio = [&](double p1, double p2) {
          return p1 > 0.0 ? std::pow(p1, 1.0 + s) / std::pow(p2, s) : 0.0;
        };
        const auto qr = integrate_over_outputs(
            mac, mix_c,
            [&](double y) { return ratio(mix_tc.pdf(y), mix_c.pdf(y)); },
            [&](double re, double im) {
              const std::complex<double> y{re, im};
              return ratio(mix_tc.pdf(y), mix_c.pdf(y));
            },
            opts);
        outer += w_tc * qr.value;
        outer_err += w_tc * qr.error_estimate;
        est.evaluations += qr.evaluations;
        est.within_tolerance = est.within_tolerance && qr.converged;
      }
    }
  }
  est.value = std::log(outer) / s;
  est.error_bar = outer > 0.0 ? outer_err / (outer * s) : 0.0;
  return est;
}

InfoEstimate renyi_cmi_down(double s, const channel::MacModel& mac,
                            std::span<const Variable> targets,
                            std::span<const Variable> conditioners,
                            const QuadratureOptions& opts) {
  validate_order(s, 1.0, "renyi_cmi_down");
  const ClassSystem sys = build_classes(mac, targets, conditioners);
  const bool discrete = mac.output_space() == channel::OutputSpace::Discrete;

  InfoEstimate est;
  est.method = Method::Quadrature;
  double outer = 0.0;
  double outer_err = 0.0;
  const double inv_power = 1.0 / (1.0 + s);

  for (const auto& [cond_label, cls] : sys.classes) {
    const double w_c = sys.tuple_weight * static_cast<double>(cls.tuple_ids.size());
    if (discrete) {
      std::vector<std::pair<double, std::vector<double>>> subs;
      for (const auto& [target_label, sub] : cls.targets) {
        const double p_t_given_c = static_cast<double>(sub.tuple_ids.size()) /
                                   static_cast<double>(cls.tuple_ids.size());
        subs.emplace_back(p_t_given_c, class_pmf(mac, sys, sub.tuple_ids));
      }
      double inner = 0.0;
      const std::size_t ny = subs.front().second.size();
      for (std::size_t y = 0; y < ny; ++y) {
        double powered = 0.0;
        for (const auto& [pt, pmf] : subs) {
          if (pmf[y] > 0.0) powered += pt * std::pow(pmf[y], 1.0 + s);
        }
        if (powered > 0.0) inner += std::pow(powered, inv_power);
      }
      outer += w_c * inner;
    } else {
      const GaussianMixture mix_c = class_mixture(mac, sys, cls.tuple_ids);
      std::vector<std::pair<double, GaussianMixture>> subs;
      for (const auto& [target_label, sub] : cls.targets) {
        const double p_t_given_c = static_cast<double>(sub.tuple_ids.size()) /
                                   static_cast<double>(cls.tuple_ids.size());
        subs.emplace_back(p_t_given_c, class_mixture(mac, sys, sub.tuple_ids));
      }
      const auto powered_sum_line = [&](double y) {
        double powered = 0.0;
        for (const auto& [pt, mix] : subs) {
          const double f = mix.pdf(y);
          if (f > 0.0) powered += pt * std::pow(f, 1.0 + s);
        }
        return powered > 0.0 ? std::pow(powered, inv_power) : 0.0;
      };
      const auto powered_sum_plane = [&](double re, double im) {
        const std::complex<double> y{re, im};
        double powered = 0.0;
        for (const auto& [pt, mix] : subs) {
          const double f = mix.pdf(y);
          if (f > 0.0) powered += pt * std::pow(f, 1.0 + s);
        }
        return powered > 0.0 ? std::pow(powered, inv_power) : 0.0;
      };
      const auto qr =
          integrate_over_outputs(mac, mix_c, powered_sum_line, powered_sum_plane, opts);
      outer += w_c * qr.value;
      outer_err += w_c * qr.error_estimate;
      est.evaluations += qr.evaluations;
      est.within_tolerance = est.within_tolerance && qr.converged;
    }
  }
  est.value = (1.0 + s) / s * std::log(outer);
  est.error_bar = outer > 0.0 ? (1.0 + s) / s * outer_err / outer : 0.0;
  return est;
}

DiscreteJoint::DiscreteJoint(std::array<int, 4> dims, std::vector<double> probs)
    : dims_(dims), p_(std::move(probs)) {
  std::size_t cells = 1;
  for (int d : dims_) {
    if (d < 1) throw std::invalid_argument("DiscreteJoint: axis dimension must be positive");
    cells *= static_cast<std::size_t>(d);
  }
  if (p_.size() != cells) throw std::invalid_argument("DiscreteJoint: tensor size mismatch");
  double total = 0.0;
  for (double v : p_) {
    if (v < 0.0) throw std::invalid_argument("DiscreteJoint: negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("DiscreteJoint: probabilities must sum to 1");
  }
}

double DiscreteJoint::at(int a, int b, int c, int d) const {
  const std::size_t idx =
      static_cast<std::size_t>(a) +
      static_cast<std::size_t>(dims_[0]) *
          (static_cast<std::size_t>(b) +
           static_cast<std::size_t>(dims_[1]) *
               (static_cast<std::size_t>(c) + static_cast<std::size_t>(dims_[2]) *
                                                  static_cast<std::size_t>(d)));
  return p_[idx];
}

double DiscreteJoint::cmi(unsigned mask_x, unsigned mask_y, unsigned mask_z) const {
  if ((mask_x & mask_y) || (mask_x & mask_z) || (mask_y & mask_z)) {
    throw std::invalid_argument("DiscreteJoint::cmi: axis groups must be disjoint");
  }
  const auto project = [&](unsigned mask, const std::array<int, 4>& cell) {
    int packed = 0;
    for (int axis = 0; axis < 4; ++axis) {
      if (mask & (1u << axis)) packed = packed * dims_[static_cast<std::size_t>(axis)] +
                                        cell[static_cast<std::size_t>(axis)];
    }
    return packed;
  };

  std::map<std::array<int, 3>, double> m_xyz;
  std::map<std::array<int, 2>, double> m_xz, m_yz;
  std::map<int, double> m_z;
  for (int a = 0; a < dims_[0]; ++a)
    for (int b = 0; b < dims_[1]; ++b)
      for (int c = 0; c < dims_[2]; ++c)
        for (int d = 0; d < dims_[3]; ++d) {
          const double v = at(a, b, c, d);
          if (v == 0.0) continue;
          const std::array<int, 4> cell{a, b, c, d};
          const int lx = project(mask_x, cell);
          const int ly = project(mask_y, cell);
          const int lz = project(mask_z, cell);
          m_xyz[{lx, ly, lz}] += v;
          m_xz[{lx, lz}] += v;
          m_yz[{ly, lz}] += v;
          m_z[lz] += v;
        }
  double mi = 0.0;
  for (const auto& [key, pxyz] : m_xyz) {
    const auto [lx, ly, lz] = key;
    mi += pxyz * std::log(pxyz * m_z[lz] / (m_xz[{lx, lz}] * m_yz[{ly, lz}]));
  }
  return mi;
}

ChainIdentityReport cmi_chain_identity(const DiscreteJoint& joint) {
  constexpr unsigned A = 1u, B = 2u, C = 4u, D = 8u;
  ChainIdentityReport r;
  r.i_ab_given_cd = joint.cmi(A, B, C | D);
  r.i_bc_given_d = joint.cmi(B, C, D);
  r.i_ab_given_d = joint.cmi(A, B, D);
  r.i_bc_given_ad = joint.cmi(B, C, A | D);
  r.residual = std::abs(r.i_ab_given_cd + r.i_bc_given_d - r.i_ab_given_d - r.i_bc_given_ad);
  return r;
}

}  // namespace modsum::info

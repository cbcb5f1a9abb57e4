#include "modsum/bound.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modsum::bound {

using channel::MacModel;
using info::InfoEstimate;
using info::QuadratureOptions;
using info::Variable;

std::vector<std::vector<int>> proper_coalitions(int senders) {
  std::vector<std::vector<int>> out;
  const unsigned full = (1u << senders) - 1u;
  for (unsigned mask = 1u; mask < full; ++mask) {
    std::vector<int> j;
    for (int i = 0; i < senders; ++i) {
      if (mask & (1u << i)) j.push_back(i);
    }
    out.push_back(std::move(j));
  }
  return out;
}

namespace {

std::vector<int> complement(const std::vector<int>& coalition, int senders) {
  std::vector<int> out;
  for (int i = 0; i < senders; ++i) {
    if (std::find(coalition.begin(), coalition.end(), i) == coalition.end()) out.push_back(i);
  }
  return out;
}

std::vector<Variable> others_in(const std::vector<int>& coalition, int sender, int senders) {
  std::vector<Variable> vars;
  for (int j : coalition) {
    if (j != sender) vars.push_back(Variable::input(j, senders));
  }
  return vars;
}

// Pairwise differences within the complement carry the same information as
// differences against a fixed anchor, so only those are enumerated.
std::vector<Variable> difference_family(const std::vector<int>& comp, int senders,
                                        std::uint32_t q) {
  std::vector<Variable> vars;
  for (std::size_t idx = 1; idx < comp.size(); ++idx) {
    vars.push_back(Variable::difference(comp[idx], comp[0], senders, q));
  }
  return vars;
}

void fold(InfoEstimate& agg, const InfoEstimate& part) {
  agg.error_bar += part.error_bar;
  agg.evaluations += part.evaluations;
  agg.within_tolerance = agg.within_tolerance && part.within_tolerance;
}

}  // namespace

BoundReport capacity_lower_bound(const MacModel& mac, const QuadratureOptions& opts) {
  const int c = mac.senders();
  const std::uint32_t q = mac.field_order();
  info::EntropyCache cache;

  InfoEstimate agg;
  const Variable sum_var = Variable::total_sum(c);
  const InfoEstimate iw = info::conditional_mi(mac, {&sum_var, 1}, {}, opts, &cache);
  fold(agg, iw);

  BoundReport report;
  report.sum_rate = iw.value;
  report.feasible = true;
  bool have_bound = false;

  for (const auto& coalition : proper_coalitions(c)) {
    const auto comp = complement(coalition, c);
    const double jc = static_cast<double>(comp.size());
    for (int sender : coalition) {
      const auto conditioners = others_in(coalition, sender, c);

      std::vector<Variable> t1{Variable::input(sender, c)};
      const InfoEstimate i1 = info::conditional_mi(mac, t1, conditioners, opts, &cache);

      std::vector<Variable> t2{Variable::input(sender, c)};
      for (int j : comp) t2.push_back(Variable::input(j, c));
      const InfoEstimate i2 = info::conditional_mi(mac, t2, conditioners, opts, &cache);

      std::vector<Variable> t3{Variable::input(sender, c)};
      const auto diffs = difference_family(comp, c, q);
      t3.insert(t3.end(), diffs.begin(), diffs.end());
      const InfoEstimate i3 = info::conditional_mi(mac, t3, conditioners, opts, &cache);

      const InfoEstimate i_diff_only =
          diffs.empty() ? InfoEstimate{}
                        : info::conditional_mi(mac, diffs, conditioners, opts, &cache);
      fold(agg, i1);
      fold(agg, i2);
      fold(agg, i3);
      fold(agg, i_diff_only);

      CoalitionTerm term;
      term.coalition = coalition;
      term.sender = sender;
      term.term1 = iw.value - i1.value;
      term.term2 = (jc + 1.0) * iw.value - i2.value;
      term.term3 = jc * iw.value - i3.value;
      term.min_term = std::min({term.term1, term.term2, term.term3});
      term.hyp1 = iw.value > i1.value;
      term.hyp2 = (jc + 1.0) * iw.value > i2.value;
      term.hyp3 = jc * iw.value > i_diff_only.value;
      report.feasible = report.feasible && term.hyp1 && term.hyp2 && term.hyp3;
      if (!have_bound || term.min_term < report.bound) {
        report.bound = term.min_term;
        have_bound = true;
      }
      report.terms.push_back(std::move(term));
    }
  }
  report.within_tolerance = agg.within_tolerance;
  report.error_budget = agg.error_bar;
  return report;
}

SingleSenderMiReport argmax_per_sender_mi(const MacModel& mac, const QuadratureOptions& opts) {
  const int c = mac.senders();
  if (c < 3) throw std::invalid_argument("argmax_per_sender_mi: needs at least 3 senders");
  info::EntropyCache cache;

  SingleSenderMiReport best;
  bool first = true;
  for (const auto& coalition : proper_coalitions(c)) {
    for (int sender : coalition) {
      const auto conditioners = others_in(coalition, sender, c);
      std::vector<Variable> target{Variable::input(sender, c)};
      const InfoEstimate est = info::conditional_mi(mac, target, conditioners, opts, &cache);
      if (first || est.value > best.value) {
        best.coalition = coalition;
        best.sender = sender;
        best.value = est.value;
        first = false;
      }
    }
  }
  // Any maximizer within quadrature noise of the best counts as attained.
  const double slack = std::max(1e-9, 10.0 * opts.abs_tol);
  for (const auto& coalition : proper_coalitions(c)) {
    if (static_cast<int>(coalition.size()) != c - 1) continue;
    for (int sender : coalition) {
      const auto conditioners = others_in(coalition, sender, c);
      std::vector<Variable> target{Variable::input(sender, c)};
      const InfoEstimate est = info::conditional_mi(mac, target, conditioners, opts, &cache);
      if (est.value >= best.value - slack) {
        best.attained_at_single_complement = true;
        return best;
      }
    }
  }
  return best;
}

double symmetric_capacity(const MacModel& additive_mac) {
  const auto* a = additive_mac.as_additive();
  if (!a) throw std::invalid_argument("symmetric_capacity: additive model required");
  return a->l * std::log(static_cast<double>(a->q)) - info::discrete_entropy(a->noise);
}

namespace {

info::GaussianMixture spaced_mixture(std::span<const double> counts, double amplitude,
                                     double variance) {
  double total = 0.0;
  for (double w : counts) total += w;
  std::vector<info::MixtureComponent> comps;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0.0) continue;
    comps.push_back({counts[i] / total, {amplitude * static_cast<double>(i), 0.0}, variance});
  }
  return info::GaussianMixture(std::move(comps));
}

double entropy_of(const info::GaussianMixture& gm, const QuadratureOptions& opts, bool& ok) {
  const InfoEstimate est = info::mixture_entropy(gm, opts);
  ok = ok && est.within_tolerance;
  return est.value;
}

}  // namespace

double closed_form_bound_p2c3(double amplitude, double variance, const QuadratureOptions& opts,
                              bool* within_tolerance) {
  bool ok = true;
  const double counts_a[4] = {1, 2, 2, 1};
  const double counts_b[2] = {1, 1};
  const double counts_c[3] = {1, 0, 2};
  const double counts_d[3] = {1, 2, 1};
  const double value = entropy_of(spaced_mixture(counts_a, amplitude, variance), opts, ok) +
                       entropy_of(spaced_mixture(counts_b, amplitude, variance), opts, ok) -
                       entropy_of(spaced_mixture(counts_c, amplitude, variance), opts, ok) -
                       entropy_of(spaced_mixture(counts_d, amplitude, variance), opts, ok);
  if (within_tolerance) *within_tolerance = ok;
  return value;
}

std::vector<CurvePoint> bound_curve_p2c3(std::span<const double> amplitudes, double variance,
                                         const QuadratureOptions& opts) {
  std::vector<CurvePoint> out;
  out.reserve(amplitudes.size());
  for (double e : amplitudes) {
    CurvePoint pt;
    pt.amplitude = e;
    pt.value = closed_form_bound_p2c3(e, variance, opts, &pt.within_tolerance);
    out.push_back(pt);
  }
  return out;
}

double real_sum_rate_formula(int p, int senders, double amplitude, double variance,
                             const QuadratureOptions& opts) {
  if (p < 2 || senders < 1) throw std::invalid_argument("real_sum_rate_formula: bad dimensions");
  const int max_sum = senders * (p - 1);
  // alpha[j][i]: tuples in {0..p-1}^c whose integer sum equals j + i*p.
  std::vector<double> sum_counts(static_cast<std::size_t>(max_sum + 1), 0.0);
  sum_counts[0] = 1.0;
  for (int sender = 0; sender < senders; ++sender) {
    std::vector<double> next(sum_counts.size(), 0.0);
    for (std::size_t s = 0; s < sum_counts.size(); ++s) {
      if (sum_counts[s] == 0.0) continue;
      for (int x = 0; x < p && s + static_cast<std::size_t>(x) < next.size(); ++x) {
        next[s + static_cast<std::size_t>(x)] += sum_counts[s];
      }
    }
    sum_counts.swap(next);
  }

  bool ok = true;
  double value = entropy_of(spaced_mixture(sum_counts, amplitude, variance), opts, ok);
  for (int j = 0; j < p; ++j) {
    std::vector<double> class_counts(sum_counts.size(), 0.0);
    double total = 0.0;
    for (std::size_t s = static_cast<std::size_t>(j); s < sum_counts.size();
         s += static_cast<std::size_t>(p)) {
      class_counts[s] = sum_counts[s];
      total += sum_counts[s];
    }
    if (total == 0.0) continue;
    value -= (1.0 / p) * entropy_of(spaced_mixture(class_counts, amplitude, variance), opts, ok);
  }
  return value;
}

double general_bound_real(int p, int senders, double amplitude, double variance,
                          const QuadratureOptions& opts) {
  bool ok = true;
  std::vector<double> pair_counts(static_cast<std::size_t>(2 * p - 1), 0.0);
  for (int j = 0; j < p; ++j)
    for (int jp = 0; jp < p; ++jp) pair_counts[static_cast<std::size_t>(j + jp)] += 1.0;
  std::vector<double> single_counts(static_cast<std::size_t>(p), 1.0);
  const double pair_term =
      entropy_of(spaced_mixture(pair_counts, amplitude, variance), opts, ok) -
      entropy_of(spaced_mixture(single_counts, amplitude, variance), opts, ok);
  return real_sum_rate_formula(p, senders, amplitude, variance, opts) - pair_term;
}

std::vector<double> triangular_pmf(int p) {
  if (p < 2) throw std::invalid_argument("triangular_pmf: p must be at least 2");
  std::vector<double> pmf(static_cast<std::size_t>(2 * p - 1));
  const double denom = static_cast<double>(p) * p;
  for (int j = -(p - 1); j <= p - 1; ++j) {
    pmf[static_cast<std::size_t>(j + p - 1)] = static_cast<double>(p - std::abs(j)) / denom;
  }
  return pmf;
}

double high_power_limit(int p) {
  if (p < 2) throw std::invalid_argument("high_power_limit: p must be at least 2");
  double value = 0.0;
  const double denom = static_cast<double>(p) * p;
  for (int j = -(p - 1); j <= p - 1; ++j) {
    const int m = p - std::abs(j);
    value += static_cast<double>(m) / denom * std::log(static_cast<double>(m));
  }
  return value;
}

RateCheckReport rate_region_check(const MacModel& mac, const RatePoint& rates,
                                  const QuadratureOptions& opts) {
  if (rates.message_rate < 0.0 || rates.scramble_rate < 0.0) {
    throw std::invalid_argument("rate_region_check: rates must be nonnegative");
  }
  const int c = mac.senders();
  const std::uint32_t q = mac.field_order();
  info::EntropyCache cache;

  RateCheckReport report;
  const Variable sum_var = Variable::total_sum(c);
  report.sum_rate = info::conditional_mi(mac, {&sum_var, 1}, {}, opts, &cache).value;
  const double rm = rates.message_rate;
  const double rl = rates.scramble_rate;
  report.c4 = rm + rl < report.sum_rate;
  report.feasible = report.c4;

  for (const auto& coalition : proper_coalitions(c)) {
    const auto comp = complement(coalition, c);
    const double jc = static_cast<double>(comp.size());
    for (int sender : coalition) {
      const auto conditioners = others_in(coalition, sender, c);
      RateConditionRow row;
      row.coalition = coalition;
      row.sender = sender;

      std::vector<Variable> t5{Variable::input(sender, c)};
      for (int j : comp) t5.push_back(Variable::input(j, c));
      row.rhs5 = info::conditional_mi(mac, t5, conditioners, opts, &cache).value;
      row.c5 = rl + (rm + rl) * jc > row.rhs5;

      std::vector<Variable> t6{Variable::input(sender, c)};
      row.rhs6 = info::conditional_mi(mac, t6, conditioners, opts, &cache).value;
      row.c6 = rl > row.rhs6;

      std::vector<Variable> t7{Variable::input(sender, c)};
      const auto diffs = difference_family(comp, c, q);
      t7.insert(t7.end(), diffs.begin(), diffs.end());
      row.rhs7 = info::conditional_mi(mac, t7, conditioners, opts, &cache).value;
      row.c7 = rl + (rm + rl) * (jc - 1.0) > row.rhs7;

      report.feasible = report.feasible && row.c5 && row.c6 && row.c7;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

LeakageExponents leakage_exponent(double s, const MacModel& mac, const RatePoint& rates,
                                  std::span<const int> coalition, int sender,
                                  const QuadratureOptions& opts) {
  if (!(s > 0.0) || s > 0.5) {
    throw std::invalid_argument("leakage_exponent: s must lie in (0, 1/2]");
  }
  const int c = mac.senders();
  const std::uint32_t q = mac.field_order();
  std::vector<int> j_set(coalition.begin(), coalition.end());
  const auto comp = complement(j_set, c);
  const double jc = static_cast<double>(comp.size());
  const auto conditioners = others_in(j_set, sender, c);
  // Order 1/(1-s) corresponds to the lower variant at parameter s/(1-s).
  const double s_down = s / (1.0 - s);
  const double rm = rates.message_rate;
  const double rl = rates.scramble_rate;

  std::vector<Variable> t1{Variable::input(sender, c)};
  for (int j : comp) t1.push_back(Variable::input(j, c));
  const double i1 = info::renyi_cmi_down(s_down, mac, t1, conditioners, opts).value;

  std::vector<Variable> t2{Variable::input(sender, c)};
  const double i2 = info::renyi_cmi_down(s_down, mac, t2, conditioners, opts).value;

  std::vector<Variable> t3{Variable::input(sender, c)};
  const auto diffs = difference_family(comp, c, q);
  t3.insert(t3.end(), diffs.begin(), diffs.end());
  const double i3 = info::renyi_cmi_down(s_down, mac, t3, conditioners, opts).value;

  LeakageExponents out;
  out.e1 = s * (i1 - rl - (rm + rl) * jc);
  out.e2 = s * (i2 - rl);
  out.e3 = s * (i3 - rl - (rm + rl) * (jc - 1.0));
  out.worst = std::max({out.e1, out.e2, out.e3});
  return out;
}

}  // namespace modsum::bound

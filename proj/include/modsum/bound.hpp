#pragma once

// Secure modulo-sum rate lower bound for a multiple access channel, the
// exact capacity of the symmetric additive model, closed-form curves for
// the binary three-sender real Gaussian example, rate-region feasibility
// checks for the code construction, and single-letter leakage exponents.

#include <span>
#include <vector>

#include "modsum/channel.hpp"
#include "modsum/info.hpp"

namespace modsum::bound {

// One (coalition J, sender i in J) entry. Senders are 0-based here.
struct CoalitionTerm {
  std::vector<int> coalition;
  int sender = 0;
  // term1 = I(W) - I(Y; X_i | X_{J\i})
  // term2 = (|Jc|+1) I(W) - I(Y; X_i, X_{Jc} | X_{J\i})
  // term3 = |Jc| I(W) - I(Y; X_i, (X_j - X_j')_{j,j' in Jc} | X_{J\i})
  double term1 = 0.0, term2 = 0.0, term3 = 0.0;
  double min_term = 0.0;
  // The three strict hypotheses the bound requires at this (J, i); the third
  // one conditions on the pairwise differences alone.
  bool hyp1 = false, hyp2 = false, hyp3 = false;
};

struct BoundReport {
  double sum_rate = 0.0;  // I(W) = I(Y; X_1 + ... + X_c)
  std::vector<CoalitionTerm> terms;
  double bound = 0.0;  // min over all terms; meaningful only when feasible
  bool feasible = false;
  bool within_tolerance = true;
  double error_budget = 0.0;
};

BoundReport capacity_lower_bound(const channel::MacModel& mac,
                                 const info::QuadratureOptions& opts = {});

// Argmax of I(Y; X_i | X_{J\i}) over proper coalitions J and i in J, and
// whether some maximizer leaves exactly one sender outside J. Requires c >= 3.
struct SingleSenderMiReport {
  std::vector<int> coalition;
  int sender = 0;
  double value = 0.0;
  bool attained_at_single_complement = false;
};

SingleSenderMiReport argmax_per_sender_mi(const channel::MacModel& mac,
                                          const info::QuadratureOptions& opts = {});

// Exact secure rate of the additive-noise model: l ln q - H(noise) nats.
double symmetric_capacity(const channel::MacModel& additive_mac);

// Closed-form four-entropy bound for the binary three-sender real Gaussian
// channel at amplitude E and noise variance v:
//   h((P0+2P_E+2P_2E+P_3E)/6) + h((P0+P_E)/2)
//   - h((P0+2P_2E)/3) - h((P0+2P_E+P_2E)/4)
struct CurvePoint {
  double amplitude = 0.0;
  double value = 0.0;
  bool within_tolerance = true;
};

double closed_form_bound_p2c3(double amplitude, double variance,
                              const info::QuadratureOptions& opts = {},
                              bool* within_tolerance = nullptr);

std::vector<CurvePoint> bound_curve_p2c3(std::span<const double> amplitudes, double variance,
                                         const info::QuadratureOptions& opts = {});

// Sum-rate I(W) for the real Gaussian model from the integer-sum composition
// counts, independent of the generic enumeration path.
double real_sum_rate_formula(int p, int senders, double amplitude, double variance,
                             const info::QuadratureOptions& opts = {});

// General-formula bound: the sum rate above minus the two-entropy term
// h(sum_{j,j'} P_{(j+j')E}/p^2) - h(sum_j P_{jE}/p).
double general_bound_real(int p, int senders, double amplitude, double variance,
                          const info::QuadratureOptions& opts = {});

// Distribution of the difference of two uniform variables on {0..p-1},
// shifted to {0..2p-2}: weight (p-|j|)/p^2.
std::vector<double> triangular_pmf(int p);

// Large-amplitude limit of the bound:
//   sum_{j=-(p-1)}^{p-1} (p-|j|)/p^2 * ln(p-|j|)  =  2 ln p - H(triangular).
double high_power_limit(int p);

// Rates in nats per channel use: message_rate = (k/n) ln q,
// scramble_rate = (k'/n) ln q.
struct RatePoint {
  double message_rate = 0.0;
  double scramble_rate = 0.0;
};

struct RateConditionRow {
  std::vector<int> coalition;
  int sender = 0;
  // c4: rM + rL < I(W)                                   (shared across rows)
  // c5: rL + (rM+rL) |Jc| > I(Y; X_i, X_{Jc} | X_{J\i})
  // c6: rL > I(Y; X_i | X_{J\i})
  // c7: rL + (rM+rL)(|Jc|-1) > I(Y; X_i, diffs | X_{J\i})
  bool c5 = false, c6 = false, c7 = false;
  double rhs5 = 0.0, rhs6 = 0.0, rhs7 = 0.0;
};

struct RateCheckReport {
  double sum_rate = 0.0;
  bool c4 = false;
  std::vector<RateConditionRow> rows;
  bool feasible = false;
};

RateCheckReport rate_region_check(const channel::MacModel& mac, const RatePoint& rates,
                                  const info::QuadratureOptions& opts = {});

// Per-symbol exponents of the three leakage summands at parameter s in
// (0, 1/2]; the lower Renyi quantities are taken at order 1/(1-s). The
// predicted per-instance leakage after n uses is bounded by
// exp(n e1) + exp(n e2) + exp(n e3).
struct LeakageExponents {
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  double worst = 0.0;
};

LeakageExponents leakage_exponent(double s, const channel::MacModel& mac,
                                  const RatePoint& rates, std::span<const int> coalition,
                                  int sender, const info::QuadratureOptions& opts = {});

// All nonempty proper subsets of {0..senders-1}.
std::vector<std::vector<int>> proper_coalitions(int senders);

}  // namespace modsum::bound

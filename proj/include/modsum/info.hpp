#pragma once

// Conditional mutual information and its two Renyi generalizations for
// multiple access channels with uniform inputs, plus a discrete joint tensor
// with the chain-rule identity used as a cross-check oracle.
//
// Conditioning variables are linear functions of the input vector over
// F_q^l, so classes of input tuples are formed by exact enumeration and the
// conditional output laws are finite mixtures (continuous outputs) or exact
// pmfs (discrete outputs).

#include <array>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "modsum/channel.hpp"
#include "modsum/mixture.hpp"

namespace modsum::info {

// A derived input variable: sum_i coeffs[i] * X_i over F_q^l.
struct Variable {
  std::vector<std::uint32_t> coeffs;

  static Variable input(int sender, int senders);
  static Variable total_sum(int senders);
  static Variable difference(int sender_a, int sender_b, int senders, std::uint32_t q);
};

// Memoizes mixture entropies across calls; keys are translation-normalized
// component lists, so shifted copies of the same conditional law hit the
// same entry.
class EntropyCache {
 public:
  InfoEstimate entropy(const GaussianMixture& gm, const QuadratureOptions& opts);
  std::size_t size() const { return cache_.size(); }

 private:
  std::map<std::vector<double>, InfoEstimate> cache_;
};

// I(Y; targets | conditioners) in nats, inputs uniform.
InfoEstimate conditional_mi(const channel::MacModel& mac, std::span<const Variable> targets,
                            std::span<const Variable> conditioners,
                            const QuadratureOptions& opts = {},
                            EntropyCache* cache = nullptr);

// Renyi conditional mutual information of order 1+s, s in (0, 1/2]:
//   s * I_{1+s} = log sum_{z1,z2} P(z1,z2) int p(y|z1,z2)^{1+s} / p(y|z2)^s dy
InfoEstimate renyi_cmi(double s, const channel::MacModel& mac,
                       std::span<const Variable> targets,
                       std::span<const Variable> conditioners,
                       const QuadratureOptions& opts = {});

// Lower Renyi variant of order 1+s, s in (0, 1]:
//   s/(1+s) * I'_{1+s} = log sum_{z2} P(z2) int
//     ( sum_{z1} P(z1|z2) p(y|z1,z2)^{1+s} )^{1/(1+s)} dy
InfoEstimate renyi_cmi_down(double s, const channel::MacModel& mac,
                            std::span<const Variable> targets,
                            std::span<const Variable> conditioners,
                            const QuadratureOptions& opts = {});

// Probability tensor over up to four finite axes.
class DiscreteJoint {
 public:
  DiscreteJoint(std::array<int, 4> dims, std::vector<double> probs);

  const std::array<int, 4>& dims() const { return dims_; }
  double at(int a, int b, int c, int d) const;

  // I(X; Y | Z) where the masks pick axes (bit 0 = A .. bit 3 = D).
  double cmi(unsigned mask_x, unsigned mask_y, unsigned mask_z) const;

 private:
  std::array<int, 4> dims_;
  std::vector<double> p_;
};

struct ChainIdentityReport {
  double i_ab_given_cd = 0.0;
  double i_bc_given_d = 0.0;
  double i_ab_given_d = 0.0;
  double i_bc_given_ad = 0.0;
  // |I(A;B|CD) + I(B;C|D) - I(A;B|D) - I(B;C|AD)|
  double residual = 0.0;

  bool markov_bc_given_d(double tol = 1e-9) const { return i_bc_given_d <= tol; }
  // Valid consequence only when markov_bc_given_d holds.
  bool data_processing_holds(double slack = 1e-12) const {
    return i_ab_given_d <= i_ab_given_cd + slack;
  }
};

ChainIdentityReport cmi_chain_identity(const DiscreteJoint& joint);

}  // namespace modsum::info

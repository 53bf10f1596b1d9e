#ifndef COLLAB_CLOSED_FORM_HPP_
#define COLLAB_CLOSED_FORM_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "collab/indices.hpp"
#include "collab/intensity.hpp"
#include "collab/law.hpp"

namespace collab {

// Law of one author's joint-paper count m_{n,i} after n papers.
struct AuthorCountDistribution {
  std::size_t n = 0;
  std::vector<double> pmf;  // pmf[k], k = 0..n

  double moment(unsigned r) const;
};

// Recursion p_{n,k} = F_n(k-1) p_{n-1,k-1} + (1 - F_n(k)) p_{n-1,k},
// starting from p_{0,0} = 1.
AuthorCountDistribution per_author_pmf(const CoauthorshipLaw& law,
                                       std::size_t n);

// Law of the coauthor-set size #C_n for a pool of L authors, optionally
// with the joint law of (#C_n, #C_{n+1}).
struct CoauthorSizeLaw {
  std::size_t n = 0;
  std::uint32_t num_authors = 0;
  double q = 0;                  // per-author inclusion probability at n
  std::vector<double> marginal;  // pmf of #C_n, size L+1
  std::vector<double> joint;     // row-major (L+1)^2, empty unless requested

  bool has_joint() const { return !joint.empty(); }
  double joint_at(std::uint32_t j, std::uint32_t j2) const {
    return joint[static_cast<std::size_t>(j) * (num_authors + 1) + j2];
  }
};

// with_joint costs O(L^3); sizes beyond joint_budget are rejected.
CoauthorSizeLaw coauthor_size_law(const CoauthorshipLaw& law, std::uint32_t L,
                                  std::size_t n, bool with_joint = false,
                                  std::uint32_t joint_budget = 2048);

// Size law of the paper running at time t, mixing per-event laws over the
// Poisson count of prior papers:
//   H_t(k)     = sum_n P(U = n-1) P(#C_n = k),        U ~ Poisson(Lambda(t))
//   G_t(k, k') = sum_n P(U = n-1) P(#C_n = k, #C_{n+1} = k').
// Series truncated at the smallest n* with P(U >= n*) < eps; tail_dropped
// reports the actual mass dropped.
struct TheoryLimits {
  double t = 0;
  double lambda_t = 0;
  std::uint32_t num_authors = 0;
  std::vector<double> H;  // k = 0..L
  std::vector<double> G;  // row-major (L+1)^2, empty if not requested
  double tail_dropped = 0;
  std::size_t terms = 0;

  double h_at(std::uint32_t k) const { return H[k]; }
  double g_at(std::uint32_t k, std::uint32_t k2) const {
    return G[static_cast<std::size_t>(k) * (num_authors + 1) + k2];
  }

  // Small-window limits for the count X_{k+1}[t, t+h] of papers with k
  // coauthors: E/h and Var/h tend to lambda(t) H_t(k); covariances shrink
  // like h^2 with the returned coefficient; correlations tend to a
  // constant multiple of lambda(t).
  double mean_rate(std::uint32_t k) const;
  double var_rate(std::uint32_t k) const;
  double cov_coefficient(std::uint32_t k, std::uint32_t k2) const;
  double corr_coefficient(std::uint32_t k, std::uint32_t k2) const;
};

TheoryLimits ht_gt(const CoauthorshipLaw& law, std::uint32_t L,
                   const IntensityFunction& intensity, double t,
                   double eps = 1e-12, bool with_joint = true,
                   std::uint32_t joint_budget = 2048);

// E #C_n for Linear laws, n = 1..n_max (index 0 unused).
// Recursion: E #C_n = a_n sum_{l<n} E #C_l + L b_n.
std::vector<double> expected_coauthors_recursion(const CoauthorshipLaw& law,
                                                 std::uint32_t L,
                                                 std::size_t n_max);
// Closed form: E #C_1 = L b_1, E #C_2 = L (b_2 + a_2 b_1), and for n >= 3
// E #C_n = L (b_n + a_n b_{n-1}
//               + sum_{j=1}^{n-2} b_j a_n prod_{l=j+1}^{n-1} (1 + a_l)).
std::vector<double> expected_coauthors_closed_form(const CoauthorshipLaw& law,
                                                   std::uint32_t L,
                                                   std::size_t n_max);

// E[ 1_{[s,t]}(E_n) / N[s,t] ]: the weight of paper n in a window index.
// Equals sum_{k=0}^{n-1} P(U = k) E[1(V >= n-k) / V] with U ~
// Poisson(Lambda(s)), V ~ Poisson(Lambda(t) - Lambda(s)); the V-series is
// truncated at tail mass < eps.  Weights over all n sum to
// 1 - exp(-(Lambda(t) - Lambda(s))).
double poisson_window_weight(const IntensityFunction& intensity, double s,
                             double t, std::size_t n, double eps = 1e-12);
// Weights for n = 1..n_max sharing one tail table (index 0 unused).
std::vector<double> poisson_window_weights(const IntensityFunction& intensity,
                                           double s, double t,
                                           std::size_t n_max,
                                           double eps = 1e-12);

// Expected index over the window [s, t].  `value` conditions on the window
// holding at least one paper, matching the empty-window skip convention
// used when averaging simulated indices; `series` is the unconditional sum
// sum_n w_n E phi(#C_n + 1), which treats empty windows as zero, so
// value = series / (1 - exp(-mass)).  truncation_bound bounds the series
// mass dropped by cutting the sum over n.
struct ExpectedIndex {
  double value = 0;
  double series = 0;
  double window_mass = 0;
  double truncation_bound = 0;
  std::size_t terms = 0;
};

ExpectedIndex expected_index(const IntensityFunction& intensity,
                             const CoauthorshipLaw& law, std::uint32_t L,
                             const PhiFunction& phi, double s, double t,
                             double eps = 1e-12);

// Limit of E I_phi[t, t+h] / h as h -> 0:
// lambda(t) sum_k phi(k+1) H_t(k).  Requires limits computed with the same
// law; truncation error is bounded by phi(L+1) * tail_dropped.
double index_rate_limit(const TheoryLimits& limits, const PhiFunction& phi);

// Remainder bounds for the small-window moment approximations, valid for
// window mass m = Lambda(t+h) - Lambda(t) < 1:
//   E X_{k+1}            = e^-m ( m H_t(k) )                    + R1
//   E X_{k+1}^2          = e^-m ( m H_t(k) + m^2 G_t(k,k) )     + R2
//   E X_{k+1} X_{k'+1}   = e^-m ( m^2/2 (G_t(k,k') + G_t(k',k)) ) + R3
//   E X_{k+1} 1(N = 1)   = e^-m ( m H_t(k) )                    + R4
struct WindowMomentBounds {
  double r1 = 0;
  double r2 = 0;
  double r3 = 0;
  double r4 = 0;
};

WindowMomentBounds appendix_bounds(double mass);

}  // namespace collab

#endif  // COLLAB_CLOSED_FORM_HPP_

#ifndef COLLAB_ESTIMATORS_HPP_
#define COLLAB_ESTIMATORS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "collab/law.hpp"
#include "collab/simulation.hpp"

namespace collab {

// What an estimator sees at paper n: each author's prior joint-paper count
// and whether the author joined paper n.
struct EventSnapshot {
  std::size_t n = 0;
  std::uint32_t num_authors = 0;
  std::vector<std::uint32_t> prev_counts;  // m_{n-1,i}
  std::vector<std::uint8_t> included;      // 1 if i joined paper n
};

EventSnapshot snapshot_at(const SimulationRun& run, std::size_t n);

// Point estimate with its asymptotic scale: sqrt(L) (est - truth) is
// approximately N(0, sigma^2), so the level-q interval is
// value +- z_{q/2} sigma / sqrt(L).  Degenerate samples leave sigma
// unavailable and the interval unset.
struct EstimateWithCI {
  double value = 0;
  double sigma = 0;
  double lo = 0;
  double hi = 0;
  std::uint64_t support = 0;  // observations the estimate is based on
  bool se_available = false;
};

// Occupation-ratio estimate of F_n(k): the fraction of authors with prior
// count k that joined paper n.  An empty count class yields value 0 with
// no standard error.  sigma^2 = Fhat (1 - Fhat) / (support / L).
EstimateWithCI estimate_F_nonparam(const EventSnapshot& snap, std::uint32_t k,
                                   double level = 0.05);

// Least-squares fit of the linear shape F_n(k) = a_n k + b_n from one
// event.  Zero variance in the counts degenerates to slope 0 with the mean
// inclusion as intercept.  Standard errors come from the delta method.
struct LinearFit {
  EstimateWithCI slope;
  EstimateWithCI intercept;
};

LinearFit estimate_linear(const EventSnapshot& snap, double level = 0.05);

// F_n(k) estimates for every event of a run at a fixed k.
std::vector<EstimateWithCI> estimate_F_series(const SimulationRun& run,
                                              std::uint32_t k,
                                              double level = 0.05);

// Asymptotic variance of a ratio mean_x / mean_y of i.i.d. pairs:
// (mu_y^2 sx2 + mu_x^2 sy2 - 2 rho mu_x mu_y sx sy) / mu_y^4.
double ratio_variance(double mu_x, double mu_y, double sx2, double sy2,
                      double rho);

// Delta-method machinery for the least-squares coefficients, expressed
// through the moment vector Z = (X, Y, Y^2, XY) with X the inclusion
// indicator and Y the prior count.  Holds Z-bar, the 4x4 covariance, the
// fitted (slope, intercept), and evaluates gradient^T Sigma gradient.
struct DeltaMethodContext {
  std::array<double, 4> zbar{};
  std::array<std::array<double, 4>, 4> sigma{};
  double slope = 0;
  double intercept = 0;
  double var_y = 0;
  bool degenerate = false;

  static DeltaMethodContext from_snapshot(const EventSnapshot& snap);
  // Model-implied moments: mixed Bernoulli(F_n(m)) over m ~ p_{n-1}.
  static DeltaMethodContext from_law(const CoauthorshipLaw& law,
                                     std::size_t n);

  std::array<double, 4> slope_gradient() const;
  std::array<double, 4> intercept_gradient() const;
  double slope_variance() const;
  double intercept_variance() const;
};

// z-value with upper tail q/2 (two-sided level-q intervals).
double normal_two_sided_z(double level);

}  // namespace collab

#endif  // COLLAB_ESTIMATORS_HPP_

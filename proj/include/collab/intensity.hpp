#ifndef COLLAB_INTENSITY_HPP_
#define COLLAB_INTENSITY_HPP_

#include <cstddef>
#include <limits>
#include <vector>

#include "collab/rng.hpp"

namespace collab {

// One piece of a piecewise publication intensity.  Covers [start, end);
// end may be +inf for the final piece.  A linear piece evaluates to
// min(slope * t + intercept, cap); constant pieces ignore slope/cap.
struct IntensitySegment {
  double start = 0;
  double end = 0;
  bool linear = false;
  double rate = 0;
  double slope = 0;
  double intercept = 0;
  double cap = std::numeric_limits<double>::infinity();
};

// Deterministic publication rate lambda(t) over [0, domain_end()).
// Segments must start at 0, be contiguous, and stay nonnegative.
class IntensityFunction {
 public:
  static IntensityFunction constant(
      double rate, double end = std::numeric_limits<double>::infinity());
  static IntensityFunction piecewise(std::vector<IntensitySegment> segments);

  double operator()(double t) const;

  // Integral of lambda over [s, t]; exact per segment.
  double integrate(double s, double t) const;

  // Supremum of lambda over [s, t].
  double sup(double s, double t) const;

  double domain_end() const { return segments_.back().end; }
  const std::vector<IntensitySegment>& segments() const { return segments_; }

 private:
  explicit IntensityFunction(std::vector<IntensitySegment> segments);

  std::vector<IntensitySegment> segments_;
};

// Ordered event times of one realization on [0, horizon].
struct EventTimeline {
  std::vector<double> times;
  double horizon = 0;
  std::size_t size() const { return times.size(); }
};

// Samples an inhomogeneous Poisson process: inversion on constant pieces,
// thinning against the piece supremum on linear pieces.
EventTimeline sample_event_times(const IntensityFunction& intensity,
                                 double horizon, Rng& rng);

enum class Kernel { Box, Triangular, Epanechnikov };

// Kernel estimate of lambda(t) from observed event times:
// (1/h) * sum K((E_i - t) / h).  No boundary correction; estimates near
// 0 or the horizon are biased low by design.
double estimate_intensity_kernel(const EventTimeline& timeline, double t,
                                 double h, Kernel kernel);

}  // namespace collab

#endif  // COLLAB_INTENSITY_HPP_

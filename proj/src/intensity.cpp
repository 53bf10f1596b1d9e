#include "collab/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace collab {

namespace {

double segment_value(const IntensitySegment& seg, double t) {
  if (!seg.linear) return seg.rate;
  return std::min(seg.slope * t + seg.intercept, seg.cap);
}

// Max of the segment's intensity over [a, b].  For slope > 0 on an
// infinite segment the cap is finite (enforced at construction).
double segment_sup(const IntensitySegment& seg, double a, double b) {
  if (!seg.linear) return seg.rate;
  if (seg.slope > 0) {
    if (std::isinf(b)) return seg.cap;
    return segment_value(seg, b);
  }
  return segment_value(seg, a);
}

// Integral of min(slope*t + intercept, cap) over [a, b].
double segment_integral(const IntensitySegment& seg, double a, double b) {
  if (b <= a) return 0;
  if (!seg.linear) return seg.rate * (b - a);
  auto line_integral = [&](double x, double y) {
    return 0.5 * seg.slope * (y * y - x * x) + seg.intercept * (y - x);
  };
  if (seg.slope == 0) return std::min(seg.intercept, seg.cap) * (b - a);
  if (std::isinf(seg.cap)) return line_integral(a, b);
  double crossing = (seg.cap - seg.intercept) / seg.slope;
  if (seg.slope > 0) {
    if (crossing <= a) return seg.cap * (b - a);
    if (crossing >= b) return line_integral(a, b);
    return line_integral(a, crossing) + seg.cap * (b - crossing);
  }
  if (crossing <= a) return line_integral(a, b);
  if (crossing >= b) return seg.cap * (b - a);
  return seg.cap * (crossing - a) + line_integral(crossing, b);
}

}  // namespace

IntensityFunction::IntensityFunction(std::vector<IntensitySegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty())
    throw std::invalid_argument("intensity: no segments");
  if (segments_.front().start != 0)
    throw std::invalid_argument("intensity: first segment must start at 0");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& seg = segments_[i];
    if (!(seg.end > seg.start))
      throw std::invalid_argument("intensity: empty segment");
    if (i + 1 < segments_.size()) {
      if (std::isinf(seg.end) || segments_[i + 1].start != seg.end)
        throw std::invalid_argument("intensity: segments not contiguous");
    }
    if (seg.linear) {
      if (seg.cap < 0) throw std::invalid_argument("intensity: negative cap");
      if (std::isinf(seg.end)) {
        if (seg.slope > 0 && std::isinf(seg.cap))
          throw std::invalid_argument(
              "intensity: unbounded growth on an infinite segment");
        if (seg.slope < 0)
          throw std::invalid_argument(
              "intensity: rate goes negative on an infinite segment");
      }
      // The piece is monotone, so endpoint values bound it.
      double lo = std::isinf(seg.end)
                      ? segment_value(seg, seg.start)
                      : std::min(segment_value(seg, seg.start),
                                 segment_value(seg, seg.end));
      if (lo < 0) throw std::invalid_argument("intensity: negative rate");
    } else {
      if (seg.rate < 0) throw std::invalid_argument("intensity: negative rate");
    }
  }
}

IntensityFunction IntensityFunction::constant(double rate, double end) {
  IntensitySegment seg;
  seg.start = 0;
  seg.end = end;
  seg.rate = rate;
  return IntensityFunction({seg});
}

IntensityFunction IntensityFunction::piecewise(
    std::vector<IntensitySegment> segments) {
  return IntensityFunction(std::move(segments));
}

double IntensityFunction::operator()(double t) const {
  if (t < 0 || t >= domain_end())
    throw std::domain_error("intensity: time outside domain");
  for (const auto& seg : segments_)
    if (t >= seg.start && t < seg.end) return segment_value(seg, t);
  return segment_value(segments_.back(), t);
}

double IntensityFunction::integrate(double s, double t) const {
  if (!(s >= 0) || !(t >= s) || t > domain_end())
    throw std::domain_error("intensity: bad integration window");
  double total = 0;
  for (const auto& seg : segments_) {
    double a = std::max(s, seg.start);
    double b = std::min(t, seg.end);
    if (b > a) total += segment_integral(seg, a, b);
  }
  return total;
}

double IntensityFunction::sup(double s, double t) const {
  if (!(s >= 0) || !(t >= s) || t > domain_end())
    throw std::domain_error("intensity: bad window");
  double m = 0;
  bool touched = false;
  for (const auto& seg : segments_) {
    double a = std::max(s, seg.start);
    double b = std::min(t, seg.end);
    if (b > a) {
      m = std::max(m, segment_sup(seg, a, b));
      touched = true;
    }
  }
  if (!touched) {
    // Degenerate window [s, s].
    for (const auto& seg : segments_)
      if (s >= seg.start && s < seg.end) return segment_value(seg, s);
    return segment_value(segments_.back(), s);
  }
  return m;
}

EventTimeline sample_event_times(const IntensityFunction& intensity,
                                 double horizon, Rng& rng) {
  if (!(horizon >= 0) || !std::isfinite(horizon))
    throw std::domain_error("sample_event_times: bad horizon");
  if (horizon > intensity.domain_end())
    throw std::domain_error("sample_event_times: horizon outside domain");
  EventTimeline out;
  out.horizon = horizon;
  for (const auto& seg : intensity.segments()) {
    double a = seg.start;
    double b = std::min(seg.end, horizon);
    if (b <= a) continue;
    if (!seg.linear) {
      if (seg.rate <= 0) continue;
      double t = a;
      while (true) {
        t += rng.exponential(seg.rate);
        if (t >= b) break;
        out.times.push_back(t);
      }
    } else {
      double bound = segment_sup(seg, a, b);
      if (bound <= 0) continue;
      double t = a;
      while (true) {
        t += rng.exponential(bound);
        if (t >= b) break;
        if (rng.uniform() * bound < segment_value(seg, t))
          out.times.push_back(t);
      }
    }
  }
  return out;
}

double estimate_intensity_kernel(const EventTimeline& timeline, double t,
                                 double h, Kernel kernel) {
  if (!(h > 0)) throw std::invalid_argument("kernel estimate: h must be > 0");
  double sum = 0;
  for (double e : timeline.times) {
    double u = (e - t) / h;
    if (u < -1 || u > 1) continue;
    switch (kernel) {
      case Kernel::Box:
        sum += 0.5;
        break;
      case Kernel::Triangular:
        sum += 1.0 - std::abs(u);
        break;
      case Kernel::Epanechnikov:
        sum += 0.75 * (1.0 - u * u);
        break;
    }
  }
  return sum / h;
}

}  // namespace collab

#include "collab/indices.hpp"

#include <cmath>
#include <stdexcept>

namespace collab {

namespace {

WindowCounts counts_in(const SimulationRun& run, double s, double t,
                       bool half_open) {
  if (!run.has_times())
    throw std::logic_error("window_counts: run has no event times");
  if (!(t >= s)) throw std::domain_error("window_counts: bad window");
  WindowCounts out;
  out.start = s;
  out.end = t;
  for (std::size_t n = 0; n < run.num_events(); ++n) {
    double e = run.event_times[n];
    if (e < s) continue;
    if (half_open ? e >= t : e > t) continue;
    auto size = static_cast<std::uint32_t>(run.coauthor_sets[n].size()) + 1;
    ++out.by_size[size];
    ++out.total;
  }
  return out;
}

}  // namespace

WindowCounts window_counts(const SimulationRun& run, double s, double t) {
  return counts_in(run, s, t, /*half_open=*/false);
}

PhiFunction PhiFunction::custom(std::vector<double> values) {
  if (values.empty() || values[0] != 0)
    throw std::invalid_argument("phi: table must start with phi(1) = 0");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[i - 1])
      throw std::invalid_argument("phi: table must be non-decreasing");
  PhiFunction phi(Kind::Custom);
  phi.values_ = std::move(values);
  return phi;
}

double PhiFunction::operator()(std::uint32_t size) const {
  if (size == 0) throw std::domain_error("phi: sizes start at 1");
  switch (kind_) {
    case Kind::CI:
      return static_cast<double>(size) - 1.0;
    case Kind::DC:
      return size >= 2 ? 1.0 : 0.0;
    case Kind::CC:
      return 1.0 - 1.0 / static_cast<double>(size);
    case Kind::Custom:
      if (size > values_.size())
        throw std::out_of_range("phi: size beyond custom table");
      return values_[size - 1];
  }
  return 0;
}

std::optional<double> index_value(const WindowCounts& counts,
                                  const PhiFunction& phi) {
  if (counts.total == 0) return std::nullopt;
  double sum = 0;
  for (const auto& [size, n] : counts.by_size)
    sum += phi(size) * static_cast<double>(n);
  return sum / static_cast<double>(counts.total);
}

std::vector<YearlyIndexPoint> yearly_index_series(const SimulationRun& run,
                                                  const PhiFunction& phi,
                                                  double year_length,
                                                  std::size_t num_years) {
  if (!(year_length > 0))
    throw std::invalid_argument("yearly series: year_length must be > 0");
  if (!run.has_times())
    throw std::logic_error("yearly series: run has no event times");
  double horizon = 0;
  for (double e : run.event_times) horizon = std::max(horizon, e);
  auto years = num_years > 0
                   ? num_years
                   : static_cast<std::size_t>(std::floor(horizon / year_length)) + 1;
  std::vector<YearlyIndexPoint> series(years);
  std::vector<WindowCounts> buckets(years);
  for (std::size_t n = 0; n < run.num_events(); ++n) {
    auto j = static_cast<std::size_t>(
        std::floor(run.event_times[n] / year_length));
    if (j >= years)
      throw std::out_of_range("yearly series: event beyond the window grid");
    auto size = static_cast<std::uint32_t>(run.coauthor_sets[n].size()) + 1;
    ++buckets[j].by_size[size];
    ++buckets[j].total;
  }
  for (std::size_t j = 0; j < years; ++j) {
    series[j].year = j;
    series[j].papers = buckets[j].total;
    series[j].value = index_value(buckets[j], phi);
  }
  return series;
}

}  // namespace collab

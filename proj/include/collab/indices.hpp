#ifndef COLLAB_INDICES_HPP_
#define COLLAB_INDICES_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "collab/simulation.hpp"

namespace collab {

// Papers inside one time window, bucketed by author count (coauthors + the
// ego, so a solo paper has size 1).
struct WindowCounts {
  double start = 0;
  double end = 0;
  std::map<std::uint32_t, std::uint64_t> by_size;
  std::uint64_t total = 0;
};

// Counts over the closed window [s, t].
WindowCounts window_counts(const SimulationRun& run, double s, double t);

// Weight function on paper sizes used by the collaboration indices.
// Requirements: phi(1) = 0 and phi non-decreasing.
//   CI  phi(k) = k - 1      mean number of coauthors
//   DC  phi(k) = 1(k >= 2)  share of collaborative papers
//   CC  phi(k) = 1 - 1/k    collaborative share of author credit
class PhiFunction {
 public:
  enum class Kind { CI, DC, CC, Custom };

  static PhiFunction ci() { return PhiFunction(Kind::CI); }
  static PhiFunction dc() { return PhiFunction(Kind::DC); }
  static PhiFunction cc() { return PhiFunction(Kind::CC); }
  // values[i] = phi(i + 1); the table must cover every size queried.
  static PhiFunction custom(std::vector<double> values);

  double operator()(std::uint32_t size) const;
  Kind kind() const { return kind_; }

 private:
  explicit PhiFunction(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::vector<double> values_;
};

// Index value sum phi(size) * X_size / N over the window; a window with no
// papers has no index value, reported as nullopt rather than zero.
std::optional<double> index_value(const WindowCounts& counts,
                                  const PhiFunction& phi);

struct YearlyIndexPoint {
  std::size_t year = 0;  // 0-based window number
  std::uint64_t papers = 0;
  std::optional<double> value;
};

// Index per year window [j*year_length, (j+1)*year_length), with the last
// partial window included.  The run must carry event times.  num_years = 0
// derives the window count from the last event; passing it explicitly keeps
// series lengths equal across replicates.
std::vector<YearlyIndexPoint> yearly_index_series(const SimulationRun& run,
                                                  const PhiFunction& phi,
                                                  double year_length,
                                                  std::size_t num_years = 0);

}  // namespace collab

#endif  // COLLAB_INDICES_HPP_

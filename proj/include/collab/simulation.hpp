#ifndef COLLAB_SIMULATION_HPP_
#define COLLAB_SIMULATION_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "collab/intensity.hpp"
#include "collab/law.hpp"
#include "collab/rng.hpp"

namespace collab {

// One realization of the coauthor process: per paper, the set of authors
// from the pool [0, num_authors) who joined.  Event times are attached
// separately; until then event_times is empty.
struct SimulationRun {
  std::uint32_t num_authors = 0;
  std::vector<std::vector<std::uint32_t>> coauthor_sets;  // ascending ids
  std::vector<double> event_times;

  std::size_t num_events() const { return coauthor_sets.size(); }
  bool has_times() const { return !event_times.empty() || coauthor_sets.empty(); }
};

// Draws coauthor sets for papers 1..num_events.  Author i joins paper n
// with probability F_n(m) where m is i's count of prior joint papers;
// draws are independent across authors given the history.
SimulationRun simulate_coauthor_sets(const CoauthorshipLaw& law,
                                     std::uint32_t num_authors,
                                     std::size_t num_events, Rng& rng);

// Pairs a run with sampled event times.  When the sides disagree in length
// the surplus is dropped, so the result has min(#sets, #times) events.
void attach_event_times(SimulationRun& run, const EventTimeline& timeline);

// Joint-paper counts m_{n,i} after the first n events.
std::vector<std::uint32_t> counts_after(const SimulationRun& run,
                                        std::size_t n);

}  // namespace collab

#endif  // COLLAB_SIMULATION_HPP_

#include "collab/simulation.hpp"

#include <stdexcept>

namespace collab {

SimulationRun simulate_coauthor_sets(const CoauthorshipLaw& law,
                                     std::uint32_t num_authors,
                                     std::size_t num_events, Rng& rng) {
  SimulationRun run;
  run.num_authors = num_authors;
  run.coauthor_sets.reserve(num_events);
  std::vector<std::uint32_t> counts(num_authors, 0);
  std::vector<double> prob;  // F_n by count value, avoids L evaluations
  for (std::size_t n = 1; n <= num_events; ++n) {
    prob.resize(n);
    for (std::size_t k = 0; k < n; ++k) prob[k] = law.evaluate(n, k);
    std::vector<std::uint32_t> included;
    for (std::uint32_t i = 0; i < num_authors; ++i) {
      if (rng.bernoulli(prob[counts[i]])) included.push_back(i);
    }
    for (std::uint32_t i : included) ++counts[i];
    run.coauthor_sets.push_back(std::move(included));
  }
  return run;
}

void attach_event_times(SimulationRun& run, const EventTimeline& timeline) {
  std::size_t n = std::min(run.coauthor_sets.size(), timeline.times.size());
  run.coauthor_sets.resize(n);
  run.event_times.assign(timeline.times.begin(), timeline.times.begin() + n);
}

std::vector<std::uint32_t> counts_after(const SimulationRun& run,
                                        std::size_t n) {
  if (n > run.num_events())
    throw std::out_of_range("counts_after: event index beyond run");
  std::vector<std::uint32_t> counts(run.num_authors, 0);
  for (std::size_t e = 0; e < n; ++e)
    for (std::uint32_t i : run.coauthor_sets[e]) ++counts[i];
  return counts;
}

}  // namespace collab

#ifndef COLLAB_POISSON_HPP_
#define COLLAB_POISSON_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace collab {

inline double poisson_pmf(std::size_t k, double mu) {
  if (mu < 0) throw std::domain_error("poisson_pmf: negative mean");
  if (mu == 0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-mu + static_cast<double>(k) * std::log(mu) -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

// Probabilities P(X = 0..n_max) for X ~ Poisson(mu), plus the smallest n*
// with P(X >= n*) < eps and the actual tail mass beyond the table.
struct PoissonTable {
  std::vector<double> pmf;
  std::size_t cutoff = 0;   // smallest n with P(X >= n) < eps
  double tail = 0;          // P(X >= cutoff)
};

inline PoissonTable poisson_table(double mu, double eps) {
  if (mu < 0) throw std::domain_error("poisson_table: negative mean");
  if (mu > 700) throw std::domain_error("poisson_table: mean too large");
  if (eps <= 0) throw std::domain_error("poisson_table: eps must be positive");
  PoissonTable tab;
  double cum = 0;
  std::size_t k = 0;
  // Terms from lgamma individually, so accumulated rounding stays tiny.
  while (true) {
    double p = poisson_pmf(k, mu);
    cum += p;
    tab.pmf.push_back(p);
    if (1.0 - cum < eps) break;
    if (k > 200000) throw std::runtime_error("poisson_table: series too long");
    ++k;
  }
  tab.cutoff = tab.pmf.size();
  tab.tail = std::max(0.0, 1.0 - cum);
  return tab;
}

}  // namespace collab

#endif  // COLLAB_POISSON_HPP_

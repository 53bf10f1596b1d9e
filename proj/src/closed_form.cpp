#include "collab/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "collab/poisson.hpp"

namespace collab {

namespace {

// p_{n-1} -> p_n in place (resizes by one).
void step_pmf(const CoauthorshipLaw& law, std::size_t n,
              std::vector<double>& p) {
  std::vector<double> next(p.size() + 1, 0.0);
  for (std::size_t k = 0; k < next.size(); ++k) {
    double gain = k > 0 ? law.evaluate(n, k - 1) * p[k - 1] : 0.0;
    double keep = k < p.size() ? (1.0 - law.evaluate(n, k)) * p[k] : 0.0;
    next[k] = gain + keep;
  }
  p = std::move(next);
}

double inclusion_prob(const CoauthorshipLaw& law, std::size_t n,
                      const std::vector<double>& prev) {
  double q = 0;
  for (std::size_t m = 0; m < prev.size(); ++m)
    q += prev[m] * law.evaluate(n, m);
  return q;
}

std::vector<double> binomial_pmf(std::uint32_t L, double q) {
  std::vector<double> pmf(L + 1, 0.0);
  if (q <= 0) {
    pmf[0] = 1;
    return pmf;
  }
  if (q >= 1) {
    pmf[L] = 1;
    return pmf;
  }
  double lq = std::log(q), l1q = std::log1p(-q);
  double lgl = std::lgamma(static_cast<double>(L) + 1);
  for (std::uint32_t k = 0; k <= L; ++k) {
    double lc = lgl - std::lgamma(static_cast<double>(k) + 1) -
                std::lgamma(static_cast<double>(L - k) + 1);
    pmf[k] = std::exp(lc + k * lq + (L - k) * l1q);
  }
  return pmf;
}

struct PairOutcome {
  double p11 = 0, p10 = 0, p01 = 0;  // (in at n, in at n+1) indicator pair
};

// Per-author law of (1_{C_n}, 1_{C_{n+1}}), mixing over the author's prior
// count m ~ prev.  Joining paper n moves the count from m to m+1 before
// paper n+1 is drawn.
PairOutcome pair_outcome(const CoauthorshipLaw& law, std::size_t n,
                         const std::vector<double>& prev) {
  PairOutcome out;
  for (std::size_t m = 0; m < prev.size(); ++m) {
    double fn = law.evaluate(n, m);
    double fn1_in = law.evaluate(n + 1, m + 1);
    double fn1_out = law.evaluate(n + 1, m);
    out.p11 += prev[m] * fn * fn1_in;
    out.p10 += prev[m] * fn * (1 - fn1_in);
    out.p01 += prev[m] * (1 - fn) * fn1_out;
  }
  return out;
}

// Joint pmf of the two inclusion counts over L independent authors.
// Knapsack-style in-place update, O(L^3).
std::vector<double> bivariate_binomial(std::uint32_t L,
                                       const PairOutcome& pi) {
  std::size_t w = L + 1;
  std::vector<double> joint(w * w, 0.0);
  joint[0] = 1;
  double p00 = 1.0 - pi.p11 - pi.p10 - pi.p01;
  for (std::uint32_t author = 0; author < L; ++author) {
    for (std::size_t x = std::min<std::size_t>(author + 1, L);; --x) {
      for (std::size_t y = std::min<std::size_t>(author + 1, L);; --y) {
        double v = joint[x * w + y] * p00;
        if (x > 0) v += joint[(x - 1) * w + y] * pi.p10;
        if (y > 0) v += joint[x * w + y - 1] * pi.p01;
        if (x > 0 && y > 0) v += joint[(x - 1) * w + y - 1] * pi.p11;
        joint[x * w + y] = v;
        if (y == 0) break;
      }
      if (x == 0) break;
    }
  }
  return joint;
}

double phi_max(const PhiFunction& phi, std::uint32_t L) {
  // phi is non-decreasing, so the largest size bounds it.
  return phi(L + 1);
}

}  // namespace

double AuthorCountDistribution::moment(unsigned r) const {
  double s = 0;
  for (std::size_t k = 0; k < pmf.size(); ++k)
    s += std::pow(static_cast<double>(k), static_cast<double>(r)) * pmf[k];
  return s;
}

AuthorCountDistribution per_author_pmf(const CoauthorshipLaw& law,
                                       std::size_t n) {
  AuthorCountDistribution dist;
  dist.n = n;
  dist.pmf = {1.0};
  for (std::size_t e = 1; e <= n; ++e) step_pmf(law, e, dist.pmf);
  return dist;
}

CoauthorSizeLaw coauthor_size_law(const CoauthorshipLaw& law, std::uint32_t L,
                                  std::size_t n, bool with_joint,
                                  std::uint32_t joint_budget) {
  if (n == 0) throw std::invalid_argument("size law: event index starts at 1");
  if (with_joint && L > joint_budget)
    throw std::runtime_error("size law: joint law exceeds compute budget");
  CoauthorSizeLaw out;
  out.n = n;
  out.num_authors = L;
  auto prev = per_author_pmf(law, n - 1);
  out.q = inclusion_prob(law, n, prev.pmf);
  out.marginal = binomial_pmf(L, out.q);
  if (with_joint) out.joint = bivariate_binomial(L, pair_outcome(law, n, prev.pmf));
  return out;
}

double TheoryLimits::mean_rate(std::uint32_t k) const {
  return lambda_t * H[k];
}

double TheoryLimits::var_rate(std::uint32_t k) const {
  return lambda_t * H[k];
}

double TheoryLimits::cov_coefficient(std::uint32_t k, std::uint32_t k2) const {
  if (G.empty()) throw std::logic_error("limits: joint law not computed");
  double sym = 0.5 * (g_at(k, k2) + g_at(k2, k));
  return lambda_t * lambda_t * (sym - H[k] * H[k2]);
}

double TheoryLimits::corr_coefficient(std::uint32_t k, std::uint32_t k2) const {
  if (G.empty()) throw std::logic_error("limits: joint law not computed");
  double denom = H[k] * H[k2];
  if (denom <= 0) return std::numeric_limits<double>::quiet_NaN();
  double sym = 0.5 * (g_at(k, k2) + g_at(k2, k));
  return lambda_t * (sym - H[k] * H[k2]) / std::sqrt(denom);
}

TheoryLimits ht_gt(const CoauthorshipLaw& law, std::uint32_t L,
                   const IntensityFunction& intensity, double t, double eps,
                   bool with_joint, std::uint32_t joint_budget) {
  if (with_joint && L > joint_budget)
    throw std::runtime_error("ht_gt: joint law exceeds compute budget");
  double mass = intensity.integrate(0, t);
  auto table = poisson_table(mass, eps);
  TheoryLimits out;
  out.t = t;
  out.lambda_t = intensity(t);
  out.num_authors = L;
  std::size_t w = L + 1;
  out.H.assign(w, 0.0);
  if (with_joint) out.G.assign(w * w, 0.0);
  out.tail_dropped = table.tail;
  out.terms = table.cutoff;
  std::vector<double> prev = {1.0};  // p_{n-1}
  for (std::size_t n = 1; n <= table.cutoff; ++n) {
    double pu = table.pmf[n - 1];  // P(U = n - 1)
    double q = inclusion_prob(law, n, prev);
    auto marginal = binomial_pmf(L, q);
    for (std::size_t k = 0; k < w; ++k) out.H[k] += pu * marginal[k];
    if (with_joint) {
      auto joint = bivariate_binomial(L, pair_outcome(law, n, prev));
      for (std::size_t i = 0; i < w * w; ++i) out.G[i] += pu * joint[i];
    }
    step_pmf(law, n, prev);
  }
  return out;
}

std::vector<double> expected_coauthors_recursion(const CoauthorshipLaw& law,
                                                 std::uint32_t L,
                                                 std::size_t n_max) {
  if (!law.is_linear())
    throw std::invalid_argument("expected coauthors: law must be linear");
  std::vector<double> mean(n_max + 1, 0.0);
  double prefix = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    mean[n] = law.a(n) * prefix + static_cast<double>(L) * law.b(n);
    prefix += mean[n];
  }
  return mean;
}

std::vector<double> expected_coauthors_closed_form(const CoauthorshipLaw& law,
                                                   std::uint32_t L,
                                                   std::size_t n_max) {
  if (!law.is_linear())
    throw std::invalid_argument("expected coauthors: law must be linear");
  std::vector<double> mean(n_max + 1, 0.0);
  for (std::size_t n = 1; n <= n_max; ++n) {
    double bn = law.b(n);
    if (n == 1) {
      mean[n] = L * bn;
      continue;
    }
    double an = law.a(n);
    double sum = bn + an * law.b(n - 1);
    // prod = (1 + a_{j+1}) ... (1 + a_{n-1}), built from j = n-2 downward.
    double prod = 1;
    for (std::size_t j = n - 2; j >= 1; --j) {
      prod *= 1 + law.a(j + 1);
      sum += law.b(j) * an * prod;
    }
    mean[n] = L * sum;
  }
  return mean;
}

std::vector<double> poisson_window_weights(const IntensityFunction& intensity,
                                           double s, double t,
                                           std::size_t n_max, double eps) {
  std::vector<double> weights(n_max + 1, 0.0);
  double lambda_s = intensity.integrate(0, s);
  double mass = intensity.integrate(s, t);
  if (mass <= 0) return weights;
  auto vt = poisson_table(mass, eps);
  // T[j] = sum_{v >= j} P(V = v) / v, for j >= 1.
  std::size_t vmax = vt.pmf.size() - 1;
  std::vector<double> tail_over_v(vmax + 2, 0.0);
  for (std::size_t v = vmax; v >= 1; --v)
    tail_over_v[v] = tail_over_v[v + 1] + vt.pmf[v] / static_cast<double>(v);
  for (std::size_t n = 1; n <= n_max; ++n) {
    double w = 0;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t j = n - k;
      if (j > vmax) continue;
      w += poisson_pmf(k, lambda_s) * tail_over_v[j];
    }
    weights[n] = w;
  }
  return weights;
}

double poisson_window_weight(const IntensityFunction& intensity, double s,
                             double t, std::size_t n, double eps) {
  if (n == 0)
    throw std::invalid_argument("window weight: event index starts at 1");
  return poisson_window_weights(intensity, s, t, n, eps)[n];
}

ExpectedIndex expected_index(const IntensityFunction& intensity,
                             const CoauthorshipLaw& law, std::uint32_t L,
                             const PhiFunction& phi, double s, double t,
                             double eps) {
  ExpectedIndex out;
  out.window_mass = intensity.integrate(s, t);
  if (out.window_mass <= 0) return out;
  // Papers beyond the Poisson(Lambda(t)) upper quantile cannot sit in the
  // window except with tail probability; that cut is the truncation.
  auto full = poisson_table(intensity.integrate(0, t), eps);
  std::size_t n_max = full.cutoff;
  auto weights = poisson_window_weights(intensity, s, t, n_max, eps);
  std::vector<double> prev = {1.0};
  double series = 0, weight_sum = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    double q = inclusion_prob(law, n, prev);
    auto marginal = binomial_pmf(L, q);
    double mean_phi = 0;
    for (std::uint32_t k = 0; k <= L; ++k)
      mean_phi += phi(k + 1) * marginal[k];
    series += weights[n] * mean_phi;
    weight_sum += weights[n];
    step_pmf(law, n, prev);
  }
  double total_weight = -std::expm1(-out.window_mass);
  out.series = series;
  out.value = series / total_weight;
  out.terms = n_max;
  out.truncation_bound =
      phi_max(phi, L) * std::max(0.0, total_weight - weight_sum);
  return out;
}

double index_rate_limit(const TheoryLimits& limits, const PhiFunction& phi) {
  double sum = 0;
  for (std::uint32_t k = 0; k <= limits.num_authors; ++k)
    sum += phi(k + 1) * limits.H[k];
  return limits.lambda_t * sum;
}

WindowMomentBounds appendix_bounds(double mass) {
  if (!(mass >= 0 && mass < 1))
    throw std::domain_error("appendix bounds: mass must lie in [0, 1)");
  WindowMomentBounds out;
  if (mass == 0) return out;
  double inv = 1.0 / (1.0 - mass);
  double c1 = 1.0 + inv;
  double c2 = 1.0 + inv + inv * inv;
  out.r1 = mass * mass * c1;
  out.r2 = mass * c1 + 2.0 * mass * mass * c2;
  out.r3 = 2.0 * mass * mass * mass * c2;
  out.r4 = mass * mass * c1;
  return out;
}

}  // namespace collab

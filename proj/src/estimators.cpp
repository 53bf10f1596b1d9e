#include "collab/estimators.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <stdexcept>

#include "collab/closed_form.hpp"

namespace collab {

namespace {

void fill_interval(EstimateWithCI& est, std::uint32_t L, double level) {
  double half = normal_two_sided_z(level) * est.sigma /
                std::sqrt(static_cast<double>(L));
  est.lo = est.value - half;
  est.hi = est.value + half;
}

}  // namespace

double normal_two_sided_z(double level) {
  if (!(level > 0 && level < 1))
    throw std::invalid_argument("confidence level must lie in (0,1)");
  boost::math::normal_distribution<double> norm;
  return boost::math::quantile(norm, 1.0 - level / 2.0);
}

EventSnapshot snapshot_at(const SimulationRun& run, std::size_t n) {
  if (n == 0 || n > run.num_events())
    throw std::out_of_range("snapshot: event index outside run");
  EventSnapshot snap;
  snap.n = n;
  snap.num_authors = run.num_authors;
  snap.prev_counts = counts_after(run, n - 1);
  snap.included.assign(run.num_authors, 0);
  for (std::uint32_t i : run.coauthor_sets[n - 1]) snap.included[i] = 1;
  return snap;
}

EstimateWithCI estimate_F_nonparam(const EventSnapshot& snap, std::uint32_t k,
                                   double level) {
  EstimateWithCI est;
  std::uint64_t in_class = 0, joined = 0;
  for (std::uint32_t i = 0; i < snap.num_authors; ++i) {
    if (snap.prev_counts[i] != k) continue;
    ++in_class;
    joined += snap.included[i];
  }
  est.support = in_class;
  if (in_class == 0) return est;  // value 0, no standard error
  est.value = static_cast<double>(joined) / static_cast<double>(in_class);
  double class_frac =
      static_cast<double>(in_class) / static_cast<double>(snap.num_authors);
  est.sigma = std::sqrt(est.value * (1.0 - est.value) / class_frac);
  est.se_available = true;
  fill_interval(est, snap.num_authors, level);
  return est;
}

DeltaMethodContext DeltaMethodContext::from_snapshot(const EventSnapshot& snap) {
  DeltaMethodContext ctx;
  double L = snap.num_authors;
  if (L == 0) {
    ctx.degenerate = true;
    return ctx;
  }
  double zsum[4] = {0, 0, 0, 0};
  double zz[4][4] = {};
  for (std::uint32_t i = 0; i < snap.num_authors; ++i) {
    double x = snap.included[i];
    double y = snap.prev_counts[i];
    double z[4] = {x, y, y * y, x * y};
    for (int r = 0; r < 4; ++r) {
      zsum[r] += z[r];
      for (int c = 0; c < 4; ++c) zz[r][c] += z[r] * z[c];
    }
  }
  for (int r = 0; r < 4; ++r) ctx.zbar[r] = zsum[r] / L;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      ctx.sigma[r][c] = zz[r][c] / L - ctx.zbar[r] * ctx.zbar[c];
  ctx.var_y = ctx.zbar[2] - ctx.zbar[1] * ctx.zbar[1];
  if (ctx.var_y <= 0) {
    ctx.degenerate = true;
    ctx.slope = 0;
    ctx.intercept = ctx.zbar[0];
    return ctx;
  }
  ctx.slope = (ctx.zbar[3] - ctx.zbar[0] * ctx.zbar[1]) / ctx.var_y;
  ctx.intercept = ctx.zbar[0] - ctx.slope * ctx.zbar[1];
  return ctx;
}

DeltaMethodContext DeltaMethodContext::from_law(const CoauthorshipLaw& law,
                                                std::size_t n) {
  if (n == 0) throw std::invalid_argument("delta context: n starts at 1");
  DeltaMethodContext ctx;
  auto prev = per_author_pmf(law, n - 1);
  // s[g][l] = E X^g Y^l with X | Y=m ~ Bernoulli(F_n(m)); X^2 = X.
  double mu[5] = {1, 0, 0, 0, 0};
  for (unsigned r = 1; r <= 4; ++r) mu[r] = prev.moment(r);
  double s[5] = {0, 0, 0, 0, 0};  // s[l] = E X Y^l
  for (std::size_t m = 0; m < prev.pmf.size(); ++m) {
    double f = law.evaluate(n, m);
    double ml = 1;
    for (unsigned l = 0; l <= 4; ++l) {
      s[l] += prev.pmf[m] * f * ml;
      ml *= static_cast<double>(m);
    }
  }
  ctx.zbar = {s[0], mu[1], mu[2], s[1]};
  double cov[4][4];
  cov[0][0] = s[0] - s[0] * s[0];
  cov[0][1] = s[1] - s[0] * mu[1];
  cov[0][2] = s[2] - s[0] * mu[2];
  cov[0][3] = s[1] - s[0] * s[1];
  cov[1][1] = mu[2] - mu[1] * mu[1];
  cov[1][2] = mu[3] - mu[1] * mu[2];
  cov[1][3] = s[2] - mu[1] * s[1];
  cov[2][2] = mu[4] - mu[2] * mu[2];
  cov[2][3] = s[3] - mu[2] * s[1];
  cov[3][3] = s[2] - s[1] * s[1];
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) ctx.sigma[r][c] = cov[std::min(r, c)][std::max(r, c)];
  ctx.var_y = mu[2] - mu[1] * mu[1];
  if (ctx.var_y <= 0) {
    ctx.degenerate = true;
    ctx.slope = 0;
    ctx.intercept = s[0];
    return ctx;
  }
  ctx.slope = (s[1] - s[0] * mu[1]) / ctx.var_y;
  ctx.intercept = s[0] - ctx.slope * mu[1];
  return ctx;
}

std::array<double, 4> DeltaMethodContext::slope_gradient() const {
  // d/dx of (x4 - x1 x2) / (x3 - x2^2) at zbar.
  double mu_x = zbar[0], mu_y = zbar[1];
  return {-mu_y / var_y, (2 * slope * mu_y - mu_x) / var_y, -slope / var_y,
          1 / var_y};
}

std::array<double, 4> DeltaMethodContext::intercept_gradient() const {
  // d/dx of x1 - x2 * slope(x) at zbar.
  double mu_x = zbar[0], mu_y = zbar[1];
  return {1 + mu_y * mu_y / var_y,
          -(slope * var_y + 2 * slope * mu_y * mu_y - mu_x * mu_y) / var_y,
          slope * mu_y / var_y, -mu_y / var_y};
}

namespace {

double quad_form(const std::array<double, 4>& g,
                 const std::array<std::array<double, 4>, 4>& s) {
  double total = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) total += g[r] * s[r][c] * g[c];
  return total;
}

}  // namespace

double DeltaMethodContext::slope_variance() const {
  if (degenerate) throw std::logic_error("delta context: degenerate sample");
  return quad_form(slope_gradient(), sigma);
}

double DeltaMethodContext::intercept_variance() const {
  if (degenerate) throw std::logic_error("delta context: degenerate sample");
  return quad_form(intercept_gradient(), sigma);
}

LinearFit estimate_linear(const EventSnapshot& snap, double level) {
  auto ctx = DeltaMethodContext::from_snapshot(snap);
  LinearFit fit;
  fit.slope.value = ctx.slope;
  fit.intercept.value = ctx.intercept;
  fit.slope.support = snap.num_authors;
  fit.intercept.support = snap.num_authors;
  if (ctx.degenerate) return fit;  // slope 0, intercept = mean inclusion
  fit.slope.sigma = std::sqrt(std::max(0.0, ctx.slope_variance()));
  fit.intercept.sigma = std::sqrt(std::max(0.0, ctx.intercept_variance()));
  fit.slope.se_available = true;
  fit.intercept.se_available = true;
  fill_interval(fit.slope, snap.num_authors, level);
  fill_interval(fit.intercept, snap.num_authors, level);
  return fit;
}

std::vector<EstimateWithCI> estimate_F_series(const SimulationRun& run,
                                              std::uint32_t k, double level) {
  std::vector<EstimateWithCI> series;
  series.reserve(run.num_events());
  std::vector<std::uint32_t> counts(run.num_authors, 0);
  for (std::size_t n = 1; n <= run.num_events(); ++n) {
    EventSnapshot snap;
    snap.n = n;
    snap.num_authors = run.num_authors;
    snap.prev_counts = counts;
    snap.included.assign(run.num_authors, 0);
    for (std::uint32_t i : run.coauthor_sets[n - 1]) snap.included[i] = 1;
    series.push_back(estimate_F_nonparam(snap, k, level));
    for (std::uint32_t i : run.coauthor_sets[n - 1]) ++counts[i];
  }
  return series;
}

double ratio_variance(double mu_x, double mu_y, double sx2, double sy2,
                      double rho) {
  if (mu_y == 0) throw std::domain_error("ratio variance: mu_y must be nonzero");
  double sx = std::sqrt(sx2), sy = std::sqrt(sy2);
  return (mu_y * mu_y * sx2 + mu_x * mu_x * sy2 -
          2 * rho * mu_x * mu_y * sx * sy) /
         (mu_y * mu_y * mu_y * mu_y);
}

}  // namespace collab

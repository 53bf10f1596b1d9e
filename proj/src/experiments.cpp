#include "collab/experiments.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "collab/closed_form.hpp"
#include "collab/csv.hpp"
#include "collab/estimators.hpp"
#include "collab/indices.hpp"
#include "collab/simulation.hpp"

namespace collab {

namespace {

// Disjoint seed streams per output kind, so adding one output never
// perturbs another's draws.
enum SeedStream : std::uint64_t {
  kIndicesStream = 1,
  kCurveStream = 2,
  kStudyStream = 3,
};

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) {
  return derive_seed(derive_seed(master, stream), index);
}

IndexAggregate aggregate(const std::vector<std::optional<double>>& values) {
  IndexAggregate agg;
  double sum = 0;
  for (const auto& v : values)
    if (v) {
      ++agg.used;
      sum += *v;
    }
  if (agg.used == 0) return agg;
  double mean = sum / static_cast<double>(agg.used);
  agg.mean = mean;
  if (agg.used >= 2) {
    double ss = 0;
    for (const auto& v : values)
      if (v) ss += (*v - mean) * (*v - mean);
    double sd = std::sqrt(ss / static_cast<double>(agg.used - 1));
    agg.se = sd / std::sqrt(static_cast<double>(agg.used));
  }
  return agg;
}

bool wants(const ExperimentConfig& config, const std::string& output) {
  for (const auto& o : config.outputs)
    if (o == output) return true;
  return false;
}

}  // namespace

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  unsigned workers = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

ExperimentConfig parse_experiment_config(ConfigMap& cfg) {
  ExperimentConfig config;
  config.name = cfg.get_string_or("name", "");
  config.num_authors = static_cast<std::uint32_t>(cfg.get_int_or("L", 100));
  config.horizon = cfg.get_number_or("horizon_months", 360);
  config.year_length = cfg.get_number_or("year_length_months", 12);
  config.replicates = static_cast<std::size_t>(cfg.get_int_or("replicates", 10));
  config.seed = static_cast<std::uint64_t>(
      cfg.get_int_or("seed", static_cast<std::int64_t>(kDefaultSeed)));
  config.threads = static_cast<unsigned>(cfg.get_int_or("threads", 1));
  config.outputs = split_tokens(cfg.get_string_or("outputs", "indices"));
  for (const auto& o : config.outputs)
    if (o != "indices" && o != "coauthor_curve" && o != "estimator_study")
      throw std::runtime_error("config: unknown output '" + o + "'");
  config.law_kind = cfg.get_string("law.kind");
  cfg.set("law.kind", config.law_kind);
  config.law = build_law(cfg);
  if (cfg.has("intensity.kind") || wants(config, "indices"))
    config.intensity = build_intensity(cfg);
  config.curve_n_max =
      static_cast<std::size_t>(cfg.get_int_or("curve.n_max", 30));
  config.curve_runs =
      static_cast<std::size_t>(cfg.get_int_or("curve.runs", 1000));
  config.study_n = static_cast<std::size_t>(cfg.get_int_or("study.n", 6));
  config.study_k = static_cast<std::uint32_t>(cfg.get_int_or("study.k", 1));
  for (const auto& tok :
       split_tokens(cfg.get_string_or("study.L_grid", "100 1000 10000")))
    config.study_grid.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
  config.study_replicates =
      static_cast<std::size_t>(cfg.get_int_or("study.replicates", 1000));
  config.study_level = cfg.get_number_or("study.level", 0.05);
  config.text = cfg.to_text();
  return config;
}

std::vector<std::string> builtin_config_names() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6",
          "fig7", "fig8", "fig9", "fig10"};
}

std::string builtin_config_text(const std::string& name) {
  static const std::map<std::string, std::string> kConfigs = {
      {"fig2",
       "name = fig2\n"
       "# mean team growth: simulated runs against the closed-form curve\n"
       "L = 100\n"
       "law.kind = harmonic_linear\n"
       "law.a_scale = 0.4\n"
       "law.b_scale = 0.05\n"
       "law.log_base = e\n"
       "intensity.kind = constant\n"
       "intensity.rate = 0.5\n"
       "outputs = coauthor_curve\n"
       "curve.n_max = 30\n"
       "curve.runs = 1000\n"},
      {"fig3",
       "name = fig3\n"
       "L = 100\n"
       "law.kind = constant\n"
       "law.p = 0.01\n"
       "intensity.kind = constant\n"
       "intensity.rate = 0.5\n"
       "horizon_months = 360\n"
       "replicates = 10\n"
       "outputs = indices\n"},
      {"fig4",
       "name = fig4\n"
       "L = 100\n"
       "law.kind = affine_k_clamped\n"
       "law.slope = 0.05\n"
       "law.intercept = 0.005\n"
       "intensity.kind = constant\n"
       "intensity.rate = 0.5\n"
       "horizon_months = 360\n"
       "replicates = 10\n"
       "outputs = indices\n"},
      {"fig5",
       "name = fig5\n"
       "L = 100\n"
       "law.kind = ramp_n_clamped\n"
       "law.denominator = 180\n"
       "intensity.kind = constant\n"
       "intensity.rate = 0.5\n"
       "horizon_months = 360\n"
       "replicates = 10\n"
       "outputs = indices\n"},
      {"fig6",
       "name = fig6\n"
       "L = 100\n"
       "law.kind = constant\n"
       "law.p = 0.01\n"
       "intensity.kind = segments\n"
       "intensity.segment = 0 100 const 0.16666666666666666\n"
       "intensity.segment = 100 200 const 0.3333333333333333\n"
       "intensity.segment = 200 inf const 0.5\n"
       "horizon_months = 360\n"
       "replicates = 10\n"
       "outputs = indices\n"},
      {"fig7",
       "name = fig7\n"
       "L = 100\n"
       "law.kind = affine_k_clamped\n"
       "law.slope = 0.05\n"
       "law.intercept = 0.005\n"
       "intensity.kind = segments\n"
       "intensity.segment = 0 100 const 0.16666666666666666\n"
       "intensity.segment = 100 200 const 0.3333333333333333\n"
       "intensity.segment = 200 inf const 0.5\n"
       "horizon_months = 360\n"
       "replicates = 10\n"
       "outputs = indices\n"},
      {"fig8",
       "name = fig8\n"
       "L = 100\n"
       "law.kind = ramp_n_clamped\n"
       "law.denominator = 180\n"
       "intensity.kind = segments\n"
       "intensity.segment = 0 100 const 0.16666666666666666\n"
       "intensity.segment = 100 200 const 0.3333333333333333\n"
       "intensity.segment = 200 inf const 0.5\n"
       "horizon_months = 360\n"
       "replicates = 10\n"
       "outputs = indices\n"},
      {"fig9",
       "name = fig9\n"
       "L = 100\n"
       "law.kind = constant\n"
       "law.p = 0.01\n"
       "intensity.kind = segments\n"
       "intensity.segment = 0 100 linear 0.005 0\n"
       "intensity.segment = 100 200 linear 0.0025 0\n"
       "intensity.segment = 200 inf linear 0.001388888888888889 0 cap 1\n"
       "horizon_months = 360\n"
       "replicates = 10\n"
       "outputs = indices\n"},
      {"fig10",
       "name = fig10\n"
       "L = 100\n"
       "law.kind = ramp_n_clamped\n"
       "law.denominator = 180\n"
       "intensity.kind = segments\n"
       "intensity.segment = 0 100 linear 0.005 0\n"
       "intensity.segment = 100 200 linear 0.0025 0\n"
       "intensity.segment = 200 inf linear 0.001388888888888889 0 cap 0.5\n"
       "horizon_months = 360\n"
       "replicates = 10\n"
       "outputs = indices\n"},
  };
  auto it = kConfigs.find(name);
  if (it == kConfigs.end())
    throw std::runtime_error("unknown builtin config '" + name + "'");
  return it->second;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;

  if (wants(config, "indices")) {
    auto years = static_cast<std::size_t>(
        std::ceil(config.horizon / config.year_length));
    struct Series {
      std::vector<std::optional<double>> ci, dc, cc;
    };
    std::vector<Series> per_rep(config.replicates);
    parallel_for(config.replicates, config.threads, [&](std::size_t r) {
      Rng rng(stream_seed(config.seed, kIndicesStream, r));
      auto timeline = sample_event_times(config.intensity, config.horizon, rng);
      auto run = simulate_coauthor_sets(config.law, config.num_authors,
                                        timeline.size(), rng);
      attach_event_times(run, timeline);
      auto take = [&](const PhiFunction& phi) {
        auto series = yearly_index_series(run, phi, config.year_length, years);
        std::vector<std::optional<double>> vals(series.size());
        for (std::size_t j = 0; j < series.size(); ++j)
          vals[j] = series[j].value;
        return vals;
      };
      per_rep[r].ci = take(PhiFunction::ci());
      per_rep[r].dc = take(PhiFunction::dc());
      per_rep[r].cc = take(PhiFunction::cc());
    });
    result.years.resize(years);
    for (std::size_t j = 0; j < years; ++j) {
      std::vector<std::optional<double>> ci(config.replicates),
          dc(config.replicates), cc(config.replicates);
      for (std::size_t r = 0; r < config.replicates; ++r) {
        ci[r] = per_rep[r].ci[j];
        dc[r] = per_rep[r].dc[j];
        cc[r] = per_rep[r].cc[j];
      }
      result.years[j].year = j;
      result.years[j].ci = aggregate(ci);
      result.years[j].dc = aggregate(dc);
      result.years[j].cc = aggregate(cc);
    }
    if (config.law.is_constant()) {
      // Constant-law expected indices are window-free Binomial functionals.
      auto size1 = coauthor_size_law(config.law, config.num_authors, 1);
      auto expect = [&](const PhiFunction& phi) {
        double e = 0;
        for (std::uint32_t k = 0; k <= config.num_authors; ++k)
          e += phi(k + 1) * size1.marginal[k];
        return e;
      };
      result.theory_ci = expect(PhiFunction::ci());
      result.theory_dc = expect(PhiFunction::dc());
      result.theory_cc = expect(PhiFunction::cc());
    }
  }

  if (wants(config, "coauthor_curve")) {
    std::vector<std::vector<double>> sizes(config.curve_runs);
    parallel_for(config.curve_runs, config.threads, [&](std::size_t r) {
      Rng rng(stream_seed(config.seed, kCurveStream, r));
      auto run = simulate_coauthor_sets(config.law, config.num_authors,
                                        config.curve_n_max, rng);
      sizes[r].resize(config.curve_n_max);
      for (std::size_t n = 0; n < config.curve_n_max; ++n)
        sizes[r][n] = static_cast<double>(run.coauthor_sets[n].size());
    });
    auto theory = expected_coauthors_closed_form(
        config.law, config.num_authors, config.curve_n_max);
    result.curve.resize(config.curve_n_max);
    for (std::size_t n = 0; n < config.curve_n_max; ++n) {
      double sum = 0;
      for (std::size_t r = 0; r < config.curve_runs; ++r) sum += sizes[r][n];
      double mean = sum / static_cast<double>(config.curve_runs);
      double ss = 0;
      for (std::size_t r = 0; r < config.curve_runs; ++r)
        ss += (sizes[r][n] - mean) * (sizes[r][n] - mean);
      double sd = config.curve_runs >= 2
                      ? std::sqrt(ss / static_cast<double>(config.curve_runs - 1))
                      : 0;
      result.curve[n].n = n + 1;
      result.curve[n].mc_mean = mean;
      result.curve[n].mc_se =
          sd / std::sqrt(static_cast<double>(config.curve_runs));
      result.curve[n].closed_form = theory[n + 1];
    }
  }

  if (wants(config, "estimator_study")) {
    EstimatorStudyConfig study;
    study.law = config.law;
    study.n = config.study_n;
    study.k = config.study_k;
    study.grid = config.study_grid;
    study.replicates = config.study_replicates;
    study.level = config.study_level;
    study.seed = derive_seed(config.seed, kStudyStream);
    study.threads = config.threads;
    result.study = run_estimator_study(study);
  }

  return result;
}

std::vector<EstimatorStudyRow> run_estimator_study(
    const EstimatorStudyConfig& config) {
  if (config.n == 0)
    throw std::invalid_argument("estimator study: n starts at 1");
  double truth_f = config.law.evaluate(config.n, config.k);
  bool linear = config.law.is_linear();
  double truth_a = linear ? config.law.a(config.n) : 0;
  double truth_b = linear ? config.law.b(config.n) : 0;
  auto prev = per_author_pmf(config.law, config.n - 1);
  double p_class =
      config.k < prev.pmf.size() ? prev.pmf[config.k] : 0.0;

  std::vector<EstimatorStudyRow> rows;
  for (std::size_t gi = 0; gi < config.grid.size(); ++gi) {
    std::uint32_t L = config.grid[gi];
    struct RepOutcome {
      double f = 0, a = 0, b = 0;
      bool f_cover = false, a_cover = false, b_cover = false;
      bool f_ci = false;
    };
    std::vector<RepOutcome> reps(config.replicates);
    std::uint64_t grid_seed = derive_seed(config.seed, gi);
    parallel_for(config.replicates, config.threads, [&](std::size_t r) {
      Rng rng(derive_seed(grid_seed, r));
      auto run = simulate_coauthor_sets(config.law, L, config.n, rng);
      auto snap = snapshot_at(run, config.n);
      auto f = estimate_F_nonparam(snap, config.k, config.level);
      auto fit = estimate_linear(snap, config.level);
      RepOutcome out;
      out.f = f.value;
      out.a = fit.slope.value;
      out.b = fit.intercept.value;
      out.f_ci = f.se_available;
      out.f_cover = f.se_available && f.lo <= truth_f && truth_f <= f.hi;
      out.a_cover = fit.slope.se_available && fit.slope.lo <= truth_a &&
                    truth_a <= fit.slope.hi;
      out.b_cover = fit.intercept.se_available && fit.intercept.lo <= truth_b &&
                    truth_b <= fit.intercept.hi;
      reps[r] = out;
    });
    EstimatorStudyRow row;
    row.num_authors = L;
    row.n = config.n;
    row.k = config.k;
    row.sigma2_f = p_class > 0 ? truth_f * (1 - truth_f) / p_class : 0;
    double R = static_cast<double>(config.replicates);
    double mean_f = 0;
    for (const auto& rep : reps) mean_f += rep.f;
    mean_f /= R;
    double var_f = 0, mse_f = 0, mse_a = 0, mse_b = 0;
    double cov_f = 0, cov_a = 0, cov_b = 0;
    for (const auto& rep : reps) {
      var_f += (rep.f - mean_f) * (rep.f - mean_f);
      mse_f += (rep.f - truth_f) * (rep.f - truth_f);
      mse_a += (rep.a - truth_a) * (rep.a - truth_a);
      mse_b += (rep.b - truth_b) * (rep.b - truth_b);
      cov_f += rep.f_cover;
      cov_a += rep.a_cover;
      cov_b += rep.b_cover;
    }
    row.emp_var_scaled_f = static_cast<double>(L) * var_f / (R - 1);
    row.coverage_f = cov_f / R;
    row.coverage_a = cov_a / R;
    row.coverage_b = cov_b / R;
    row.rmse_f = std::sqrt(mse_f / R);
    row.rmse_a = std::sqrt(mse_a / R);
    row.rmse_b = std::sqrt(mse_b / R);
    rows.push_back(row);
  }
  return rows;
}

void write_indices_csv(const ExperimentResult& result, std::ostream& os) {
  bool theory = result.theory_ci.has_value();
  std::vector<std::string> header = {"year",    "mean_ci", "se_ci", "mean_dc",
                                     "se_dc",   "mean_cc", "se_cc"};
  if (theory) {
    header.push_back("theory_ci");
    header.push_back("theory_dc");
    header.push_back("theory_cc");
  }
  write_csv_row(os, header);
  for (const auto& row : result.years) {
    std::vector<std::string> cells = {
        format_number(static_cast<double>(row.year)),
        csv_cell(row.ci.mean), csv_cell(row.ci.se),
        csv_cell(row.dc.mean), csv_cell(row.dc.se),
        csv_cell(row.cc.mean), csv_cell(row.cc.se)};
    if (theory) {
      cells.push_back(csv_cell(result.theory_ci));
      cells.push_back(csv_cell(result.theory_dc));
      cells.push_back(csv_cell(result.theory_cc));
    }
    write_csv_row(os, cells);
  }
}

void write_curve_csv(const ExperimentResult& result, std::ostream& os) {
  write_csv_row(os, {"n", "mc_mean", "mc_se", "closed_form"});
  for (const auto& row : result.curve)
    write_csv_row(os, {format_number(static_cast<double>(row.n)),
                       format_number(row.mc_mean), format_number(row.mc_se),
                       format_number(row.closed_form)});
}

void write_study_csv(const ExperimentResult& result, std::ostream& os) {
  write_csv_row(os, {"L", "n", "k", "emp_var_scaled_f", "sigma2_f",
                     "coverage_f", "coverage_a", "coverage_b", "rmse_f",
                     "rmse_a", "rmse_b"});
  for (const auto& row : result.study)
    write_csv_row(
        os, {format_number(row.num_authors), format_number(static_cast<double>(row.n)),
             format_number(row.k), format_number(row.emp_var_scaled_f),
             format_number(row.sigma2_f), format_number(row.coverage_f),
             format_number(row.coverage_a), format_number(row.coverage_b),
             format_number(row.rmse_f), format_number(row.rmse_a),
             format_number(row.rmse_b)});
}

}  // namespace collab

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "collab/arxiv.hpp"
#include "collab/closed_form.hpp"
#include "collab/config.hpp"
#include "collab/csv.hpp"
#include "collab/estimators.hpp"
#include "collab/experiments.hpp"
#include "collab/indices.hpp"
#include "collab/intensity.hpp"
#include "collab/simulation.hpp"

namespace {

using namespace collab;

struct CommonOpts {
  std::string config_path;
  std::string name;
  std::vector<std::string> sets;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<double> epsilon;
};

std::string trim_copy(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

ConfigMap load_config(const CommonOpts& opts) {
  ConfigMap cfg;
  if (!opts.name.empty())
    cfg = ConfigMap::parse(builtin_config_text(opts.name));
  else if (!opts.config_path.empty())
    cfg = ConfigMap::parse_file(opts.config_path);
  else
    throw std::runtime_error("need --config FILE or --name BUILTIN");
  for (const auto& kv : opts.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("--set expects key=value, got: " + kv);
    cfg.set(trim_copy(kv.substr(0, eq)), trim_copy(kv.substr(eq + 1)));
  }
  if (opts.seed) cfg.set("seed", std::to_string(*opts.seed));
  if (opts.threads) cfg.set("threads", std::to_string(*opts.threads));
  return cfg;
}

std::ofstream open_out(const std::string& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  auto path = std::filesystem::path(dir) / file;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void echo_config(const ExperimentConfig& config, const std::string& out) {
  auto os = open_out(out, "config_resolved.txt");
  os << config.text;
}

SimulationRun simulate_one(const ExperimentConfig& config, Rng& rng) {
  auto timeline = sample_event_times(config.intensity, config.horizon, rng);
  auto run = simulate_coauthor_sets(config.law, config.num_authors,
                                    timeline.size(), rng);
  attach_event_times(run, timeline);
  return run;
}

void write_yearly_series(const SimulationRun& run, double year_length,
                         std::ostream& os) {
  auto ci = yearly_index_series(run, PhiFunction::ci(), year_length);
  auto dc = yearly_index_series(run, PhiFunction::dc(), year_length);
  auto cc = yearly_index_series(run, PhiFunction::cc(), year_length);
  write_csv_row(os, {"year", "papers", "ci", "dc", "cc"});
  for (std::size_t j = 0; j < ci.size(); ++j)
    write_csv_row(os, {format_number(static_cast<double>(ci[j].year)),
                       format_number(static_cast<double>(ci[j].papers)),
                       csv_cell(ci[j].value), csv_cell(dc[j].value),
                       csv_cell(cc[j].value)});
}

int run_simulate(const CommonOpts& opts) {
  ConfigMap cfg = load_config(opts);
  ExperimentConfig config = parse_experiment_config(cfg);
  cfg.reject_unknown();
  Rng rng(config.seed);
  auto run = simulate_one(config, rng);

  {
    auto os = open_out(opts.out, "timeline.csv");
    write_csv_row(os, {"event_time"});
    for (double t : run.event_times) write_csv_row(os, {format_number(t)});
  }
  {
    auto os = open_out(opts.out, "run.csv");
    write_csv_row(os, {"event_index", "event_time", "coauthor_ids"});
    for (std::size_t i = 0; i < run.num_events(); ++i) {
      std::string ids;
      for (std::size_t j = 0; j < run.coauthor_sets[i].size(); ++j) {
        if (j) ids += ';';
        ids += std::to_string(run.coauthor_sets[i][j]);
      }
      write_csv_row(os, {format_number(static_cast<double>(i + 1)),
                         format_number(run.event_times[i]), ids});
    }
  }
  {
    auto os = open_out(opts.out, "yearly.csv");
    write_yearly_series(run, config.year_length, os);
  }
  echo_config(config, opts.out);
  return 0;
}

int run_theory(const CommonOpts& opts) {
  ConfigMap cfg = load_config(opts);
  if (opts.epsilon) cfg.set("theory.epsilon", format_number(*opts.epsilon));
  ExperimentConfig config = parse_experiment_config(cfg);
  double t = cfg.get_number_or("theory.t", config.horizon);
  double eps = cfg.get_number_or("theory.epsilon", 1e-12);
  auto k_max = static_cast<std::uint32_t>(
      cfg.get_int_or("theory.k_max", config.num_authors));
  bool with_joint = cfg.get_int_or("theory.joint", 1) != 0;
  auto budget = static_cast<std::uint32_t>(
      cfg.get_int_or("theory.joint_budget", 2048));
  double win_s = cfg.get_number_or("theory.window_start", 0.0);
  double win_t = cfg.get_number_or("theory.window_end", t);
  cfg.reject_unknown();
  if (k_max > config.num_authors) k_max = config.num_authors;

  auto limits = ht_gt(config.law, config.num_authors, config.intensity, t,
                      eps, with_joint, budget);
  {
    auto os = open_out(opts.out, "ht.csv");
    write_csv_row(os, {"k", "h"});
    for (std::uint32_t k = 0; k <= k_max; ++k)
      write_csv_row(os, {format_number(k), format_number(limits.h_at(k))});
  }
  if (with_joint) {
    auto os = open_out(opts.out, "gt.csv");
    write_csv_row(os, {"k", "kprime", "g"});
    for (std::uint32_t k = 0; k <= k_max; ++k)
      for (std::uint32_t k2 = 0; k2 <= k_max; ++k2)
        write_csv_row(os, {format_number(k), format_number(k2),
                           format_number(limits.g_at(k, k2))});
  }
  {
    auto os = open_out(opts.out, "limits.csv");
    write_csv_row(os, {"k", "kprime", "mean_rate", "var_rate",
                       "cov_coefficient", "corr_coefficient"});
    for (std::uint32_t k = 0; k <= k_max; ++k)
      write_csv_row(os, {format_number(k), format_number(k),
                         format_number(limits.mean_rate(k)),
                         format_number(limits.var_rate(k)), "", ""});
    if (with_joint)
      for (std::uint32_t k = 0; k <= k_max; ++k)
        for (std::uint32_t k2 = k + 1; k2 <= k_max; ++k2)
          write_csv_row(os, {format_number(k), format_number(k2), "", "",
                             format_number(limits.cov_coefficient(k, k2)),
                             format_number(limits.corr_coefficient(k, k2))});
  }
  {
    auto os = open_out(opts.out, "expected_index.csv");
    write_csv_row(os, {"phi", "window_start", "window_end", "value", "series",
                       "window_mass", "truncation_bound", "terms",
                       "rate_at_t"});
    const std::pair<const char*, PhiFunction> phis[] = {
        {"ci", PhiFunction::ci()},
        {"dc", PhiFunction::dc()},
        {"cc", PhiFunction::cc()}};
    for (const auto& [label, phi] : phis) {
      auto ei = expected_index(config.intensity, config.law,
                               config.num_authors, phi, win_s, win_t, eps);
      write_csv_row(os, {label, format_number(win_s), format_number(win_t),
                         format_number(ei.value), format_number(ei.series),
                         format_number(ei.window_mass),
                         format_number(ei.truncation_bound),
                         format_number(static_cast<double>(ei.terms)),
                         format_number(index_rate_limit(limits, phi))});
    }
  }
  if (config.law.is_linear()) {
    auto curve = expected_coauthors_closed_form(
        config.law, config.num_authors, config.curve_n_max);
    auto os = open_out(opts.out, "expected_coauthors.csv");
    write_csv_row(os, {"n", "expected"});
    for (std::size_t n = 1; n <= config.curve_n_max; ++n)
      write_csv_row(os,
                    {format_number(static_cast<double>(n)),
                     format_number(curve[n])});
  }
  {
    auto os = open_out(opts.out, "summary.txt");
    os << "t = " << format_number(t) << "\n"
       << "epsilon = " << format_number(eps) << "\n"
       << "lambda_t = " << format_number(limits.lambda_t) << "\n"
       << "tail_dropped = " << format_number(limits.tail_dropped) << "\n"
       << "terms = " << limits.terms << "\n";
  }
  echo_config(config, opts.out);
  return 0;
}

int run_estimate(const CommonOpts& opts, std::optional<double> bandwidth,
                 const std::string& kernel_name) {
  ConfigMap cfg = load_config(opts);
  ExperimentConfig config = parse_experiment_config(cfg);
  auto k = static_cast<std::uint32_t>(cfg.get_int_or("estimate.k", 1));
  double level = cfg.get_number_or("estimate.level", 0.05);
  double grid_step = cfg.get_number_or("estimate.grid_step", 1.0);
  double h = bandwidth ? *bandwidth
                       : cfg.get_number_or("estimate.bandwidth", 6.0);
  std::string kname = !kernel_name.empty()
                          ? kernel_name
                          : cfg.get_string_or("estimate.kernel", "box");
  cfg.reject_unknown();
  Kernel kernel;
  if (kname == "box")
    kernel = Kernel::Box;
  else if (kname == "triangular")
    kernel = Kernel::Triangular;
  else if (kname == "epanechnikov")
    kernel = Kernel::Epanechnikov;
  else
    throw std::runtime_error("unknown kernel: " + kname);

  Rng rng(config.seed);
  auto run = simulate_one(config, rng);
  {
    auto os = open_out(opts.out, "estimates.csv");
    write_csv_row(os, {"n", "k", "value", "se", "lo", "hi", "support_count"});
    auto series = estimate_F_series(run, k, level);
    double root_l = std::sqrt(static_cast<double>(config.num_authors));
    for (std::size_t i = 0; i < series.size(); ++i) {
      const auto& est = series[i];
      std::optional<double> se, lo, hi;
      if (est.se_available) {
        se = est.sigma / root_l;
        lo = est.lo;
        hi = est.hi;
      }
      write_csv_row(os, {format_number(static_cast<double>(i + 1)),
                         format_number(k), format_number(est.value),
                         csv_cell(se), csv_cell(lo), csv_cell(hi),
                         format_number(static_cast<double>(est.support))});
    }
  }
  {
    auto os = open_out(opts.out, "linear_fit.csv");
    write_csv_row(os, {"n", "slope", "slope_se", "slope_lo", "slope_hi",
                       "intercept", "intercept_se", "intercept_lo",
                       "intercept_hi"});
    double root_l = std::sqrt(static_cast<double>(config.num_authors));
    for (std::size_t n = 1; n <= run.num_events(); ++n) {
      auto fit = estimate_linear(snapshot_at(run, n), level);
      auto cells = [&](const EstimateWithCI& est) {
        std::vector<std::string> out = {format_number(est.value)};
        if (est.se_available) {
          out.push_back(format_number(est.sigma / root_l));
          out.push_back(format_number(est.lo));
          out.push_back(format_number(est.hi));
        } else {
          out.insert(out.end(), {"", "", ""});
        }
        return out;
      };
      std::vector<std::string> row = {format_number(static_cast<double>(n))};
      for (auto& c : cells(fit.slope)) row.push_back(std::move(c));
      for (auto& c : cells(fit.intercept)) row.push_back(std::move(c));
      write_csv_row(os, row);
    }
  }
  {
    auto os = open_out(opts.out, "intensity_kernel.csv");
    write_csv_row(os, {"t", "lambda_hat", "lambda_true"});
    EventTimeline timeline{run.event_times, config.horizon};
    for (double t = 0; t <= config.horizon + 1e-9; t += grid_step)
      write_csv_row(
          os, {format_number(t),
               format_number(estimate_intensity_kernel(timeline, t, h, kernel)),
               format_number(config.intensity(t))});
  }
  echo_config(config, opts.out);
  return 0;
}

int run_experiment_cmd(const CommonOpts& opts) {
  ConfigMap cfg = load_config(opts);
  ExperimentConfig config = parse_experiment_config(cfg);
  cfg.reject_unknown();
  auto result = run_experiment(config);
  auto has = [&](const char* o) {
    for (const auto& s : config.outputs)
      if (s == o) return true;
    return false;
  };
  if (has("indices")) {
    auto os = open_out(opts.out, "indices.csv");
    write_indices_csv(result, os);
  }
  if (has("coauthor_curve")) {
    auto os = open_out(opts.out, "curve.csv");
    write_curve_csv(result, os);
  }
  if (has("estimator_study")) {
    auto os = open_out(opts.out, "study.csv");
    write_study_csv(result, os);
  }
  echo_config(config, opts.out);
  return 0;
}

struct ArxivOpts {
  std::string input;
  std::string discipline;
  std::size_t top_k = 100;
  std::uint64_t seed = kDefaultSeed;
  std::string out = ".";
  std::size_t sample_size = 1000;
  int delta_years = 1;
  std::vector<std::uint32_t> f_ks;
  std::string egos = "all";  // all | top
};

int run_arxiv(const ArxivOpts& opts) {
  if (opts.egos != "all" && opts.egos != "top")
    throw std::runtime_error("--egos must be all or top");
  ParseStats stats;
  RecordProvider provider = file_provider(opts.input, &stats);
  if (!opts.discipline.empty())
    provider = filter_discipline(provider, opts.discipline);

  {
    auto os = open_out(opts.out, "yearly_indices.csv");
    write_yearly_indices_csv(yearly_indices(provider), os);
  }
  auto top = top_productive_authors(provider, opts.top_k);
  {
    auto os = open_out(opts.out, "top_authors.csv");
    write_top_authors_csv(top, os);
  }
  std::vector<std::string> names;
  names.reserve(top.ranked.size());
  for (const auto& row : top.ranked) names.push_back(row.author);

  {
    auto os = open_out(opts.out, "yearly_indices_top.csv");
    std::vector<YearlyIndicesRow> rows;
    if (!names.empty())
      rows = yearly_indices(filter_authors(provider, names));
    write_yearly_indices_csv(rows, os);
  }
  {
    auto os = open_out(opts.out, "kth_paper.csv");
    std::vector<KthPaperPoint> rows;
    if (!names.empty()) rows = coauthors_per_kth_paper(provider, names);
    write_kth_paper_csv(rows, os);
  }
  {
    auto os = open_out(opts.out, "correlations.csv");
    write_correlation_csv(
        correlation_series(provider, opts.sample_size, opts.delta_years,
                           opts.seed),
        os);
  }
  std::vector<std::uint32_t> ks = opts.f_ks;
  if (ks.empty()) ks = {0, 1, 2, 3};
  auto series = estimate_F_empirical(
      provider, ks, opts.egos == "top" ? names : std::vector<std::string>{});
  {
    auto os = open_out(opts.out, "f_hat.csv");
    write_empirical_f_csv(series, os);
  }
  {
    auto os = open_out(opts.out, "summary.txt");
    os << "lines = " << stats.lines << "\n"
       << "parsed = " << stats.parsed << "\n"
       << "skipped = " << stats.skipped << "\n"
       << "m_cap = " << series.m_cap << "\n"
       << "top_authors = " << top.ranked.size() << "\n"
       << "fewer_than_requested = " << (top.fewer_than_requested ? 1 : 0)
       << "\n";
  }
  return 0;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_threads = true) {
  cmd->add_option("--config", opts.config_path, "Config file (key = value)");
  cmd->add_option("--name", opts.name, "Builtin config name (fig2..fig10)");
  cmd->add_option("--set", opts.sets, "Override config key (key=value)");
  cmd->add_option("--out", opts.out, "Output directory");
  cmd->add_option("--seed", opts.seed, "Master seed override");
  if (with_threads)
    cmd->add_option("--threads", opts.threads, "Worker thread cap");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Simulation, closed-form analysis, estimation and bibliographic "
      "ingestion for a mean-field model of collaborative publishing"};
  app.require_subcommand(1);

  CommonOpts sim_opts, theory_opts, est_opts, exp_opts;
  std::optional<double> bandwidth;
  std::string kernel_name;
  ArxivOpts arxiv_opts;

  auto* sim = app.add_subcommand(
      "simulate", "Sample one run; write timeline, run and yearly indices");
  add_common(sim, sim_opts, /*with_threads=*/false);

  auto* theory = app.add_subcommand(
      "theory", "Closed-form size laws, small-window limits, expected indices");
  add_common(theory, theory_opts, /*with_threads=*/false);
  theory->add_option("--epsilon", theory_opts.epsilon,
                     "Series truncation tail bound");

  auto* est = app.add_subcommand(
      "estimate", "Estimate the inclusion law and intensity from one run");
  add_common(est, est_opts, /*with_threads=*/false);
  est->add_option("--bandwidth", bandwidth, "Kernel bandwidth (months)");
  est->add_option("--kernel", kernel_name,
                  "Kernel: box | triangular | epanechnikov");

  auto* exp = app.add_subcommand(
      "experiment", "Replicated studies with mean/SE tables");
  add_common(exp, exp_opts);

  auto* arx = app.add_subcommand(
      "arxiv", "Empirical collaboration statistics from metadata JSONL");
  arx->add_option("--input", arxiv_opts.input, "Metadata JSON-lines file")
      ->required();
  arx->add_option("--discipline", arxiv_opts.discipline,
                  "Category filter (archive name, or physics bundle)");
  arx->add_option("--top-k", arxiv_opts.top_k, "Productive-author count");
  arx->add_option("--seed", arxiv_opts.seed, "Author-sampling seed");
  arx->add_option("--out", arxiv_opts.out, "Output directory");
  arx->add_option("--sample-size", arxiv_opts.sample_size,
                  "Authors sampled for correlations");
  arx->add_option("--delta-years", arxiv_opts.delta_years,
                  "Correlation window length in years");
  arx->add_option("--f-k", arxiv_opts.f_ks,
                  "Inclusion-law classes to estimate (default 0 1 2 3)");
  arx->add_option("--egos", arxiv_opts.egos,
                  "Ego universe for the inclusion law: all | top");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return run_simulate(sim_opts);
    if (theory->parsed()) return run_theory(theory_opts);
    if (est->parsed()) return run_estimate(est_opts, bandwidth, kernel_name);
    if (exp->parsed()) return run_experiment_cmd(exp_opts);
    if (arx->parsed()) return run_arxiv(arxiv_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#ifndef COLLAB_EXPERIMENTS_HPP_
#define COLLAB_EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "collab/config.hpp"
#include "collab/intensity.hpp"
#include "collab/law.hpp"

namespace collab {

inline constexpr std::uint64_t kDefaultSeed = 20250819;

// A reproducible simulation study: replicate runs of the paper process
// with yearly collaboration indices, an expected-coauthors curve, or an
// estimator calibration study, selected by `outputs`.
struct ExperimentConfig {
  std::string name;
  std::uint32_t num_authors = 100;
  double horizon = 360;      // months
  double year_length = 12;   // months
  std::size_t replicates = 10;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  std::vector<std::string> outputs;  // indices | coauthor_curve | estimator_study
  std::string law_kind;
  CoauthorshipLaw law = CoauthorshipLaw::constant(0);
  IntensityFunction intensity = IntensityFunction::constant(0);

  // coauthor_curve settings
  std::size_t curve_n_max = 30;
  std::size_t curve_runs = 1000;

  // estimator_study settings
  std::size_t study_n = 6;
  std::uint32_t study_k = 1;
  std::vector<std::uint32_t> study_grid;
  std::size_t study_replicates = 1000;
  double study_level = 0.05;

  std::string text;  // canonical config the experiment was built from
};

// Consumes recognized keys from cfg; call cfg.reject_unknown() afterwards.
ExperimentConfig parse_experiment_config(ConfigMap& cfg);

// Built-in study configurations, keyed by short names (fig2..fig10).
std::vector<std::string> builtin_config_names();
std::string builtin_config_text(const std::string& name);

struct IndexAggregate {
  std::size_t used = 0;  // replicates whose window held papers
  std::optional<double> mean;
  std::optional<double> se;  // sample sd / sqrt(used); needs used >= 2
};

struct YearRow {
  std::size_t year = 0;
  IndexAggregate ci, dc, cc;
};

struct CurveRow {
  std::size_t n = 0;
  double mc_mean = 0;
  double mc_se = 0;
  double closed_form = 0;
};

struct EstimatorStudyRow {
  std::uint32_t num_authors = 0;
  std::size_t n = 0;
  std::uint32_t k = 0;
  double emp_var_scaled_f = 0;  // Var of sqrt(L) (Fhat - F) over replicates
  double sigma2_f = 0;          // F (1-F) / p_{n-1,k}
  double coverage_f = 0;
  double coverage_a = 0;
  double coverage_b = 0;
  double rmse_f = 0;
  double rmse_a = 0;
  double rmse_b = 0;
};

struct ExperimentResult {
  std::vector<YearRow> years;
  // Expected index constants when the law is constant; otherwise unset.
  std::optional<double> theory_ci, theory_dc, theory_cc;
  std::vector<CurveRow> curve;
  std::vector<EstimatorStudyRow> study;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

struct EstimatorStudyConfig {
  CoauthorshipLaw law = CoauthorshipLaw::constant(0);
  std::size_t n = 6;
  std::uint32_t k = 1;
  std::vector<std::uint32_t> grid;
  std::size_t replicates = 1000;
  double level = 0.05;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
};

std::vector<EstimatorStudyRow> run_estimator_study(
    const EstimatorStudyConfig& config);

void write_indices_csv(const ExperimentResult& result, std::ostream& os);
void write_curve_csv(const ExperimentResult& result, std::ostream& os);
void write_study_csv(const ExperimentResult& result, std::ostream& os);

// Runs fn(0..count-1) on up to `threads` workers; each index must write
// only to its own slot so results do not depend on scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace collab

#endif  // COLLAB_EXPERIMENTS_HPP_

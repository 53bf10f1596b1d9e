#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <collab/closed_form.hpp>
#include <collab/config.hpp>
#include <collab/experiments.hpp>
#include <collab/law.hpp>

#include "oracles.hpp"

using namespace collab;

namespace {

ConfigMap parse_text(const std::string& text) {
  return ConfigMap::parse(text);
}

ExperimentConfig config_from_text(const std::string& text) {
  ConfigMap cfg = parse_text(text);
  ExperimentConfig config = parse_experiment_config(cfg);
  cfg.reject_unknown();
  return config;
}

std::string indices_csv(const ExperimentResult& result) {
  std::ostringstream os;
  write_indices_csv(result, os);
  return os.str();
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("experiment config defaults") {
  ExperimentConfig config = config_from_text(
      "law.kind = constant\n"
      "law.p = 0.1\n"
      "outputs = coauthor_curve\n");
  CHECK(config.name == "");
  CHECK(config.num_authors == 100);
  CHECK(config.horizon == doctest::Approx(360.0));
  CHECK(config.year_length == doctest::Approx(12.0));
  CHECK(config.replicates == 10);
  CHECK(config.seed == kDefaultSeed);
  CHECK(config.threads == 1);
  REQUIRE(config.outputs.size() == 1);
  CHECK(config.outputs[0] == "coauthor_curve");
  CHECK(config.law_kind == "constant");
  CHECK(config.law.evaluate(3, 1) == doctest::Approx(0.1));
  CHECK(config.curve_n_max == 30);
  CHECK(config.curve_runs == 1000);
  CHECK(config.study_n == 6);
  CHECK(config.study_k == 1);
  CHECK(config.study_grid == std::vector<std::uint32_t>{100, 1000, 10000});
  CHECK(config.study_replicates == 1000);
  CHECK(config.study_level == doctest::Approx(0.05));
  // The canonical text round-trips through the config map.
  CHECK(config.text.find("law.kind = constant\n") != std::string::npos);
}

TEST_CASE("experiment config validation") {
  // Default outputs is `indices`, which needs an intensity.
  ConfigMap no_intensity = parse_text("law.kind = constant\nlaw.p = 0.1\n");
  CHECK_THROWS_AS(parse_experiment_config(no_intensity), std::runtime_error);

  ConfigMap no_law = parse_text("outputs = coauthor_curve\n");
  CHECK_THROWS_AS(parse_experiment_config(no_law), std::runtime_error);

  ConfigMap bad_output = parse_text(
      "law.kind = constant\nlaw.p = 0.1\noutputs = histogram\n");
  CHECK_THROWS_WITH_AS(parse_experiment_config(bad_output),
                       doctest::Contains("unknown output"),
                       std::runtime_error);
}

TEST_CASE("builtin configs parse cleanly") {
  std::vector<std::string> names = builtin_config_names();
  CHECK(names == std::vector<std::string>{"fig2", "fig3", "fig4", "fig5",
                                          "fig6", "fig7", "fig8", "fig9",
                                          "fig10"});
  for (const auto& name : names) {
    CAPTURE(name);
    ExperimentConfig config = config_from_text(builtin_config_text(name));
    CHECK(config.name == name);
    CHECK(config.num_authors == 100);
    CHECK(config.outputs.size() == 1);
  }
  CHECK_THROWS_WITH_AS(builtin_config_text("fig1"),
                       doctest::Contains("unknown builtin"),
                       std::runtime_error);
}

TEST_CASE("builtin configs carry the intended models") {
  // Team-growth study: harmonic-linear law, mean curve output.
  ExperimentConfig fig2 = config_from_text(builtin_config_text("fig2"));
  CHECK(fig2.outputs[0] == "coauthor_curve");
  std::vector<double> curve =
      expected_coauthors_closed_form(fig2.law, fig2.num_authors, 1);
  // E#C_1 = L b_1 = 100 * 0.05 * (1 - 1/log 3).
  CHECK(curve[1] == doctest::Approx(0.4488038668658135).epsilon(1e-12));

  // Index studies: k-affine law with clamp.
  ExperimentConfig fig4 = config_from_text(builtin_config_text("fig4"));
  CHECK(fig4.law.evaluate(4, 3) == doctest::Approx(0.155).epsilon(1e-12));
  CHECK(fig4.law.evaluate(26, 25) == doctest::Approx(1.0).epsilon(1e-12));

  // n-ramp law.
  ExperimentConfig fig5 = config_from_text(builtin_config_text("fig5"));
  CHECK(fig5.law.evaluate(90, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fig5.law.evaluate(400, 7) == doctest::Approx(1.0).epsilon(1e-12));

  // Stepped publication rate.
  ExperimentConfig fig6 = config_from_text(builtin_config_text("fig6"));
  CHECK(fig6.intensity(50.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(fig6.intensity(150.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(fig6.intensity(300.0) == doctest::Approx(0.5).epsilon(1e-12));

  // Growing publication rate, capped at 1 (and at 0.5 in the variant).
  ExperimentConfig fig9 = config_from_text(builtin_config_text("fig9"));
  CHECK(fig9.intensity(50.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(fig9.intensity(150.0) == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(fig9.intensity(800.0) == doctest::Approx(1.0).epsilon(1e-12));
  ExperimentConfig fig10 = config_from_text(builtin_config_text("fig10"));
  CHECK(fig10.intensity(800.0) == doctest::Approx(0.5).epsilon(1e-12));
}

namespace {

std::string small_indices_text(unsigned threads, std::size_t replicates) {
  std::ostringstream os;
  os << "L = 15\n"
     << "law.kind = constant\n"
     << "law.p = 0.15\n"
     << "intensity.kind = constant\n"
     << "intensity.rate = 0.4\n"
     << "horizon_months = 36\n"
     << "replicates = " << replicates << "\n"
     << "threads = " << threads << "\n"
     << "seed = 777\n"
     << "outputs = indices\n";
  return os.str();
}

}  // namespace

TEST_CASE("index experiment is deterministic and thread-invariant") {
  ExperimentConfig config = config_from_text(small_indices_text(1, 4));
  std::string first = indices_csv(run_experiment(config));
  std::string second = indices_csv(run_experiment(config));
  CHECK(first == second);

  ExperimentConfig threaded = config_from_text(small_indices_text(2, 4));
  CHECK(indices_csv(run_experiment(threaded)) == first);

  // Three years of data plus the header.
  CHECK(count_lines(first) == 4);
  CHECK(first.rfind("year,mean_ci,se_ci,mean_dc,se_dc,mean_cc,se_cc,"
                    "theory_ci,theory_dc,theory_cc\n", 0) == 0);
}

TEST_CASE("constant-law experiment reports index limits") {
  ExperimentConfig config = config_from_text(small_indices_text(1, 2));
  config.num_authors = 20;
  config.law = CoauthorshipLaw::constant(0.1);
  ExperimentResult result = run_experiment(config);
  REQUIRE(result.theory_ci.has_value());
  REQUIRE(result.theory_dc.has_value());
  REQUIRE(result.theory_cc.has_value());
  // E phi(B+1) for B ~ Binomial(20, 0.1).
  CHECK(*result.theory_ci == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(*result.theory_dc ==
        doctest::Approx(1.0 - std::pow(0.9, 20)).epsilon(1e-9));
  double mean_inv = (1.0 - std::pow(0.9, 21)) / (21.0 * 0.1);
  CHECK(*result.theory_cc == doctest::Approx(1.0 - mean_inv).epsilon(1e-9));
}

TEST_CASE("history-dependent law omits index limits") {
  ExperimentConfig config = config_from_text(
      "L = 12\n"
      "law.kind = linear\n"
      "law.a = 0.0001\n"
      "law.b = 0.05\n"
      "intensity.kind = constant\n"
      "intensity.rate = 0.4\n"
      "horizon_months = 24\n"
      "replicates = 3\n"
      "outputs = indices\n");
  ExperimentResult result = run_experiment(config);
  CHECK(!result.theory_ci.has_value());
  CHECK(!result.theory_dc.has_value());
  CHECK(!result.theory_cc.has_value());
  std::string csv = indices_csv(result);
  CHECK(csv.rfind("year,mean_ci,se_ci,mean_dc,se_dc,mean_cc,se_cc\n", 0) == 0);
}

TEST_CASE("single replicate leaves standard errors unset") {
  ExperimentConfig config = config_from_text(small_indices_text(1, 1));
  ExperimentResult result = run_experiment(config);
  REQUIRE(result.years.size() == 3);
  for (const auto& row : result.years) {
    CHECK(row.ci.used <= 1);
    CHECK(!row.ci.se.has_value());
    CHECK(!row.dc.se.has_value());
    CHECK(!row.cc.se.has_value());
  }
}

TEST_CASE("mean-coauthors curve matches the closed form") {
  ExperimentConfig config = config_from_text(
      "L = 10\n"
      "law.kind = constant\n"
      "law.p = 0.2\n"
      "seed = 4242\n"
      "outputs = coauthor_curve\n"
      "curve.n_max = 5\n"
      "curve.runs = 2000\n");
  ExperimentResult result = run_experiment(config);
  REQUIRE(result.curve.size() == 5);
  for (std::size_t i = 0; i < result.curve.size(); ++i) {
    const CurveRow& row = result.curve[i];
    CHECK(row.n == i + 1);
    // A constant law has no reinforcement: E #C_n = L p at every n.
    CHECK(row.closed_form == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(row.mc_se > 0.0);
    CHECK(std::abs(row.mc_mean - row.closed_form) <= 4.0 * row.mc_se);
  }
  std::ostringstream os;
  write_curve_csv(result, os);
  CHECK(os.str().rfind("n,mc_mean,mc_se,closed_form\n", 0) == 0);
  CHECK(count_lines(os.str()) == 6);
}

TEST_CASE("estimator study calibrates the occupation-ratio estimator") {
  EstimatorStudyConfig config;
  config.law = CoauthorshipLaw::constant(0.3);
  config.n = 3;
  config.k = 0;
  config.grid = {60};
  config.replicates = 400;
  config.level = 0.05;
  config.seed = 424242;
  std::vector<EstimatorStudyRow> rows = run_estimator_study(config);
  REQUIRE(rows.size() == 1);
  const EstimatorStudyRow& row = rows[0];
  CHECK(row.num_authors == 60);
  CHECK(row.n == 3);
  CHECK(row.k == 0);
  // sigma2 = F (1 - F) / P(class), class prob = (1-p)^2 after two papers.
  CHECK(row.sigma2_f == doctest::Approx(0.3 * 0.7 / 0.49).epsilon(1e-12));
  CHECK(row.emp_var_scaled_f > 0.25);
  CHECK(row.emp_var_scaled_f < 0.65);
  CHECK(row.coverage_f > 0.88);
  CHECK(row.coverage_f <= 1.0);
  CHECK(row.coverage_a > 0.85);
  CHECK(row.coverage_b > 0.85);
  CHECK(row.rmse_f > 0.05);
  CHECK(row.rmse_f < 0.13);
  CHECK(row.rmse_a < 0.15);
  CHECK(row.rmse_b < 0.12);

  ExperimentResult result;
  result.study = rows;
  std::ostringstream os;
  write_study_csv(result, os);
  CHECK(os.str().rfind("L,n,k,emp_var_scaled_f,sigma2_f,coverage_f,"
                       "coverage_a,coverage_b,rmse_f,rmse_a,rmse_b\n", 0) == 0);
  CHECK(count_lines(os.str()) == 2);

  EstimatorStudyConfig bad = config;
  bad.n = 0;
  CHECK_THROWS_AS(run_estimator_study(bad), std::invalid_argument);
}

TEST_CASE("estimator study variance shrinks on the 1/L scale") {
  EstimatorStudyConfig config;
  config.law = CoauthorshipLaw::linear(
      [](std::size_t n) { return 0.08 / static_cast<double>(n); },
      [](std::size_t) { return 0.1; });
  config.n = 4;
  config.k = 1;
  config.grid = {50, 400};
  config.replicates = 300;
  config.seed = 990011;
  std::vector<EstimatorStudyRow> rows = run_estimator_study(config);
  REQUIRE(rows.size() == 2);
  // Raw estimator spread shrinks with L; the L-scaled spread stays near
  // the Bernoulli-reduction constant.
  CHECK(rows[1].rmse_f < rows[0].rmse_f);
  for (const auto& row : rows) {
    CAPTURE(row.num_authors);
    CHECK(row.emp_var_scaled_f / row.sigma2_f > 0.55);
    CHECK(row.emp_var_scaled_f / row.sigma2_f < 1.8);
  }
  // Normal-theory coverage needs a reasonably filled class; the L = 50 row
  // is too discrete for the nominal level to bind.
  CHECK(rows[1].coverage_f > 0.88);
}

TEST_CASE("parallel_for covers every slot exactly once") {
  for (unsigned threads : {0u, 1u, 3u, 8u}) {
    CAPTURE(threads);
    std::vector<int> hits(10, 0);
    parallel_for(hits.size(), threads,
                 [&](std::size_t i) { hits[i] += static_cast<int>(i) + 1; });
    for (std::size_t i = 0; i < hits.size(); ++i)
      CHECK(hits[i] == static_cast<int>(i) + 1);
  }
  bool called = false;
  parallel_for(0, 4, [&](std::size_t) { called = true; });
  CHECK(!called);
}

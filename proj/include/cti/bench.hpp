#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cti/estimators.hpp"
#include "cti/model.hpp"

namespace cti {

struct ExperimentConfig {
  std::string model = "linreg-known";
  int m = 50;
  int N = 1000;
  double burn_frac = 0.1;
  double eps = 0.5;
  std::vector<std::string> estimators = {"TI", "CTI"};
  std::vector<int> degrees = {0, 1, 2};     // CTI/CAIS degrees; TI is degree 0
  std::vector<int> quadratures = {1, 2};
  int replicates = 20;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int threads = 1;
  bool paper_scale = false;
};

ExperimentConfig config_from_json_file(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);

// model registry ids: linreg-known, radiata1, radiata2, pima1, pima2,
// goodwin3, goodwin4, logistic-synthetic
std::unique_ptr<DifferentiableModel> make_model(const std::string& id, std::uint64_t seed = 0);
std::vector<std::string> model_registry();

struct ResultRow {
  std::string estimator;
  int degree = 0;
  int quadrature = 0;  // 0 for path-sampling-free estimators (AIS/CAIS)
  int N = 0;
  int replicates = 0;
  int failed_replicates = 0;
  double mean = 0.0;
  double sd = 0.0;
  double mse = 0.0;     // NaN when the model has no closed-form truth
  double mse_se = 0.0;  // NaN likewise
  std::uint64_t traces_hash = 0;  // combined hash of the traces the row used
  std::vector<double> estimates;  // per replicate, successful ones only
};

struct CurvePoint {
  int degree = 0;
  int rung = 0;
  double t = 0.0;
  double r_mean = 1.0;
  double r_se = 0.0;
  double integrand_mean = 0.0;
  double integrand_sd = 0.0;
  double cvar_mean = 0.0;
};

struct ResultTable {
  ExperimentConfig config;
  std::optional<double> truth;
  std::vector<ResultRow> rows;
  std::vector<CurvePoint> curves;
  std::vector<std::string> failures;
};

// Runs config.replicates independent populations (seed + replicate index) and
// applies every requested estimator to each trace. A replicate abort is
// recorded and the remaining replicates continue.
ResultTable run_experiment(const ExperimentConfig& cfg);

// results.json, results.csv, rt_curve.csv, integrands.csv and (optionally)
// SVG renderings of the R(t) and integrand curves
void emit_outputs(const ResultTable& table, const std::string& dir, bool svg = true);

// parses the numeric table back from results.csv (estimates lists live only
// in results.json)
std::vector<ResultRow> parse_results_csv(const std::string& path);

// Bayes-factor benchmark: paired replicates of two models, log BF per
// replicate = difference of the paired log-evidence estimates.
struct BfResult {
  ResultTable model1, model2;
  std::vector<double> log_bf;   // per replicate, CTI rows of matching settings
  double mean = 0.0, sd = 0.0;
  std::optional<double> truth;  // closed-form log BF when both models have one
};

BfResult run_bf_experiment(const ExperimentConfig& cfg1, const ExperimentConfig& cfg2,
                           ZvDegree degree, int quadrature);

}  // namespace cti

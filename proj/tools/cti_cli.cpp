#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "cti/bench.hpp"
#include "cti/data.hpp"
#include "cti/ladder.hpp"
#include "cti/mcmc.hpp"
#include "cti/model.hpp"
#include "cti/rng.hpp"

namespace {

using namespace cti;

void dump_trace_csv(const ChainTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  const int d = trace.dim();
  out << "rung,t,sweep,g";
  for (int j = 0; j < d; ++j) out << ",theta_" << j;
  for (int j = 0; j < d; ++j) out << ",z_" << j;
  out << "\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << "," << buf;
  };
  for (int r = 0; r < trace.n_rungs(); ++r)
    for (int n = 0; n < trace.N; ++n) {
      out << r;
      put(trace.rungs[r]);
      out << "," << n;
      put(trace.g[r][n]);
      for (int j = 0; j < d; ++j) put(trace.theta[r](n, j));
      for (int j = 0; j < d; ++j) put(trace.z[r](n, j));
      out << "\n";
    }
}

void print_table(const ResultTable& table) {
  if (table.truth)
    std::printf("truth          %.6f\n", *table.truth);
  std::printf("%-6s %-6s %-4s %-5s %12s %12s %12s\n", "est", "degree", "quad", "reps",
              "mean", "sd", "mse");
  for (const auto& r : table.rows)
    std::printf("%-6s %-6d %-4d %-5d %12.6f %12.6f %12.6g\n", r.estimator.c_str(), r.degree,
                r.quadrature, r.replicates, r.mean, r.sd, r.mse);
  for (const auto& f : table.failures) std::fprintf(stderr, "failure: %s\n", f.c_str());
}

int cmd_run(const ExperimentConfig& cfg, bool svg, const std::string& bf_with, int bf_degree,
            int bf_quadrature) {
  if (!bf_with.empty()) {
    ExperimentConfig cfg2 = cfg;
    cfg2.model = bf_with;
    cfg2.seed = cfg.seed + 1000;
    BfResult bf = run_bf_experiment(cfg, cfg2, zv_degree_from_int(bf_degree), bf_quadrature);
    std::printf("log BF (%s over %s): mean %.6f sd %.6f", bf_with.c_str(), cfg.model.c_str(),
                bf.mean, bf.sd);
    if (bf.truth) std::printf(" truth %.6f", *bf.truth);
    std::printf("\n");
    emit_outputs(bf.model1, cfg.out_dir + "/model1", svg);
    emit_outputs(bf.model2, cfg.out_dir + "/model2", svg);
    nlohmann::json j;
    j["model1"] = cfg.model;
    j["model2"] = bf_with;
    j["degree"] = bf_degree;
    j["quadrature"] = bf_quadrature;
    j["log_bf"] = bf.log_bf;
    j["mean"] = bf.mean;
    j["sd"] = bf.sd;
    if (bf.truth) j["truth"] = *bf.truth;
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "bf.json");
    out << j.dump(2) << "\n";
    return 0;
  }
  ResultTable table = run_experiment(cfg);
  emit_outputs(table, cfg.out_dir, svg);
  print_table(table);
  std::printf("outputs written to %s\n", cfg.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"model evidence estimation with thermodynamic integration and control variates"};
  app.require_subcommand(0, 1);  // zero so --list-models works alone
  std::string data_dir;
  app.add_option("--data-dir", data_dir, "directory holding the bundled csv datasets");

  // run
  auto* run = app.add_subcommand("run", "run a replicated experiment and write result tables");
  std::string config_path, bf_with;
  ExperimentConfig cfg;
  bool no_svg = false;
  int bf_degree = 2, bf_quadrature = 2;
  run->add_option("config", config_path, "json config file; flags override its values");
  run->add_option("--model", cfg.model, "model id (see --list-models)");
  run->add_option("--m", cfg.m, "number of ladder segments (rungs = m + 1)");
  run->add_option("--n", cfg.N, "retained samples per rung");
  run->add_option("--eps", cfg.eps, "mMALA step size");
  run->add_option("--burn-frac", cfg.burn_frac, "burn-in fraction of N");
  run->add_option("--replicates", cfg.replicates, "independent repetitions");
  run->add_option("--seed", cfg.seed, "master seed; replicate r uses seed + r");
  run->add_option("--out", cfg.out_dir, "output directory");
  run->add_option("--threads", cfg.threads, "worker threads for within-replicate rung updates");
  run->add_option("--estimators", cfg.estimators, "subset of TI CTI AIS CAIS");
  run->add_option("--degrees", cfg.degrees, "polynomial degrees for controlled estimators");
  run->add_option("--quadratures", cfg.quadratures, "quadrature orders (1 and/or 2)");
  run->add_flag("--paper-scale", cfg.paper_scale,
                "replicate counts used for the published tables (100; 10 for goodwin)");
  run->add_flag("--no-svg", no_svg, "skip svg renderings");
  run->add_option("--bf-with", bf_with,
                  "second model id: report the log Bayes factor of it over --model");
  run->add_option("--bf-degree", bf_degree, "degree for the Bayes factor estimator");
  run->add_option("--bf-quadrature", bf_quadrature, "quadrature for the Bayes factor estimator");

  // evidence
  auto* ev = app.add_subcommand("evidence", "single-run log evidence estimate");
  std::string ev_model, ev_estimator = "CTI", dump_path;
  int ev_degree = 2, ev_quadrature = 2, ev_m = 50, ev_n = 1000;
  double ev_eps = 0.5, ev_burn = 0.1;
  std::uint64_t ev_seed = 1;
  ev->add_option("model", ev_model, "model id")->required();
  ev->add_option("--estimator", ev_estimator, "TI, CTI, AIS, or CAIS");
  ev->add_option("--degree", ev_degree, "polynomial degree (0, 1, 2)");
  ev->add_option("--quadrature", ev_quadrature, "quadrature order (1 or 2)");
  ev->add_option("--m", ev_m, "ladder segments");
  ev->add_option("--n", ev_n, "retained samples per rung");
  ev->add_option("--eps", ev_eps, "mMALA step size");
  ev->add_option("--burn-frac", ev_burn, "burn-in fraction");
  ev->add_option("--seed", ev_seed, "population seed");
  ev->add_option("--dump-trace", dump_path, "write the retained samples to a csv file");

  // gradcheck
  auto* gc = app.add_subcommand("gradcheck", "finite-difference check of model gradients");
  std::string gc_model;
  std::uint64_t gc_seed = 1;
  int gc_points = 5;
  double gc_step = 1e-5, gc_tol = 1e-4;
  gc->add_option("model", gc_model, "model id")->required();
  gc->add_option("--seed", gc_seed, "seed for the prior draws");
  gc->add_option("--points", gc_points, "number of prior draws to test");
  gc->add_option("--step", gc_step, "finite difference step");
  gc->add_option("--tol", gc_tol, "max relative error to pass");

  // replicate
  auto* rep = app.add_subcommand(
      "replicate", "run a bundled benchmark: regression, radiata, pima, or goodwin");
  std::string rep_id;
  int rep_replicates = 0, rep_m = 0, rep_n = 0;
  double rep_eps = 0.0;
  std::uint64_t rep_seed = 1;
  std::string rep_out;
  bool rep_paper_scale = false, rep_no_svg = false;
  rep->add_option("benchmark", rep_id, "benchmark id")->required();
  rep->add_option("--replicates", rep_replicates, "override the bundled replicate count");
  rep->add_option("--m", rep_m, "override the bundled ladder size");
  rep->add_option("--n", rep_n, "override the bundled samples per rung");
  rep->add_option("--eps", rep_eps, "override the bundled step size");
  rep->add_option("--seed", rep_seed, "master seed");
  rep->add_option("--out", rep_out, "output directory (default out/<benchmark>)");
  rep->add_flag("--paper-scale", rep_paper_scale,
                "replicate counts used for the published tables (100; 10 for goodwin)");
  rep->add_flag("--no-svg", rep_no_svg, "skip svg renderings");

  bool list_models = false;
  app.add_flag("--list-models", list_models, "print the model registry and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!data_dir.empty()) set_data_dir(data_dir);
    if (list_models) {
      for (const auto& m : model_registry()) std::printf("%s\n", m.c_str());
      return 0;
    }

    if (run->parsed()) {
      if (!config_path.empty()) {
        // flags given on the command line override the file
        ExperimentConfig merged = config_from_json_file(config_path);
        if (run->count("--model")) merged.model = cfg.model;
        if (run->count("--m")) merged.m = cfg.m;
        if (run->count("--n")) merged.N = cfg.N;
        if (run->count("--eps")) merged.eps = cfg.eps;
        if (run->count("--burn-frac")) merged.burn_frac = cfg.burn_frac;
        if (run->count("--replicates")) merged.replicates = cfg.replicates;
        if (run->count("--seed")) merged.seed = cfg.seed;
        if (run->count("--out")) merged.out_dir = cfg.out_dir;
        if (run->count("--threads")) merged.threads = cfg.threads;
        if (run->count("--estimators")) merged.estimators = cfg.estimators;
        if (run->count("--degrees")) merged.degrees = cfg.degrees;
        if (run->count("--quadratures")) merged.quadratures = cfg.quadratures;
        if (run->count("--paper-scale")) merged.paper_scale = cfg.paper_scale;
        cfg = merged;
      }
      return cmd_run(cfg, !no_svg, bf_with, bf_degree, bf_quadrature);
    }

    if (ev->parsed()) {
      auto model = make_model(ev_model, ev_seed);
      TemperatureLadder ladder = quintic_ladder(ev_m);
      McmcOptions opt;
      opt.N = ev_n;
      opt.burn_frac = ev_burn;
      opt.eps = ev_eps;
      ChainTrace trace = run_population(*model, ladder, opt, ev_seed);
      if (!dump_path.empty()) dump_trace_csv(trace, dump_path);

      EvidenceEstimate est;
      if (ev_estimator == "TI")
        est = ti_estimate(trace, ZvDegree::none, ev_quadrature);
      else if (ev_estimator == "CTI")
        est = ti_estimate(trace, zv_degree_from_int(ev_degree), ev_quadrature);
      else if (ev_estimator == "AIS")
        est = ais_estimate(trace, ladder);
      else if (ev_estimator == "CAIS")
        est = cais_estimate(trace, ladder, zv_degree_from_int(ev_degree));
      else
        throw std::invalid_argument("unknown estimator " + ev_estimator);

      int singular = 0;
      for (bool s : est.singular_rungs) singular += s ? 1 : 0;
      std::printf("model          %s\n", ev_model.c_str());
      std::printf("estimator      %s degree %d quadrature %d\n",
                  estimator_name(est.estimator).c_str(), degree_int(est.degree),
                  est.quadrature);
      std::printf("log evidence   %.8f\n", est.log_evidence);
      if (auto truth = model->closed_form_log_evidence())
        std::printf("closed form    %.8f\n", *truth);
      if (singular > 0) std::printf("singular rungs %d\n", singular);
      const auto [amin, amax] =
          std::minmax_element(trace.accept_rate.begin(), trace.accept_rate.end());
      std::printf("accept rate    %.3f..%.3f  swap %.3f\n", *amin, *amax,
                  trace.swap_accept_rate);
      return 0;
    }

    if (gc->parsed()) {
      auto model = make_model(gc_model, gc_seed);
      std::mt19937_64 rng = substream(gc_seed, 0x97adc0ull);
      bool all_pass = true;
      for (int p = 0; p < gc_points; ++p) {
        const Eigen::VectorXd theta = model->sample_prior(rng);
        const GradCheckReport report = check_gradients(*model, theta, gc_step);
        const bool ok = report.pass(gc_tol);
        all_pass = all_pass && ok;
        std::printf("point %d: max rel err %.3e  %s\n", p, report.max_rel_err,
                    ok ? "ok" : "MISMATCH");
      }
      return all_pass ? 0 : 1;
    }

    if (rep->parsed()) {
      ExperimentConfig rcfg;
      rcfg.seed = rep_seed;
      rcfg.paper_scale = rep_paper_scale;
      std::string pair_with;  // set for Bayes-factor benchmarks
      if (rep_id == "regression") {
        rcfg.model = "linreg-known";
        rcfg.estimators = {"TI", "CTI", "AIS", "CAIS"};
      } else if (rep_id == "radiata") {
        rcfg.model = "radiata1";
        pair_with = "radiata2";
      } else if (rep_id == "pima") {
        rcfg.model = "pima1";
        pair_with = "pima2";
      } else if (rep_id == "goodwin") {
        rcfg.model = "goodwin3";
        rcfg.m = 10;
        rcfg.N = 500;
        rcfg.replicates = 5;
      } else {
        throw std::invalid_argument(
            "unknown benchmark " + rep_id +
            "; bundled benchmarks: regression, radiata, pima, goodwin");
      }
      if (rep_replicates > 0) rcfg.replicates = rep_replicates;
      if (rep_m > 0) rcfg.m = rep_m;
      if (rep_n > 0) rcfg.N = rep_n;
      if (rep_eps > 0.0) rcfg.eps = rep_eps;
      rcfg.out_dir = rep_out.empty() ? "out/" + rep_id : rep_out;
      return cmd_run(rcfg, !rep_no_svg, pair_with, 2, 2);
    }
  } catch (const std::invalid_argument& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  std::fprintf(stderr, "a subcommand is required; run with --help\n");
  return 2;
}
